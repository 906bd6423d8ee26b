#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gf {

// Jacobi symbol (a/m) for odd m >= 1.
int jacobi(std::int64_t a, std::uint64_t m);

inline constexpr std::uint64_t kTrialDivisionLimit = 1'000'000;

// Pairwise coprime squarefree entries >= 2 whose prime factors are all 1 mod 4.
struct AcceptableVector {
    std::vector<std::uint64_t> a;
    std::vector<std::vector<std::uint64_t>> primes;  // ascending, per entry
    int n() const { return static_cast<int>(a.size()); }
    std::vector<int> omega() const;
    int total_omega() const;
};

std::uint64_t parse_decimal(const std::string& s);

// Throws ValidationError naming the entry (0-based) and the rule that failed, or
// ResourceError if an entry has a cofactor beyond the square of the trial limit.
AcceptableVector validate_acceptable(const std::vector<std::uint64_t>& a, std::uint64_t trial_limit = kTrialDivisionLimit);

// Every prime of a_i is a square modulo every prime of a_j, i != j.
bool is_strongly_consistent(const AcceptableVector& v);

struct MaximalityBound {
    int n = 0;
    int omega = 0;
    std::int64_t total = 0;
    std::vector<std::int64_t> grades;  // grades[j-1] = omega C(n-1, j-1) - C(n, j)
};
MaximalityBound maximality_bound(int n, int omega);
MaximalityBound maximality_bound(const std::vector<int>& k);

// Decided for n <= 2 only; DomainError for longer vectors.
bool decide_maximal_n2(const AcceptableVector& v);

// First-fit backtracking over primes 1 mod 4 up to `prime_budget`, entry i receiving k_i
// primes in ascending order. Absent if the budget runs out.
std::optional<AcceptableVector> search_consistent(const std::vector<int>& k, std::uint64_t prime_budget);

// Primes p <= limit with p = 1 mod 4.
std::vector<std::uint64_t> primes_one_mod_four(std::uint64_t limit);

}  // namespace gf
