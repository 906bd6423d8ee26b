#include "genusforge/arith.hpp"

#include <numeric>

#include "genusforge/errors.hpp"
#include "genusforge/shape.hpp"

namespace gf {

int jacobi(std::int64_t a, std::uint64_t m) {
    if (m == 0 || (m & 1U) == 0) throw DomainError("Jacobi symbol needs an odd positive modulus");
    std::int64_t r = a % static_cast<std::int64_t>(m);
    std::uint64_t x = static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(m) : r);
    int sign = 1;
    while (x != 0) {
        while ((x & 1U) == 0) {
            x >>= 1;
            const auto m8 = m & 7U;
            if (m8 == 3 || m8 == 5) sign = -sign;
        }
        std::swap(x, m);
        if ((x & 3U) == 3 && (m & 3U) == 3) sign = -sign;
        x %= m;
    }
    return m == 1 ? sign : 0;
}

std::vector<int> AcceptableVector::omega() const {
    std::vector<int> w;
    for (const auto& p : primes) w.push_back(static_cast<int>(p.size()));
    return w;
}

int AcceptableVector::total_omega() const {
    int t = 0;
    for (int w : omega()) t += w;
    return t;
}

std::uint64_t parse_decimal(const std::string& s) {
    if (s.empty() || s.size() > 19) throw DomainError("not a decimal integer of at most 19 digits: '" + s + "'");
    std::uint64_t v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') throw DomainError("not a decimal integer: '" + s + "'");
        v = v * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return v;
}

namespace {

std::vector<std::uint64_t> factor(std::uint64_t m, std::uint64_t limit, int entry) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = 2; p <= limit && p * p <= m; p += (p == 2 ? 1 : 2)) {
        if (m % p) continue;
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        if (e > 1) throw ValidationError("entry " + std::to_string(entry + 1) + " is divisible by " + std::to_string(p) + "^2", entry, "squarefree");
        out.push_back(p);
    }
    if (m > 1) {
        const auto L = static_cast<unsigned __int128>(limit);
        if (static_cast<unsigned __int128>(m) > L * L)
            throw ResourceError("entry " + std::to_string(entry + 1) + " has a cofactor beyond the trial-division budget");
        out.push_back(m);
    }
    return out;
}

}  // namespace

AcceptableVector validate_acceptable(const std::vector<std::uint64_t>& a, std::uint64_t trial_limit) {
    AcceptableVector v;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const int e = static_cast<int>(i);
        if (a[i] < 2) throw ValidationError("entry " + std::to_string(i + 1) + " is below 2", e, "range");
        auto ps = factor(a[i], trial_limit, e);
        for (auto p : ps)
            if (p % 4 != 1)
                throw ValidationError("entry " + std::to_string(i + 1) + " has the prime factor " + std::to_string(p) + ", not 1 mod 4", e, "one-mod-four");
        for (std::size_t j = 0; j < i; ++j)
            if (std::gcd(a[i], a[j]) != 1)
                throw ValidationError("entries " + std::to_string(j + 1) + " and " + std::to_string(i + 1) + " share a factor", e, "coprime");
        v.a.push_back(a[i]);
        v.primes.push_back(std::move(ps));
    }
    return v;
}

bool is_strongly_consistent(const AcceptableVector& v) {
    for (std::size_t i = 0; i < v.primes.size(); ++i)
        for (std::size_t j = i + 1; j < v.primes.size(); ++j)
            for (auto p : v.primes[i])
                for (auto q : v.primes[j])
                    if (jacobi(static_cast<std::int64_t>(q), p) != 1) return false;
    return true;
}

MaximalityBound maximality_bound(int n, int omega) {
    if (n < 1 || n > 62) throw DomainError("n must lie in 1..62");
    if (omega < 0) throw DomainError("omega must be nonnegative");
    MaximalityBound b;
    b.n = n;
    b.omega = omega;
    for (int j = 1; j <= n; ++j) {
        const auto g = static_cast<std::int64_t>(omega) * static_cast<std::int64_t>(binom(n - 1, j - 1)) - static_cast<std::int64_t>(binom(n, j));
        b.grades.push_back(g);
    }
    b.total = static_cast<std::int64_t>(omega) * (std::int64_t{1} << (n - 1)) - (std::int64_t{1} << n) + 1;
    return b;
}

MaximalityBound maximality_bound(const std::vector<int>& k) {
    if (k.empty()) throw DomainError("need at least one entry");
    int w = 0;
    for (int x : k) {
        if (x < 1) throw DomainError("omega values must be positive");
        w += x;
    }
    return maximality_bound(static_cast<int>(k.size()), w);
}

bool decide_maximal_n2(const AcceptableVector& v) {
    if (v.n() > 2) throw DomainError("maximality is undecidable at this scope for n >= 3");
    if (v.n() <= 1) return true;
    return is_strongly_consistent(v);
}

std::vector<std::uint64_t> primes_one_mod_four(std::uint64_t limit) {
    std::vector<std::uint64_t> out;
    if (limit < 5) return out;
    std::vector<bool> comp(limit + 1, false);
    for (std::uint64_t p = 2; p <= limit; ++p) {
        if (comp[p]) continue;
        if (p % 4 == 1) out.push_back(p);
        for (std::uint64_t q = p * p; q <= limit; q += p) comp[q] = true;
    }
    return out;
}

std::optional<AcceptableVector> search_consistent(const std::vector<int>& k, std::uint64_t prime_budget) {
    if (k.empty()) throw DomainError("need at least one entry");
    for (int x : k)
        if (x < 1) throw DomainError("omega values must be positive");
    if (prime_budget > 100'000'000) throw ResourceError("prime budget too large");
    const auto P = primes_one_mod_four(prime_budget);
    const std::size_t total = static_cast<std::size_t>(std::accumulate(k.begin(), k.end(), 0));
    if (P.size() < total) return std::nullopt;

    // qr[a][b]: P[a] is a square mod P[b]; symmetric by reciprocity.
    std::vector<std::vector<bool>> qr(P.size(), std::vector<bool>(P.size()));
    for (std::size_t a = 0; a < P.size(); ++a)
        for (std::size_t b = a + 1; b < P.size(); ++b) qr[a][b] = qr[b][a] = jacobi(static_cast<std::int64_t>(P[a]), P[b]) == 1;

    std::vector<int> owner;  // block of each slot
    for (std::size_t i = 0; i < k.size(); ++i)
        for (int r = 0; r < k[i]; ++r) owner.push_back(static_cast<int>(i));
    std::vector<std::size_t> pick(total);
    std::vector<bool> used(P.size(), false);

    auto fits = [&](std::size_t slot, std::size_t c) {
        for (std::size_t s = 0; s < slot; ++s)
            if (owner[s] != owner[slot] && !qr[pick[s]][c]) return false;
        return true;
    };
    auto rec = [&](auto&& self, std::size_t slot) -> bool {
        if (slot == total) return true;
        const bool same = slot > 0 && owner[slot - 1] == owner[slot];
        for (std::size_t c = same ? pick[slot - 1] + 1 : 0; c < P.size(); ++c) {
            if (used[c] || !fits(slot, c)) continue;
            pick[slot] = c;
            used[c] = true;
            if (self(self, slot + 1)) return true;
            used[c] = false;
        }
        return false;
    };
    if (!rec(rec, 0)) return std::nullopt;

    std::vector<std::uint64_t> a(k.size(), 1);
    for (std::size_t s = 0; s < total; ++s) {
        const auto prod = static_cast<unsigned __int128>(a[static_cast<std::size_t>(owner[s])]) * P[pick[s]];
        if (prod >> 64) throw ResourceError("entry exceeds 64 bits");
        a[static_cast<std::size_t>(owner[s])] = static_cast<std::uint64_t>(prod);
    }
    auto v = validate_acceptable(a);
    if (!is_strongly_consistent(v)) throw ClassificationViolation("search produced an inconsistent vector");
    return v;
}

}  // namespace gf
