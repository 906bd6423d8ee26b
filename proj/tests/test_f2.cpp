#include <random>
#include <set>

#include "doctest.h"
#include "genusforge/errors.hpp"
#include "genusforge/f2.hpp"

using namespace gf;

namespace {

// Brute force: the set of all x with M x = b, for matrices with few columns.
std::vector<std::uint64_t> solutions(const F2Matrix& M, const F2Vector& b) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << M.cols()); ++x)
        if (M.apply(F2Vector::from_mask(M.cols(), x)) == b) out.push_back(x);
    return out;
}

std::size_t span_size(const std::vector<F2Vector>& vecs) {
    std::set<std::string> seen;
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << vecs.size()); ++c) {
        F2Vector acc(vecs.empty() ? 0 : vecs[0].size());
        for (std::size_t k = 0; k < vecs.size(); ++k)
            if ((c >> k) & 1U) acc ^= vecs[k];
        seen.insert(acc.to_string());
    }
    return seen.size();
}

F2Matrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, double density) {
    std::bernoulli_distribution bit(density);
    F2Matrix M(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            if (bit(rng)) M.set(i, j);
    return M;
}

}  // namespace

TEST_CASE("vector basics and tail bits stay clear") {
    F2Vector v(70);
    v.set(0);
    v.set(69);
    CHECK(v.popcount() == 2);
    CHECK(v.first_set() == 0);
    CHECK(v.to_string().size() == 70);
    CHECK(F2Vector::from_string(v.to_string()) == v);
    auto w = F2Vector::from_mask(5, 0xff);
    CHECK(w.popcount() == 5);
    CHECK(w.words()[0] == 0x1f);
    CHECK_THROWS_AS(F2Vector::from_string("012"), DomainError);
    CHECK_THROWS_AS(v ^= F2Vector(3), DomainError);
}

TEST_CASE("dot product matches parity of the intersection") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 200; ++t) {
        const std::uint64_t a = rng(), b = rng();
        const auto va = F2Vector::from_mask(64, a), vb = F2Vector::from_mask(64, b);
        CHECK(va.dot(vb) == static_cast<bool>(__builtin_popcountll(a & b) & 1));
    }
}

TEST_CASE("rank, kernel and solve agree with exhaustive enumeration") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 120; ++t) {
        const std::size_t r = 1 + rng() % 7, c = 1 + rng() % 9;
        const auto M = random_matrix(rng, r, c, t % 3 == 0 ? 0.2 : 0.5);
        const auto zero = solutions(M, F2Vector(r));
        // |ker| = 2^(c - rank)
        CHECK(zero.size() == (std::size_t{1} << (c - M.rank())));
        const auto K = M.kernel_basis();
        CHECK(K.size() == c - M.rank());
        for (const auto& k : K) CHECK(M.apply(k).is_zero());
        CHECK(span_size(K) == zero.size());
        // row rank via span size
        CHECK(span_size(M.row_list()) == (std::size_t{1} << M.rank()));

        F2Vector b(r);
        for (std::size_t i = 0; i < r; ++i)
            if (rng() & 1U) b.set(i);
        const auto sol = M.solve(b);
        const auto all = solutions(M, b);
        CHECK(sol.has_value() == !all.empty());
        if (sol) CHECK(M.apply(*sol) == b);
    }
}

TEST_CASE("transpose and multiply") {
    std::mt19937_64 rng(3);
    const auto A = random_matrix(rng, 4, 6, 0.5), B = random_matrix(rng, 6, 3, 0.5);
    const auto AB = A.multiply(B);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            bool acc = false;
            for (std::size_t k = 0; k < 6; ++k) acc ^= A.get(i, k) && B.get(k, j);
            CHECK(AB.get(i, j) == acc);
        }
    CHECK(A.transpose().transpose().row_list() == A.row_list());
    CHECK(A.rank() == A.transpose().rank());
}

TEST_CASE("span helpers") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        std::vector<F2Vector> vs;
        for (int k = 0; k < 5; ++k) vs.push_back(F2Vector::from_mask(8, rng() & (t % 2 ? 0x0f : 0xff)));
        SpanBuilder sb(8);
        MaskSpan ms;
        for (const auto& v : vs) {
            sb.add(v);
            ms.add(v.low_word());
        }
        CHECK(sb.dim() == rank_of(vs));
        CHECK(ms.dim() == rank_of(vs));
        const F2Vector probe = F2Vector::from_mask(8, rng() & 0xff);
        CHECK(sb.contains(probe) == in_span(vs, probe));
        CHECK(ms.contains(probe.low_word()) == in_span(vs, probe));
        CHECK(same_span(vs, sb.basis()));
    }
}

TEST_CASE("identity matrix and empty inputs") {
    CHECK(F2Matrix::identity(5).rank() == 5);
    CHECK(F2Matrix::identity(5).kernel_basis().empty());
    F2Matrix Z(0, 4);
    CHECK(Z.kernel_basis().size() == 4);
    CHECK(in_span({}, F2Vector(3)));
    CHECK(!in_span({}, F2Vector::unit(3, 1)));
}
