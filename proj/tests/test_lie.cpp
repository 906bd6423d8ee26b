#include <random>

#include "doctest.h"
#include "genusforge/errors.hpp"
#include "genusforge/lie.hpp"

using namespace gf;

namespace {

std::uint64_t total_formula(const Shape& s) { return universal_log2_formula(s); }

// Element of the whole algebra as one vector per grade.
using Elem = std::vector<F2Vector>;

Elem random_elem(const GradedLie& L, std::mt19937_64& rng) {
    Elem e;
    for (int g = 1; g <= L.grades(); ++g) {
        F2Vector v(L.dim(g));
        for (std::size_t k = 0; k < v.size(); ++k)
            if (rng() & 1U) v.set(k);
        e.push_back(v);
    }
    return e;
}

// Full bilinear bracket: only pairs with a grade-1 side contribute.
Elem full_bracket(const GradedLie& L, const Elem& a, const Elem& b) {
    Elem out;
    for (int g = 1; g <= L.grades(); ++g) out.emplace_back(L.dim(g));
    for (int g = 1; g < L.grades(); ++g) {
        out[static_cast<std::size_t>(g)] ^= L.bracket(a[0], g, b[static_cast<std::size_t>(g - 1)]);
        if (g > 1) out[static_cast<std::size_t>(g)] ^= L.bracket(b[0], g, a[static_cast<std::size_t>(g - 1)]);
    }
    return out;
}

bool is_zero(const Elem& e) {
    for (const auto& v : e)
        if (!v.is_zero()) return false;
    return true;
}

Elem add(Elem a, const Elem& b) {
    for (std::size_t g = 0; g < a.size(); ++g) a[g] ^= b[g];
    return a;
}

bool isomorphic(const GradedLie& a, const GradedLie& b) {
    const auto f = lie_epimorphism(a, b);
    const auto g = lie_epimorphism(b, a);
    return f.surjective && f.injective && g.surjective && g.injective;
}

}  // namespace

TEST_CASE("governing algebra: grade dimensions, total size and axioms") {
    for (int n = 1; n <= 5; ++n) {
        const auto L = governing_algebra(n);
        REQUIRE(L.grades() == n);
        CHECK(L.dim(1) == static_cast<std::size_t>(n));
        for (int i = 2; i <= n; ++i) CHECK(L.dim(i) == static_cast<std::size_t>(i - 1) * binom(n, i));
        CHECK(L.total_dim() == total_formula(Shape::ones(n)));
        const auto r = check_lie_axioms(L, Shape::ones(n));
        CHECK_MESSAGE(r.all(), r.failure);
        CHECK(r.jacobi);
    }
    CHECK(governing_algebra(2).total_dim() == 3);
    CHECK(governing_algebra(3).total_dim() == 8);
    CHECK(governing_algebra(4).total_dim() == 21);
    CHECK_THROWS_AS(governing_algebra(0), DomainError);
}

TEST_CASE("bracket is bilinear and satisfies Jacobi on random elements") {
    std::mt19937_64 rng(17);
    for (int n = 2; n <= 4; ++n) {
        const auto L = governing_algebra(n);
        for (int t = 0; t < 200; ++t) {
            const auto a = random_elem(L, rng), b = random_elem(L, rng), c = random_elem(L, rng);
            const auto j = add(add(full_bracket(L, a, full_bracket(L, b, c)), full_bracket(L, b, full_bracket(L, c, a))), full_bracket(L, c, full_bracket(L, a, b)));
            CHECK(is_zero(j));
            CHECK(is_zero(full_bracket(L, a, a)));
        }
    }
}

TEST_CASE("lie algebra of the universal group") {
    const std::size_t n3[] = {3, 3, 2};
    const auto L3 = lie_from_group(build_universal(3));
    REQUIRE(L3.grades() == 3);
    for (int g = 1; g <= 3; ++g) CHECK(L3.dim(g) == n3[g - 1]);
    const auto L1 = lie_from_group(build_universal(1));
    CHECK(L1.grades() == 1);
    CHECK(L1.dim(1) == 1);
    for (int n = 1; n <= 3; ++n) {
        const auto G = build_universal(n);
        const auto L = lie_from_group(G);
        CHECK((std::size_t{1} << L.total_dim()) == G.order());
        const auto r = check_lie_axioms(L, Shape::ones(n));
        CHECK_MESSAGE(r.all(), r.failure);
        // canonical identification with the pointed-set model
        CHECK(isomorphic(governing_algebra(n), L));
    }
}

TEST_CASE("identification by the explicit pairing agrees with the bracket-induced map") {
    for (int n = 2; n <= 4; ++n) {
        const auto pairing = pairing_identification(n);
        const auto f = lie_epimorphism(governing_algebra(n), cons_dual_algebra(Shape::ones(n)));
        CHECK(f.injective);
        CHECK(f.surjective);
        REQUIRE(pairing.size() == f.images.size());
        for (std::size_t g = 0; g < pairing.size(); ++g) CHECK(pairing[g] == f.images[g]);
    }
}

TEST_CASE("block algebras: dimensions, axioms and agreement with the groups") {
    for (const auto& s : shapes_up_to(5)) {
        if (s.n() > 4) continue;
        const auto L = governing_algebra_general(s);
        for (int i = 1; i <= L.grades(); ++i) CHECK(L.dim(i) == expected_cons_dim_general(s, i));
        CHECK_MESSAGE(L.total_dim() == total_formula(s), s.to_string());
        const auto r = check_lie_axioms(L, s);
        CHECK_MESSAGE(r.all(), s.to_string() << ": " << r.failure);
        CHECK(isomorphic(L, cons_dual_algebra(s)));
        if (s.all_ones()) CHECK(isomorphic(L, governing_algebra(s.n())));
        if (total_formula(s) <= 16) {
            const auto H = lie_from_group(build_universal_general(s));
            const auto rh = check_lie_axioms(H, s);
            CHECK_MESSAGE(rh.all(), s.to_string() << ": " << rh.failure);
            CHECK_MESSAGE(isomorphic(L, H), s.to_string());
        }
    }
    CHECK(governing_algebra_general(Shape({2, 2})).total_dim() == 7);
    CHECK(governing_algebra_general(Shape({3, 1})).total_dim() == 7);
    const auto L21 = lie_from_group(build_universal_general(Shape({2, 1})));
    CHECK(L21.total_dim() == 5);
    const auto r = check_lie_axioms(L21, Shape({2, 1}));
    CHECK(r.tilde1);
    CHECK(r.tilde2);
    // The universal algebra on N letters is not a block algebra for a coarser shape.
    const auto r3 = check_lie_axioms(governing_algebra(3), Shape({2, 1}));
    CHECK(!(r3.tilde1 && r3.tilde2));
}

TEST_CASE("single bracket-table flips are detected") {
    const auto base = governing_algebra(3);
    int flips = 0, caught = 0;
    for (std::size_t g = 0; g < base.br.size(); ++g)
        for (std::size_t x = 0; x < base.br[g].size(); ++x)
            for (std::size_t k = 0; k < base.br[g][x].size(); ++k)
                for (std::size_t b = 0; b < base.br[g][x][k].size(); ++b) {
                    auto M = base;
                    M.br[g][x][k].flip(b);
                    ++flips;
                    const auto r = check_lie_axioms(M, Shape::ones(3));
                    if (!r.all()) ++caught;
                    // a mutant that still passes is an expansion algebra of maximal size, hence universal
                    if (r.all()) CHECK(isomorphic(base, M));
                }
    CHECK(flips == 45);
    CHECK(caught == flips);
    // the documented case: a T_j entry in grade 2
    auto M = base;
    M.br[1][0][base.dim(2) - 1].flip(0);
    const auto r = check_lie_axioms(M, Shape::ones(3));
    CHECK(!(r.jacobi && r.axiom4));
}

TEST_CASE("unique morphisms between expansion algebras") {
    const auto U2 = governing_algebra(2), U3 = governing_algebra(3);
    const auto id = lie_epimorphism(U3, U3);
    CHECK(id.injective);
    for (int g = 1; g <= U3.grades(); ++g)
        for (std::size_t k = 0; k < U3.dim(g); ++k) CHECK(id.images[static_cast<std::size_t>(g - 1)][k] == F2Vector::unit(U3.dim(g), k));

    const auto G2 = lie_from_group(build_universal(2));
    const auto iso = lie_epimorphism(U2, G2);
    CHECK(iso.injective);
    CHECK(iso.surjective);

    const auto Q = lie_from_group(inflated_corner(build_universal(3), 2));
    const auto f = lie_epimorphism(U3, Q);
    CHECK(f.surjective);
    CHECK(f.kernel_dim() == 8 - Q.total_dim());
    CHECK(Q.total_dim() == 4);

    CHECK_THROWS_AS(lie_epimorphism(U2, U3), DomainError);
    // the abelian algebra on 3 letters is a quotient but has nothing to map onto grade 2
    const auto A = lie_from_group(abelianization(build_universal(3)));
    const auto fa = lie_epimorphism(U3, A);
    CHECK(fa.surjective);
    CHECK(fa.kernel_dim() == 5);
}

TEST_CASE("nested brackets follow the governing tensors") {
    const auto L = governing_algebra(3);
    // repeated entries vanish, the first entries commute
    CHECK(L.nested({0, 0, 1}).is_zero());
    CHECK(L.nested({0, 1, 0}).is_zero());
    CHECK(!L.nested({0, 1, 2}).is_zero());
    CHECK(L.nested({0, 1, 2}) != L.nested({1, 2, 0}));
    // Hall-Witt: [1,[2,3]] + [2,[3,1]] + [3,[1,2]] = 0
    CHECK((L.nested({0, 1, 2}) ^ L.nested({1, 2, 0}) ^ L.nested({2, 0, 1})).is_zero());
    // nilpotency class n: every bracket of length n+1 vanishes
    const auto L4 = governing_algebra(4);
    CHECK(L4.nested({0, 1, 2, 3, 0}).size() == 0);
}
