#include <cstdlib>

#include "doctest.h"
#include "genusforge/expmaps.hpp"
#include "genusforge/groups.hpp"
#include "genusforge/parallel.hpp"

using namespace gf;

TEST_CASE("thread count follows GENUSFORGE_THREADS") {
    const int t = configured_threads();
    CHECK(t >= 1);
    if (const char* env = std::getenv("GENUSFORGE_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) CHECK(t == v);
    }
    CHECK(configured_threads() == t);
}

TEST_CASE("key index") {
    KeyIndex idx(4);
    for (std::uint64_t k = 0; k < 5000; ++k) CHECK(idx.insert(Key{k} << 70 | k) == k);
    CHECK(idx.size() == 5000);
    for (std::uint64_t k = 0; k < 5000; ++k) CHECK(idx.find(Key{k} << 70 | k) == k);
    CHECK(idx.find(Key{1} << 127) == KeyIndex::none);
    CHECK(idx.insert(Key{7} << 70 | 7) == 7);
}

TEST_CASE("closure: serial and parallel agree") {
    // Z/8 x Z/8 as two packed 3-bit counters
    auto step = [](Key k, int g) -> Key {
        const auto v = static_cast<std::uint64_t>(k);
        if (g == 0) return Key{(v & ~7ULL) | ((v + 1) & 7ULL)};
        const auto hi = ((v >> 3) + 1) & 7ULL;
        return Key{(v & 7ULL) | (hi << 3)};
    };
    const auto a = bfs_closure(0, 2, step, 1000, Exec::Serial);
    const auto b = bfs_closure(0, 2, step, 1000, Exec::Parallel);
    CHECK(a.index.size() == 64);
    CHECK(a.index.keys() == b.index.keys());
    CHECK(a.rmul == b.rmul);
    CHECK(a.parent == b.parent);
    CHECK(a.parent_gen == b.parent_gen);
    for (std::size_t e = 1; e < a.parent.size(); ++e) CHECK(a.parent[e] < e);
    CHECK_THROWS_AS(bfs_closure(0, 2, step, 10, Exec::Serial), ResourceError);
    CHECK_THROWS_AS(bfs_closure(0, 2, step, 10, Exec::Parallel), ResourceError);
}

TEST_CASE("pair checks: serial and parallel agree") {
    auto pred = [](std::uint64_t a, std::uint64_t b) { return (a * 31 + b * 17) % 97 != 5; };
    const auto s = check_pairs(300, 200, pred, Exec::Serial);
    const auto p = check_pairs(300, 200, pred, Exec::Parallel);
    std::uint64_t count = 0, fa = 0, fb = 0;
    bool first = true;
    for (std::uint64_t a = 0; a < 300; ++a)
        for (std::uint64_t b = 0; b < 200; ++b)
            if (!pred(a, b)) {
                ++count;
                if (first) {
                    fa = a;
                    fb = b;
                    first = false;
                }
            }
    CHECK(s.failures == count);
    CHECK(p.failures == count);
    CHECK(s.first_a == fa);
    CHECK(s.first_b == fb);
    CHECK(p.first_a == fa);
    CHECK(p.first_b == fb);
    CHECK(check_pairs(10, 10, [](std::uint64_t, std::uint64_t) { return true; }, Exec::Parallel).ok());
}

TEST_CASE("group kernels: serial and parallel agree") {
    for (const auto& s : {Shape::ones(3), Shape({2, 1}), Shape({1, 1, 2})}) {
        const auto a = build_universal_general(s, Exec::Serial);
        const auto b = build_universal_general(s, Exec::Parallel);
        REQUIRE(a.order() == b.order());
        CHECK(a.cayley() == b.cayley());
        const auto sa = central_series_by_commutators(a, Exec::Serial);
        const auto sb = central_series_by_commutators(b, Exec::Parallel);
        REQUIRE(sa.size() == sb.size());
        for (std::size_t k = 0; k < sa.size(); ++k) {
            CHECK(sa[k].dim() == sb[k].dim());
            for (auto v : sa[k].basis()) CHECK(sb[k].contains(v));
        }
        // Phi tables are filled in parallel; compare with direct evaluation
        const PhiSpace S(s, Exec::Serial);
        for (std::size_t k = 0; k < S.dim(S.all_blocks()); ++k) {
            const auto& l = S.labels(S.all_blocks())[k];
            CHECK(S.values(S.basis_map(S.all_blocks(), k)) == S.table(l));
        }
    }
}
