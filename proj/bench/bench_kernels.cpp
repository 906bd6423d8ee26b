// Serial reference vs OpenMP kernels. Arg 0 = serial, 1 = parallel.
// Thread count comes from GENUSFORGE_THREADS.

#include <benchmark/benchmark.h>

#include "genusforge/expmaps.hpp"
#include "genusforge/groups.hpp"
#include "genusforge/parallel.hpp"

using namespace gf;

namespace {

Exec exec_of(const benchmark::State& st) { return st.range(0) ? Exec::Parallel : Exec::Serial; }

void BM_BuildUniversal(benchmark::State& st) {
    const Shape s = st.range(1) == 4 ? Shape::ones(4) : Shape({1, 1, 2});
    for (auto _ : st) {
        auto G = build_universal_general(s, exec_of(st));
        benchmark::DoNotOptimize(G.order());
    }
}
BENCHMARK(BM_BuildUniversal)->Args({0, 3})->Args({1, 3})->Args({0, 4})->Args({1, 4})->Unit(benchmark::kMillisecond);

void BM_CentralSeries(benchmark::State& st) {
    const auto G = build_universal_general(Shape({1, 1, 2}));
    for (auto _ : st) {
        auto s = central_series_by_commutators(G, exec_of(st));
        benchmark::DoNotOptimize(s.size());
    }
}
BENCHMARK(BM_CentralSeries)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_CheckPairs(benchmark::State& st) {
    auto G = build_universal(3);
    G.build_table();
    const auto n = G.order();
    // commutators land in the central kernel
    auto pred = [&](std::uint64_t a, std::uint64_t b) {
        const auto c = G.commutator(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b));
        return G.phi(c) == 0;
    };
    for (auto _ : st) {
        auto w = check_pairs(n, n, pred, exec_of(st));
        benchmark::DoNotOptimize(w.failures);
    }
}
BENCHMARK(BM_CheckPairs)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

// Phi value tables are filled in parallel inside the space; construction covers them.
void BM_PhiSpace(benchmark::State& st) {
    for (auto _ : st) {
        PhiSpace S(Shape({1, 1, 2}), exec_of(st));
        benchmark::DoNotOptimize(S.dim(S.all_blocks()));
    }
}
BENCHMARK(BM_PhiSpace)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_UniversalEquation(benchmark::State& st) {
    const PhiSpace S(Shape::ones(3));
    const auto f = S.basis_map(S.all_blocks(), S.dim(S.all_blocks()) - 1);
    for (auto _ : st) benchmark::DoNotOptimize(universal_equation_mismatches(S, f));
}
BENCHMARK(BM_UniversalEquation)->Unit(benchmark::kMillisecond);

}  // namespace

int main(int argc, char** argv) {
    configured_threads();
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
