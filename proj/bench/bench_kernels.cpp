// Serial reference kernels against their OpenMP counterparts:
// operator assembly and the contour-integral projector.

#include <random>

#include <benchmark/benchmark.h>

#include "wvres/assembly.hpp"
#include "wvres/eigen_engine.hpp"

namespace {

using namespace wvres;

const PotentialSpec& well() {
    static const PotentialSpec spec = PotentialSpec::steps({-3.0, -2.5, 2.5, 3.0}, {1.5, 0.0, 1.5});
    return spec;
}

const PotentialSpec& bump() {
    static const PotentialSpec spec = PotentialSpec::smooth_bump(2.0, -1.0);
    return spec;
}

void BM_AssembleReference(benchmark::State& state, const PotentialSpec& (*spec)()) {
    const GridSpec grid(12.0, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(reference::assemble(spec(), cplx(0.0, -0.15), 1e-3, grid).entries.data());
    }
    state.SetComplexityN(state.range(0));
}

void BM_AssembleParallel(benchmark::State& state, const PotentialSpec& (*spec)()) {
    const GridSpec grid(12.0, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(assemble(spec(), cplx(0.0, -0.15), 1e-3, grid).entries.data());
    }
    state.SetComplexityN(state.range(0));
}

CMatrix random_matrix(int n, int cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    CMatrix a(n, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < n; ++i) a(i, j) = cplx(g(rng), g(rng));
    return a;
}

void BM_ProjectorReference(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const CMatrix a = random_matrix(n, n, 1);
    const CMatrix y = random_matrix(n, 32, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(reference::apply_projector(a, y, cplx(0.5, 0.5), 2.0, 64).data());
    }
}

void BM_ProjectorHessenberg(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const CMatrix a = random_matrix(n, n, 1);
    const CMatrix y = random_matrix(n, 32, 2);
    for (auto _ : state) {
        // includes the one-off Hessenberg reduction
        const HessenbergResolvent res(a);
        benchmark::DoNotOptimize(apply_projector(res, y, cplx(0.5, 0.5), 2.0, 64).data());
    }
}

}  // namespace

BENCHMARK_CAPTURE(BM_AssembleReference, steps, well)->Arg(201)->Arg(401)->Arg(801)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_AssembleParallel, steps, well)->Arg(201)->Arg(401)->Arg(801)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_AssembleReference, smooth, bump)->Arg(201)->Arg(401)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_AssembleParallel, smooth, bump)->Arg(201)->Arg(401)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ProjectorReference)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ProjectorHessenberg)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
