// Microbenchmarks for the hot paths: eigendecomposition, single kernel
// entries, the trace ladder, exterior solves, and one Gauss-Newton
// residual/Jacobian evaluation.

#include <benchmark/benchmark.h>

#include "fracdn/extension.hpp"
#include "fracdn/forward.hpp"
#include "fracdn/grid.hpp"
#include "fracdn/inversion.hpp"
#include "fracdn/kernel.hpp"
#include "fracdn/operators.hpp"
#include "fracdn/rng.hpp"

namespace {

using namespace fracdn;

struct Bench {
    Grid grid;
    Regions regions;
    Vec sigma;
    Conductivity cond;
    Mat A;
    SpectralOperator S;
    Vec F;

    explicit Bench(int M) {
        grid = build_grid(1, 1.0, M);
        regions = build_regions(grid, Box{-0.55, -0.2}, Box{-0.075, 0.95});
        Vec bump = sample_bump(grid, -0.375, 0.0, 0.14, 0.3, 0.0);
        sigma = Vec::Ones(grid.N);
        for (Index i : regions.idx_omega) sigma[i] += bump[i];
        cond = make_conductivity(grid, regions, sigma, 0.1);
        A = assemble_operator(grid, cond);
        S = spectral_decompose(A);
        Vec src = sample_bump(grid, -0.375, 0.0, 0.24, 1.0, 0.0);
        F = Vec::Zero(grid.N);
        for (Index i : regions.idx_omega) F[i] = src[i];
    }
};

Bench& bench_31() {
    static Bench b(31);
    return b;
}

Bench& bench_63() {
    static Bench b(63);
    return b;
}

void BM_spectral_decompose(benchmark::State& state) {
    const Bench& b = bench_63();
    for (auto _ : state) {
        SpectralOperator S = spectral_decompose(b.A);
        benchmark::DoNotOptimize(S.lam);
    }
}
BENCHMARK(BM_spectral_decompose)->Unit(benchmark::kMillisecond);

void BM_kernel_entry(benchmark::State& state) {
    const Bench& b = bench_63();
    const Index i = 10, j = 10 + static_cast<Index>(state.range(0));
    for (auto _ : state) {
        double k = kernel_entry(b.S, 0.5, i, j, 1e-10);
        benchmark::DoNotOptimize(k);
    }
}
BENCHMARK(BM_kernel_entry)->Arg(1)->Arg(8)->Arg(32)->Unit(benchmark::kMicrosecond);

void BM_trace_ladder(benchmark::State& state) {
    const Bench& b = bench_63();
    Rng rng(5);
    Vec u = rng.gaussian_vector(b.grid.N);
    ExtensionSolution ext = solve_extension(b.S, 0.5, u);
    for (auto _ : state) {
        Vec t = neumann_trace_ladder(ext);
        benchmark::DoNotOptimize(t);
    }
}
BENCHMARK(BM_trace_ladder)->Unit(benchmark::kMicrosecond);

void BM_exterior_solve(benchmark::State& state) {
    const Bench& b = bench_31();
    ExteriorOperator E = make_exterior_operator(b.S, 0.5, b.regions);
    Vec f = Vec::Zero(b.grid.N);
    f[b.regions.idx_w[3]] = 1.0;
    for (auto _ : state) {
        Vec u = solve_exterior(E, b.F, f);
        benchmark::DoNotOptimize(u);
    }
}
BENCHMARK(BM_exterior_solve)->Unit(benchmark::kMicrosecond);

void BM_gn_residual_jacobian(benchmark::State& state) {
    const Bench& b = bench_31();
    ExteriorOperator E = make_exterior_operator(b.S, 0.5, b.regions);
    DNDataset hom;
    Vec g0 = nonlocal_dn(E, b.F, Vec::Zero(b.grid.N)).g;
    for (Index w : b.regions.idx_w) {
        Vec fin = Vec::Zero(b.grid.N);
        fin[w] = 1.0;
        DNSample sample = nonlocal_dn(E, b.F, fin);
        sample.g -= g0;
        sample.tag = "homogenized";
        hom.samples.push_back(sample);
    }
    GnModel model{&b.grid, &b.regions, 0.5, &hom, 1e-14, 0.1};
    Vec theta = Vec::Zero(static_cast<Index>(b.regions.idx_omega.size()));
    for (auto _ : state) {
        Vec r = gn_residual(model, theta);
        Mat J = gn_jacobian(model, theta);
        benchmark::DoNotOptimize(r);
        benchmark::DoNotOptimize(J);
    }
}
BENCHMARK(BM_gn_residual_jacobian)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
