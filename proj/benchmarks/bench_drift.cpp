// Mollified empirical drift: naive per-query sum vs the cell-grid evaluator,
// and the cost of building the grid itself. items/sec = queries/sec (or
// builds/sec for the build benchmark).

#include <benchmark/benchmark.h>

#include <cstddef>
#include <vector>

#include "lagrmc/drift.hpp"
#include "lagrmc/geometry.hpp"
#include "lagrmc/kernels.hpp"
#include "lagrmc/mollifier.hpp"
#include "lagrmc/rng.hpp"

namespace {

constexpr int kDim = 2;
constexpr double kEps = 0.2;
constexpr std::size_t kQueries = 16;

struct DriftSetup {
    lagrmc::DomainGeometry dom;
    lagrmc::MollifierSpec mol;
    lagrmc::VelocityKernel kern;
    std::vector<double> x, u, queries;
    std::size_t N;

    explicit DriftSetup(std::size_t n)
        : dom(lagrmc::DomainGeometry::ball({0.0, 0.0}, 1.0)), mol(kEps, kDim),
          kern(lagrmc::VelocityKernel::neg_tanh()), N(n) {
        lagrmc::DensitySpec spec{dom, {}, lagrmc::VelocityDensity::gaussian({0.0, 0.0}, 1.0),
                                 1};
        auto [pos, vel] = lagrmc::sample_density(spec, N, 12345);
        x = std::move(pos);
        u = std::move(vel);
        lagrmc::RngStream qs(999, 0);
        queries.resize(kQueries * kDim);
        for (double& q : queries) q = qs.uniform_in(-0.5, 0.5);
    }

    lagrmc::EmpiricalSnapshot snap() const { return {kDim, N, x, u}; }
};

void run_queries(const lagrmc::DriftEvaluator& ev, const std::vector<double>& queries,
                 bool naive) {
    double out[kDim];
    for (std::size_t q = 0; q < kQueries; ++q) {
        std::span<const double> xq(queries.data() + q * kDim, kDim);
        if (naive)
            ev.eval_naive(xq, out);
        else
            ev.eval(xq, out);
        benchmark::DoNotOptimize(out[0]);
    }
}

void BM_DriftNaive(benchmark::State& state) {
    DriftSetup s(static_cast<std::size_t>(state.range(0)));
    lagrmc::DriftEvaluator ev(s.snap(), s.mol, s.kern, s.dom, /*build_grid=*/false);
    for (auto _ : state) run_queries(ev, s.queries, true);
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * kQueries);
}
BENCHMARK(BM_DriftNaive)->RangeMultiplier(10)->Range(1000, 100000);

void BM_DriftGridEval(benchmark::State& state) {
    DriftSetup s(static_cast<std::size_t>(state.range(0)));
    lagrmc::DriftEvaluator ev(s.snap(), s.mol, s.kern, s.dom, /*build_grid=*/true);
    for (auto _ : state) run_queries(ev, s.queries, false);
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * kQueries);
}
BENCHMARK(BM_DriftGridEval)->RangeMultiplier(10)->Range(1000, 100000);

void BM_DriftGridBuild(benchmark::State& state) {
    DriftSetup s(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        lagrmc::DriftEvaluator ev(s.snap(), s.mol, s.kern, s.dom, /*build_grid=*/true);
        benchmark::DoNotOptimize(ev.grid_active());
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_DriftGridBuild)->RangeMultiplier(10)->Range(1000, 100000);

} // namespace
