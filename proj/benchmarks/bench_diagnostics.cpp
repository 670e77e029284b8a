// Diagnostics hot spots: the sort-dominated 1-D Wasserstein distance and the
// separable product-Gaussian KDE, pointwise vs whole-grid tabulation.

#include <benchmark/benchmark.h>

#include <cstddef>
#include <span>
#include <vector>

#include "lagrmc/diagnostics.hpp"
#include "lagrmc/rng.hpp"

namespace {

std::vector<double> gaussian_cloud(std::size_t n, int m, std::uint64_t seed) {
    std::vector<double> pts(n * static_cast<std::size_t>(m));
    lagrmc::RngStream rs(seed, 0);
    rs.normals(pts.data(), static_cast<int>(pts.size()));
    return pts;
}

void BM_W1Sorted(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = gaussian_cloud(n, 1, 1);
    auto b = gaussian_cloud(n, 1, 2);
    for (double& v : b) v += 1.0;
    for (auto _ : state) benchmark::DoNotOptimize(lagrmc::w1_1d(a, b));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * 2 *
                            static_cast<std::int64_t>(n));
}
BENCHMARK(BM_W1Sorted)->RangeMultiplier(8)->Range(4096, 262144);

void BM_KdePointwise(benchmark::State& state) {
    constexpr std::size_t kN = 4096;
    constexpr int kM = 2;
    const auto pts = gaussian_cloud(kN, kM, 7);
    const auto f = lagrmc::kde_density(pts, kN, kM,
                                       lagrmc::KdeDensity::silverman_bandwidths(pts, kN, kM));
    const auto qs = gaussian_cloud(101, kM, 8);
    for (auto _ : state) {
        double acc = 0.0;
        for (std::size_t q = 0; q < 101; ++q)
            acc += f(std::span<const double>(qs.data() + q * kM, kM));
        benchmark::DoNotOptimize(acc);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * 101);
}
BENCHMARK(BM_KdePointwise);

void BM_KdeGrid(benchmark::State& state) {
    constexpr std::size_t kN = 4096;
    constexpr int kM = 2;
    const auto pts = gaussian_cloud(kN, kM, 7);
    const auto f = lagrmc::kde_density(pts, kN, kM,
                                       lagrmc::KdeDensity::silverman_bandwidths(pts, kN, kM));
    lagrmc::GridSpec grid;
    grid.m = kM;
    grid.lo = {-4.0, -4.0};
    grid.hi = {4.0, 4.0};
    grid.n = {101, 101};
    for (auto _ : state) {
        auto table = lagrmc::kde_on_grid(f, grid);
        benchmark::DoNotOptimize(table.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(grid.total_nodes()));
}
BENCHMARK(BM_KdeGrid);

} // namespace
