// Passage-time oracle costs: the imaginary-order Bessel quadrature, the
// theta-transform route to the gamma integral, the iterated bound constant
// under both quadrature schemes, and the exact-increment Monte Carlo sweep
// (items/sec = paths/sec).

#include <benchmark/benchmark.h>

#include <cstdint>

#include "lagrmc/passage_time.hpp"

namespace {

void BM_BesselKImag(benchmark::State& state) {
    const double gamma = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(lagrmc::bessel_K_imag(gamma, 1.0));
}
BENCHMARK(BM_BesselKImag)->Arg(1)->Arg(5);

void BM_ThetaTransform(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(lagrmc::theta_transform_integral(3, 2.0));
}
BENCHMARK(BM_ThetaTransform);

void BM_BoundConstant(benchmark::State& state) {
    const auto scheme = state.range(0) == 0 ? lagrmc::BoundScheme::SqrtSubstitution
                                            : lagrmc::BoundScheme::TanhSinh;
    for (auto _ : state) benchmark::DoNotOptimize(lagrmc::bound_constant(1.0, 1.0, scheme));
}
BENCHMARK(BM_BoundConstant)->Arg(0)->Arg(1);

void BM_PassageCurve(benchmark::State& state) {
    constexpr std::size_t kPaths = 5000;
    for (auto _ : state) {
        auto curve = lagrmc::mc_passage_curve(1.0, 0.0, 1.0, 4, 1e-2, kPaths, 3);
        benchmark::DoNotOptimize(curve.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * kPaths);
}
BENCHMARK(BM_PassageCurve);

} // namespace
