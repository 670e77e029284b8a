// Engine step throughput. The billiard case (zero kernel) is kick + exact
// reflective transport only; the interacting case rebuilds the drift
// evaluator from the step-start snapshot and queries it for every particle.
// items/sec = particle-steps/sec.

#include <benchmark/benchmark.h>

#include <cstddef>
#include <cstdint>

#include "lagrmc/geometry.hpp"
#include "lagrmc/kernels.hpp"
#include "lagrmc/simulator.hpp"

namespace {

constexpr int kStepsPerIter = 4;

lagrmc::SimConfig make_config(std::size_t N, const lagrmc::VelocityKernel& kern) {
    lagrmc::SimConfig cfg;
    cfg.N = N;
    cfg.d = 2;
    cfg.domain = lagrmc::DomainGeometry::ball({0.0, 0.0}, 1.0);
    cfg.epsilon = 0.2;
    cfg.dt = 1e-3;
    cfg.T = 1.0;
    cfg.sigma = 1.0;
    cfg.kernel = kern;
    cfg.seed = 2024;
    return cfg;
}

void step_benchmark(benchmark::State& state, const lagrmc::VelocityKernel& kern) {
    const auto N = static_cast<std::size_t>(state.range(0));
    const lagrmc::SimConfig cfg = make_config(N, kern);
    const lagrmc::SystemState init =
        lagrmc::sample_initial(cfg.initial, cfg.domain, cfg.N, cfg.seed);
    for (auto _ : state) {
        lagrmc::SystemState st = init;
        for (int k = 0; k < kStepsPerIter; ++k)
            lagrmc::step(st, cfg, nullptr, nullptr, nullptr);
        benchmark::DoNotOptimize(st.x.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * kStepsPerIter *
                            static_cast<std::int64_t>(N));
}

void BM_StepBilliard(benchmark::State& state) {
    step_benchmark(state, lagrmc::VelocityKernel::zero());
}
BENCHMARK(BM_StepBilliard)->RangeMultiplier(8)->Range(1024, 65536);

void BM_StepInteracting(benchmark::State& state) {
    step_benchmark(state, lagrmc::VelocityKernel::neg_tanh());
}
BENCHMARK(BM_StepInteracting)->RangeMultiplier(4)->Range(1024, 16384);

} // namespace
