#pragma once

// Experiment runners behind the CLI subcommands. Each runner executes its
// simulations/quadratures, evaluates the declared tolerances, writes its
// artifacts (CSV tables, events, checkpoints, summary.json) atomically under
// the configured output directory, and returns the verdicts. Exit-code rule:
// success iff no verdict has status "fail".

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lagrmc/experiment_config.hpp"

namespace lagrmc {

struct Verdict {
    std::string name;
    std::string status = "pass"; // "pass" | "fail" | "monitor"
    std::vector<std::pair<std::string, double>> statistics;
    std::vector<std::pair<std::string, double>> tolerances;
    std::vector<std::uint64_t> seeds;
    double wall_time_ms = 0.0;

    bool failed() const { return status == "fail"; }
    void stat(std::string key, double v) { statistics.emplace_back(std::move(key), v); }
    void tol(std::string key, double v) { tolerances.emplace_back(std::move(key), v); }
};

struct ExperimentResult {
    std::vector<Verdict> verdicts;
    std::vector<std::string> files; // written artifacts, relative to out_dir
    double wall_time_ms = 0.0;

    bool any_fail() const {
        for (const auto& v : verdicts)
            if (v.failed()) return true;
        return false;
    }
};

// ---- study tables (the measurements behind the trend subcommands) ----

// Pair covariance of the bounded functional per (kernel, N, seed): the
// interaction kernel probes the chaoticity trend, the zero kernel is the
// independent-particles null.
struct ChaosRow {
    std::string kernel;
    std::size_t N = 0;
    std::uint64_t seed = 0;
    double cov = 0.0;
    double se = 0.0;
};
std::vector<ChaosRow> chaoticity_probe(const ChaosStudyParams& p, std::uint64_t base_seed,
                                       int workers);

// L1 distance on a fixed phase-space grid between the KDE of the run at
// epsilon and the paired-seed run at epsilon_ref.
struct EpsilonRow {
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    double l1 = 0.0;
};
std::vector<EpsilonRow> epsilon_convergence_study(const EpsilonStudyParams& p,
                                                  std::uint64_t base_seed, int workers);

// | smoothed empirical drift - exact conditional drift | at the query point
// per (N, epsilon) stage and seed.
struct DriftErrorRow {
    std::size_t N = 0;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    double error = 0.0;
};
std::vector<DriftErrorRow> drift_consistency_study(const DriftConsistencyParams& p,
                                                   std::uint64_t base_seed);

// Runs cfg.subcommand, writes artifacts under cfg.out_dir, returns verdicts.
ExperimentResult dispatch(const ExperimentConfig& cfg);

} // namespace lagrmc
