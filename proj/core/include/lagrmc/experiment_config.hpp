#pragma once

// Experiment description files: a hand-editable TOML-style subset
// (sections, key = value, inline tables, single-line arrays, # comments)
// parsed into a fully validated ExperimentConfig. Syntax problems raise
// ParseError with line/column; schema problems are collected into one
// ValidationError listing every offending field, and unknown keys come with
// a nearest-known-key suggestion. The format is documented in docs/config.md.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lagrmc/kernels.hpp"
#include "lagrmc/simulator.hpp"

namespace lagrmc {

// ---- per-subcommand parameter blocks (defaults = canonical regimes) ----

struct SimulateParams {
    bool record_events = true;
    std::vector<double> checkpoints; // empty -> {T}
};

struct PassageBoundParams {
    double y = 1.0;
    double v = 0.0;
    double T = 1.0;
    double beta_star = 1.0;
    double dt = 1e-4;
    int n_max = 6;
    std::size_t paths = 100000;
};

struct ChaosStudyParams {
    std::vector<std::size_t> N_grid{500, 2000, 8000};
    int seeds = 20;
    std::string functional = "tanh_u1"; // or "capped_jumps"
    double length = 1.0;                // interval domain
    double margin = 0.3;
    double epsilon = 0.2;
    double dt = 0.01;
    double T = 0.5;
    double sigma = 1.0;
    double vel_stddev = 1.0;
};

struct EpsilonStudyParams {
    std::vector<double> epsilons{0.4, 0.2, 0.1};
    double epsilon_ref = 0.05;
    int seeds = 20;
    std::size_t N = 2000;
    double length = 2.0; // interval domain
    double margin = 0.5;
    double dt = 0.005;
    double T = 0.5;
    double sigma = 1.0;
    double vel_mean = 1.0;
    double vel_stddev = 1.0;
    VelocityKernel kernel = VelocityKernel::neg_tanh();
};

struct NoPermeabilityParams {
    std::vector<double> deltas{0.02, 0.05, 0.1};
};

struct HitRateParams {
    int seeds = 20;
};

struct DriftConsistencyParams {
    std::vector<std::size_t> schedule_N{1000, 10000, 100000};
    std::vector<double> schedule_epsilon{0.4, 0.25, 0.15};
    int seeds = 20;
    double radius = 1.0;
    int dim = 2;
    std::vector<double> vel_mean{1.0, 0.0};
    std::vector<double> query; // empty -> domain center
    VelocityKernel kernel = VelocityKernel::neg_tanh();
};

// Complete description of one invocation. The top-level simulation keys and
// [initial] drive `simulate`, `invariance-test`, `hit-rate` and
// `no-permeability`; the study sections are self-contained so their
// canonical defaults stay runnable without a config file.
struct ExperimentConfig {
    std::string subcommand;

    std::uint64_t seed = 42;
    std::string out_dir = "out";
    int workers = 1;

    SimConfig sim;

    SimulateParams simulate;
    PassageBoundParams passage;
    ChaosStudyParams chaos;
    EpsilonStudyParams epsilon_study;
    NoPermeabilityParams no_permeability;
    HitRateParams hit_rate;
    DriftConsistencyParams drift_consistency;
};

// Canonical defaults (ball of radius 1 in d=2, no kernel, sigma = 1,
// uniform positions, standard Gaussian velocities, N = 50000, dt = 1e-3,
// T = 1).
ExperimentConfig default_config();

// Parse + validate a config file. Throws ParseError or ValidationError.
ExperimentConfig parse_config(const std::filesystem::path& path);

// Same, from an in-memory string (tests, here-docs).
ExperimentConfig parse_config_text(std::string_view text,
                                   std::string_view source = "<inline>");

} // namespace lagrmc
