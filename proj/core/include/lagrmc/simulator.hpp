#pragma once

// The N-particle engine. One step is a Lie split:
//
//   Phase A (kick)      u_i <- u_i + B_eps[x_i; snapshot] dt + sigma sqrt(dt) xi_i
//   Phase B (transport) ballistic motion of x_i at frozen velocity, with
//                       exact specular reflections at every wall hit inside
//                       the step, each one accumulated into the jump vector
//                       k_i and (optionally) logged as a boundary event.
//
// The drift snapshot is taken once at step start for all particles (Jacobi
// update), each particle owns a counter-based RNG stream, and event logs are
// gathered chunk-by-chunk in id order — so a run is a pure function of its
// config, bit-identical for every worker count.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lagrmc/geometry.hpp"
#include "lagrmc/kernels.hpp"
#include "lagrmc/vec_ops.hpp"

namespace lagrmc {

// Initial phase-space law. Positions: uniform over the interior margin set
// {signed_distance >= beta_star} or a point mass. Velocities: isotropic
// Gaussian or a point mass.
struct InitialLawSpec {
    enum class PosKind { UniformMargin, Point };
    enum class VelKind { Gaussian, Point };

    PosKind pos_kind = PosKind::UniformMargin;
    double beta_star = 0.0;         // interior margin >= 0
    std::vector<double> pos_point;  // PosKind::Point

    VelKind vel_kind = VelKind::Gaussian;
    std::vector<double> vel_mean;   // empty = zero mean
    double vel_stddev = 1.0;
    std::vector<double> vel_point;  // VelKind::Point
};

struct SimConfig {
    std::size_t N = 1;
    int d = 1;
    DomainGeometry domain = DomainGeometry::interval(1.0);
    double epsilon = 0.2; // mollifier width
    double dt = 1e-3;
    double T = 1.0;
    double sigma = 1.0;
    VelocityKernel kernel = VelocityKernel::zero();
    InitialLawSpec initial;
    std::uint64_t seed = 0;
    int max_reflections_per_step = 64;
    bool record_events = false; // keep the event log and kick bookkeeping
    std::vector<double> checkpoint_times;
    int workers = 1;

    std::size_t n_steps() const; // ceil(T / dt)
};

// Copy of one particle's state, for inspection.
struct ParticleState {
    SmallVec x{}, u{}, k{};
    std::int32_t jumps = 0;
};

// Struct-of-arrays particle system.
struct SystemState {
    int d = 1;
    std::size_t N = 0;
    double t = 0.0;
    std::int64_t step_index = 0;
    std::vector<double> x, u, k;         // N*d each
    std::vector<std::int32_t> jumps;     // N
    std::vector<std::uint64_t> rng_state; // per-particle stream state

    ParticleState particle(std::size_t i) const;
};

// Column-wise boundary event log (one row per reflection).
struct EventLog {
    int d = 0;
    std::vector<double> t;
    std::vector<std::uint64_t> id;
    std::vector<double> hit, u_minus, u_plus; // size()*d each

    std::size_t size() const { return t.size(); }
    void append(double time, std::uint64_t pid, const double* hit_p, const double* um,
                const double* up);
    void append_all(const EventLog& other);
};

// Row view of an EventLog entry.
struct BoundaryEvent {
    double t = 0.0;
    std::uint64_t id = 0;
    SmallVec hit{}, u_minus{}, u_plus{};
};
BoundaryEvent get_event(const EventLog& log, std::size_t row);

struct Checkpoint {
    double t = 0.0;
    std::int64_t step_index = 0;
    std::vector<double> x, u, k;
    std::vector<std::int32_t> jumps;
};

struct RunRecord {
    SimConfig cfg;
    SystemState final_state;
    EventLog events;
    std::vector<Checkpoint> checkpoints;

    // Kick bookkeeping for the pathwise identity, present iff
    // cfg.record_events: initial velocities, accumulated drift kicks
    // (sum of B_eps dt) and accumulated noise (sum of sqrt(dt) xi).
    bool has_increments = false;
    std::vector<double> u0, drift_sum, noise_sum; // N*d each
};

// N i.i.d. draws from the law; k = 0, jumps = 0, per-particle RNG streams
// armed for the run. Throws InfeasibleMargin when the margin cannot hold any
// support (beta_star > inradius, or >= for the uniform law, or a point mass
// shallower than beta_star).
SystemState sample_initial(const InitialLawSpec& law, const DomainGeometry& dom,
                           std::size_t N, std::uint64_t seed);

// Advances the system by one step of cfg.dt (both phases). Appends to `log`
// and accumulates into drift_sum/noise_sum (N*d) when those are non-null.
// Throws ReflectionCapExceeded when a particle reflects more than
// cfg.max_reflections_per_step times within the step.
void step(SystemState& st, const SimConfig& cfg, EventLog* log, double* drift_sum,
          double* noise_sum);

// Full run: ceil(T/dt) steps, checkpoints at the requested times rounded
// down to step boundaries.
RunRecord run(const SimConfig& cfg);

// Max-norm residual of the velocity bookkeeping identity
//   u(T) = u(0) + sum B_eps dt + sigma sum sqrt(dt) xi + k(T).
// Throws MissingIncrements unless the run recorded its kicks.
double pathwise_identity_check(const RunRecord& rec);

// Recomputes each particle's jump vector from the event log alone, replaying
// the exact reflection arithmetic. Bitwise-equal to final k by construction.
std::vector<double> reconstruct_jump_sums(const EventLog& log, const DomainGeometry& dom,
                                          std::size_t N);

// Histogram of reflection counts: result[m] = number of particles with m
// jumps (last bin collects the rest).
std::vector<std::size_t> jump_histogram(std::span<const std::int32_t> jumps,
                                        std::size_t max_bins = 32);

} // namespace lagrmc
