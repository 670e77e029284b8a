#pragma once

// Statistical verification layer: sample metrics (sliced Wasserstein-1),
// kernel density estimates and grid L1 distances, wall-flux statistics
// (mean no-permeability, boundary hit rate), Gaussian-envelope monitoring,
// and the pairwise-covariance chaoticity probe. Everything here is pure
// post-processing over immutable run data.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lagrmc/geometry.hpp"
#include "lagrmc/simulator.hpp"

namespace lagrmc {

// omega(u) = (1 + |u|^2)^(alpha/2); alpha > d + 3 keeps |u|^3 / omega
// integrable, which the moment bounds downstream rely on.
class WeightFunction {
public:
    WeightFunction(double alpha, int d);

    double alpha() const { return alpha_; }

    double operator()(std::span<const double> u) const;

private:
    double alpha_;
    int d_;
};

// ---- sliced Wasserstein-1 ----

// Exact W1 between two 1-D empirical laws: the quantile functions are step
// functions, integrated segment-by-segment with integer breakpoint
// bookkeeping (no floating-point tie issues). Inputs are consumed (sorted).
double w1_1d(std::vector<double> a, std::vector<double> b);

// Average over n_proj uniform random unit directions of the 1-D W1 between
// the projected samples. A, B are flat arrays of points of dimension m.
// Throws EmptySample when either sample is empty.
double sliced_w1(std::span<const double> A, std::size_t nA, std::span<const double> B,
                 std::size_t nB, int m, int n_proj, std::uint64_t seed);

// Same with caller-supplied directions (n_proj unit vectors, flat n_proj*m):
// deterministic variant used by tests and by the pseudometric properties.
double sliced_w1_with_directions(std::span<const double> A, std::size_t nA,
                                 std::span<const double> B, std::size_t nB, int m,
                                 std::span<const double> dirs, int n_proj);

// ---- wall-flux diagnostics ----

struct ShellEstimate {
    double delta = 0.0;
    std::size_t count = 0;
    double estimate = 0.0;  // mean of (u . n) over shell particles
    double std_error = 0.0;
    bool defined = false;   // false when the shell is empty
};

// Mean outward velocity flux over particles within distance delta of the
// wall, each paired with the normal at its nearest boundary point.
ShellEstimate mean_no_permeability(std::span<const double> x, std::span<const double> u,
                                   std::size_t N, int d, const DomainGeometry& dom,
                                   double delta);

struct BoundaryHitRate {
    double empirical = 0.0;  // observed reflections per particle on [0, T]
    double predicted = 0.0;  // closed-form stationary-regime prediction
    double std_error = 0.0;  // of the empirical mean
    double z_score = 0.0;
    std::size_t total_events = 0;
};

// Closed form for the stationary free regime (ball, no kernel, uniform
// positions, centered Gaussian velocities with spread s0):
//   rate = (d/R) (2pi)^{-1/2} integral_0^T sqrt(s0^2 + sigma^2 s) ds.
double predicted_hit_rate(int d, double R, double sigma, double s0, double T);

// Compares the event count per particle against the prediction. Throws
// WrongRegime unless cfg is in the regime above.
BoundaryHitRate boundary_hit_rate(const EventLog& events, const SimConfig& cfg);

// ---- kernel density estimation ----

// Product-Gaussian KDE over m-dimensional points with per-dimension
// bandwidths.
class KdeDensity {
public:
    KdeDensity(std::span<const double> pts, std::size_t n, int m, std::vector<double> bandwidths);

    double operator()(std::span<const double> q) const;

    int dim() const { return m_; }
    std::size_t count() const { return n_; }
    const std::vector<double>& bandwidths() const { return bw_; }
    std::span<const double> points() const { return pts_; }

    // Per-dimension rule-of-thumb bandwidths:
    // h_j = sd_j * (4 / ((m+2) n))^(1/(m+4)).
    static std::vector<double> silverman_bandwidths(std::span<const double> pts, std::size_t n,
                                                    int m);

private:
    std::vector<double> pts_;
    std::size_t n_;
    int m_;
    std::vector<double> bw_;
    std::vector<double> inv2h2_; // 1/(2 h_j^2)
    double norm_;                // product of 1/(h_j sqrt(2 pi)) / n
};

KdeDensity kde_density(std::span<const double> pts, std::size_t n, int m,
                       std::vector<double> bandwidths);

// Uniform tensor grid with inclusive endpoints.
struct GridSpec {
    int m = 1;
    std::vector<double> lo, hi;
    std::vector<long> n; // nodes per dimension, each >= 2

    std::size_t total_nodes() const;
    double cell_volume() const;
};

// KDE evaluated at every grid node (lexicographic order, last dimension
// fastest), using the separable structure of the product kernel.
std::vector<double> kde_on_grid(const KdeDensity& f, const GridSpec& grid);

// sum |a - b| * cell_volume — the grid L1 distance between two density
// tables produced by kde_on_grid on the same grid.
double l1_grid_distance(std::span<const double> a, std::span<const double> b,
                        double cell_volume);

// ---- Maxwellian envelope monitoring ----

struct EnvelopeReport {
    double a_hat = 0.0;        // fitted exponential-in-time constant
    double nu_hat = 0.0;       // fitted power of the reference Gaussian
    double max_log_residual = 0.0; // sup of log f_hat - fitted envelope
    double min_log_residual = 0.0;
    bool upper_dominated = false;  // envelope + noise headroom holds above
    bool lower_dominated = false;  // ... and below
    std::size_t bins_used = 0;
    std::string status = "monitor"; // never gates acceptance
};

// Fits (a, nu) by log-regression of a 1-D velocity histogram against the
// Gaussian-convolution reference N(mean0, s0^2 + sigma^2 t) and reports
// whether the fitted envelope brackets every bin with count >= min_count.
// Monitoring-grade: the report never fails a run, it flags tail anomalies.
EnvelopeReport maxwellian_envelope_check(std::span<const double> samples, double t,
                                         double sigma, double mean0, double s0,
                                         int n_bins = 61, std::size_t min_count = 50);

// ---- chaoticity probe ----

struct PairCovariance {
    double cov = 0.0;
    double se = 0.0;
    std::size_t n_pairs = 0;
};

// Covariance of a bounded per-particle functional across disjoint particle
// pairs (1,2), (3,4), ...: mean of pair products minus squared mean, with
// the sample shifted by f[0] first so a constant functional gives exactly
// zero. Exchangeability makes every disjoint pair identically distributed.
PairCovariance chaoticity_pair_covariance(std::span<const double> f);

// Bounded functional presets for the probe.
std::vector<double> functional_tanh_u1(const SystemState& st);
std::vector<double> functional_capped_jumps(const SystemState& st, int cap = 5);

} // namespace lagrmc
