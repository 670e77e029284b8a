#pragma once

// The interaction drift. Two families:
//
//  * exact_drift — the closed-form conditional expectation
//        B(x) = E[b(V) | X = x]
//    for product phase-space densities with Gaussian or uniform-box velocity
//    marginals, evaluated by fixed Gaussian quadrature.
//
//  * smoothed_drift / binned_smoothed_drift — the mollified empirical drift
//        B_eps(x) = [ (1/N) sum_i b(v_i) beta_eps(y_i) phi_eps(x - y_i) ]
//                   / [ (1/N) sum_i beta_eps(y_i) phi_eps(x - y_i) + eps ]
//    over a frozen particle snapshot. beta_eps drops particles within eps of
//    the wall; the +eps regularizer (not rescaled by N) makes the ratio
//    total. The binned evaluator buckets particles into a cell grid and must
//    agree with the naive sum to 1e-12.

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "lagrmc/cell_grid.hpp"
#include "lagrmc/geometry.hpp"
#include "lagrmc/kernels.hpp"
#include "lagrmc/mollifier.hpp"

namespace lagrmc {

// Non-owning view of the particle system frozen at a step boundary. The
// arrays must outlive the snapshot.
struct EmpiricalSnapshot {
    int d = 1;
    std::size_t N = 0;
    std::span<const double> x; // N*d positions, all inside the closed domain
    std::span<const double> u; // N*d velocities
};

// beta_eps: 1 iff y lies strictly deeper than eps from the wall.
int boundary_cutoff(const DomainGeometry& dom, std::span<const double> y, double eps);

// Prepared evaluator over one snapshot: kernel values and wall cutoffs are
// computed once, and an optional cell grid accelerates queries. Read-only
// after construction, safe for concurrent eval() calls.
class DriftEvaluator {
public:
    DriftEvaluator(const EmpiricalSnapshot& snap, const MollifierSpec& mol,
                   const VelocityKernel& b, const DomainGeometry& dom, bool build_grid);

    // Grid-accelerated when available, else naive. out has d entries.
    void eval(std::span<const double> xq, std::span<double> out) const;

    // Always the plain id-ordered sum.
    void eval_naive(std::span<const double> xq, std::span<double> out) const;

    bool grid_active() const { return grid_ && grid_->usable(); }

private:
    void eval_grid(std::span<const double> xq, std::span<double> out) const;
    void finalize(const double* num, double den, std::span<double> out) const;

    EmpiricalSnapshot snap_;
    MollifierSpec mol_;
    double eps_;
    std::vector<double> bvals_;      // N*d, kernel applied to each velocity
    std::vector<std::uint8_t> beta_; // N, wall cutoff per particle
    std::unique_ptr<CellGrid> grid_;
};

// One-shot naive evaluation of the mollified empirical drift at x.
std::vector<double> smoothed_drift(std::span<const double> x, const EmpiricalSnapshot& snap,
                                   const MollifierSpec& mol, const VelocityKernel& b,
                                   const DomainGeometry& dom);

// Grid-bucketed evaluation at many query points (flat n_query*d array).
// Values agree with per-point smoothed_drift to 1e-12 componentwise.
std::vector<double> binned_smoothed_drift(std::span<const double> queries, std::size_t n_query,
                                          const EmpiricalSnapshot& snap,
                                          const MollifierSpec& mol, const VelocityKernel& b,
                                          const DomainGeometry& dom);

// ---- exact drift ----

// Uniform position marginal over {signed_distance >= margin}.
struct PositionDensity {
    double margin = 0.0;
};

struct VelocityDensity {
    enum class Kind { Gaussian, UniformBox, Point };
    Kind kind = Kind::Gaussian;
    std::vector<double> mean;   // Gaussian: N(mean, stddev^2 I)
    double stddev = 1.0;
    std::vector<double> lo, hi; // UniformBox: product of U[lo_j, hi_j]
    std::vector<double> point;  // Point: Dirac (not integrable -> unsupported)

    static VelocityDensity gaussian(std::vector<double> mean, double stddev);
    static VelocityDensity uniform_box(std::vector<double> lo, std::vector<double> hi);
    static VelocityDensity point_mass(std::vector<double> v);
};

// Closed-form phase-space density. Product form: uniform-in-domain position
// times a velocity marginal. mixture_components > 1 marks a non-product
// density (a mixture), which exact_drift refuses.
struct DensitySpec {
    DomainGeometry domain;
    PositionDensity pos;
    VelocityDensity vel;
    int mixture_components = 1;
};

// E[b(V) | X = x] under the given density: the velocity-marginal integral
// wherever the position density is positive, the zero vector where it
// vanishes. Throws UnsupportedDensity for mixtures and point-mass velocity
// laws.
std::vector<double> exact_drift(std::span<const double> x, const DensitySpec& spec,
                                const VelocityKernel& b);

// N i.i.d. phase-space draws from the given density (rejection sampling for
// the position; one RNG stream per draw, so results are reproducible and
// order-independent). Returns {positions, velocities} flat arrays.
std::pair<std::vector<double>, std::vector<double>>
sample_density(const DensitySpec& spec, std::size_t N, std::uint64_t seed);

} // namespace lagrmc
