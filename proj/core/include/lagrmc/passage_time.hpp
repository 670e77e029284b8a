#pragma once

// Half-space passage-time oracle for the free Langevin process
// x_t = y + int_0^t u_s ds, u_t = v + B_t (unit diffusion), wall at x = 0:
// modified Bessel functions of imaginary order, the theta-transform route
// to the same gamma-integral, Lachal's bridge density g, the closed-form
// constant C(T, beta*) bounding P(tau_n <= T) <= C / 2^n, and a Monte Carlo
// estimator of the n-th passage probability with exact Gaussian increments.

#include <cstdint>
#include <vector>

namespace lagrmc {

// Parameter pack for the passage-time experiments.
struct LachalParams {
    double y = 1.0;         // initial position, > 0
    double v = 0.0;         // initial velocity
    double T = 1.0;         // horizon, > 0
    int n = 1;              // passage index, >= 1
    double beta_star = 1.0; // support margin, > 0; y >= beta_star for the bound

    void validate() const; // throws Error on violation
};

// K_{i gamma}(a) = int_0^inf exp(-a cosh t) cos(gamma t) dt, gamma >= 0.
// Adaptive quadrature, absolute accuracy 1e-10; the integrand is truncated
// where a cosh t exceeds 745 (exp underflow). Throws NonpositiveArgument
// for a <= 0. Values may be negative for gamma > 0.
double bessel_K_imag(double gamma, double a);

// int_0^inf a sinh(theta) exp(-a cosh theta)
//     (int_0^inf sin(gamma theta) sinh(pi gamma / 3) / cosh(pi gamma / 3)^k
//      dgamma) dtheta
// for k >= 2, a > 0 — one of two routes to the gamma-integral below; its
// absolute value is bounded by (3/pi) exp(-a). Throws NonpositiveArgument.
double theta_transform_integral(int k, double a);

// Direct route to the same quantity:
// int_0^inf gamma K_{i gamma}(a) sinh(pi gamma/3)/cosh(pi gamma/3)^k dgamma.
// Slower (each evaluation runs the Bessel quadrature); used to cross-check
// theta_transform_integral.
double gamma_integral_direct(int k, double a);

// Bridge density factor
//   g(dt_, y, v; 0, u) = (2 sqrt(3) / (pi dt_^2))
//       * exp(-6 y^2/dt_^3 - 6 y v/dt_^2 - 2 (u^2 + v^2)/dt_)
//       * cosh((2u/dt_^2)(3y + dt_ v)),
// evaluated in the numerically stable split form with clamped exponents.
// Throws NonpositiveElapsed when dt_ <= 0.
double lachal_g(double dt_, double y, double v, double u);

// int_0^inf g(dt_, y, v; 0, u) du by adaptive quadrature ...
double lachal_g_u_integral(double dt_, double y, double v);
// ... and its closed form sqrt(3/(2 pi)) dt_^{-3/2}
//     exp(-(3/(2 dt_^3)) (y + v dt_)^2).
double lachal_g_u_integral_exact(double dt_, double y, double v);

// Two independent quadrature schemes for C(T, beta*); they must agree to
// 1e-6 and SqrtSubstitution is the default everywhere.
enum class BoundScheme {
    SqrtSubstitution, // outer s = w^2 removes the s^{-1/2} endpoint singularity
    TanhSinh          // tanh-sinh handles the singular endpoint directly
};

// C(T, beta*) = (2^6 / pi^3) int_0^T s^{-1/2}
//     (int_0^{T-s} (sqrt(3)/(pi t^{3/2})) exp(-3 beta*^2 / (2 t^3)) dt) ds,
// iterated adaptive quadrature at relative accuracy 1e-8.
double bound_constant(double T, double beta_star,
                      BoundScheme scheme = BoundScheme::SqrtSubstitution);

struct PassageEstimate {
    int n = 0;
    double probability = 0.0;
    double std_error = 0.0; // binomial
    std::size_t paths = 0;
};

// Simulates M free Langevin paths with EXACT joint Gaussian (dx, du)
// increments per step (covariance [[dt^3/3, dt^2/2], [dt^2/2, dt]]) and
// counts sign changes of x. Crossings inside a step that return before the
// step ends are missed, so every estimate is a one-sided LOWER bound on the
// true passage probability — the safe side when checking an upper bound.
// Returns estimates for every n in 1..n_max from a single sweep.
std::vector<PassageEstimate> mc_passage_curve(double y, double v, double T, int n_max,
                                              double dt, std::size_t M, std::uint64_t seed,
                                              int workers = 1);

// Single-n convenience wrapper over mc_passage_curve.
PassageEstimate mc_passage_probability(double y, double v, double T, int n, double dt,
                                       std::size_t M, std::uint64_t seed, int workers = 1);

} // namespace lagrmc
