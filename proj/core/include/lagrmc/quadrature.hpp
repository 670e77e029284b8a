#pragma once

// Fixed-order Gaussian quadrature used by the exact-drift evaluator and a
// few verification routines. 64 points give >= 10 correct digits for every
// bounded smooth profile the kernels use; kinked profiles are handled by
// panel splits at the declared breakpoints.

#include <functional>
#include <span>

namespace lagrmc {

// E[f(V)] for V ~ N(mean, stddev^2) by 64-point Gauss-Hermite. Nodes are
// consumed in symmetric +/- pairs, so an odd f around a zero mean cancels
// exactly (a signed zero, not a small residual).
double gauss_hermite_expect(const std::function<double(double)>& f, double mean,
                            double stddev);

// Integral of f over [a, b] by a single 64-point Gauss-Legendre panel.
double gauss_legendre_panel(const std::function<double(double)>& f, double a, double b);

// Integral of f over [a, b], split into panels at the interior breakpoints
// (values outside (a,b) are ignored). Keeps spectral accuracy when f has
// kinks at known locations.
double gauss_legendre_split(const std::function<double(double)>& f, double a, double b,
                            std::span<const double> breakpoints);

} // namespace lagrmc
