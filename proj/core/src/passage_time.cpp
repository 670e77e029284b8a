#include "lagrmc/passage_time.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "lagrmc/errors.hpp"
#include "lagrmc/parallel.hpp"
#include "lagrmc/rng.hpp"

namespace lagrmc {

namespace {

constexpr double kExpUnderflow = 745.0; // exp(-x) underflows below this
using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

double safe_exp(double e) { return e < -kExpUnderflow ? 0.0 : std::exp(std::min(e, 709.0)); }

// sinh(pi g / 3) / cosh(pi g / 3)^k without overflow: for large arguments
// both factors blow up, so work with exponentials directly.
double tanh_kernel(double g, int k) {
    const double z = std::numbers::pi * g / 3.0;
    if (z > 350.0) {
        // sinh, cosh ~ e^z / 2: ratio ~ 2^{k-1} e^{-(k-1) z}
        return safe_exp(-(k - 1) * z + (k - 1) * std::numbers::ln2);
    }
    return std::sinh(z) / std::pow(std::cosh(z), k);
}

// Smallest gamma beyond which the kernel is below 1e-16 (k >= 2 decays like
// e^{-(k-1) pi g / 3}).
double gamma_cutoff(int k) {
    double g = 1.0;
    while (tanh_kernel(g, k) >= 1e-16 && g < 1e4) g += 0.5;
    return g;
}

} // namespace

void LachalParams::validate() const {
    if (!(y > 0.0)) throw Error("passage params: y must be > 0");
    if (!(T > 0.0)) throw Error("passage params: T must be > 0");
    if (n < 1) throw Error("passage params: n must be >= 1");
    if (!(beta_star > 0.0)) throw Error("passage params: beta_star must be > 0");
    if (y < beta_star) throw Error("passage params: bound requires y >= beta_star");
}

double bessel_K_imag(double gamma, double a) {
    if (!(a > 0.0)) throw NonpositiveArgument("bessel_K_imag: a must be > 0");
    if (gamma < 0.0) throw NonpositiveArgument("bessel_K_imag: gamma must be >= 0");
    if (a >= kExpUnderflow) return 0.0;
    const double t_max = std::acosh(kExpUnderflow / a);
    auto f = [=](double t) { return std::exp(-a * std::cosh(t)) * std::cos(gamma * t); };
    return GK::integrate(f, 0.0, t_max, 15, 1e-12);
}

double theta_transform_integral(int k, double a) {
    if (!(a > 0.0)) throw NonpositiveArgument("theta_transform_integral: a must be > 0");
    if (k < 2) throw NonpositiveArgument("theta_transform_integral: k must be >= 2");
    if (a >= kExpUnderflow) return 0.0;

    const double g_max = gamma_cutoff(k);
    auto inner = [=](double theta) {
        auto f = [=](double g) { return std::sin(g * theta) * tanh_kernel(g, k); };
        return GK::integrate(f, 0.0, g_max, 15, 1e-11);
    };
    const double t_max = std::acosh(kExpUnderflow / a);
    auto outer = [=](double theta) {
        return a * std::sinh(theta) * std::exp(-a * std::cosh(theta)) * inner(theta);
    };
    return GK::integrate(outer, 0.0, t_max, 12, 1e-10);
}

double gamma_integral_direct(int k, double a) {
    if (!(a > 0.0)) throw NonpositiveArgument("gamma_integral_direct: a must be > 0");
    if (k < 2) throw NonpositiveArgument("gamma_integral_direct: k must be >= 2");
    if (a >= kExpUnderflow) return 0.0;
    const double g_max = gamma_cutoff(k);
    auto f = [=](double g) { return g * bessel_K_imag(g, a) * tanh_kernel(g, k); };
    return GK::integrate(f, 0.0, g_max, 10, 1e-10);
}

double lachal_g(double dt_, double y, double v, double u) {
    if (!(dt_ > 0.0)) throw NonpositiveElapsed("lachal_g: elapsed time must be > 0");
    const double t2 = dt_ * dt_;
    const double e = -6.0 * y * y / (t2 * dt_) - 6.0 * y * v / t2 - 2.0 * (u * u + v * v) / dt_;
    const double c = (2.0 * u / t2) * (3.0 * y + dt_ * v);
    // (2/pi dt^2) sqrt(3) e^e cosh(c) = (sqrt(3)/(pi dt^2)) (e^{e+c} + e^{e-c})
    const double pref = std::sqrt(3.0) / (std::numbers::pi * t2);
    return pref * (safe_exp(e + c) + safe_exp(e - c));
}

double lachal_g_u_integral(double dt_, double y, double v) {
    if (!(dt_ > 0.0)) throw NonpositiveElapsed("lachal_g_u_integral: elapsed time must be > 0");
    boost::math::quadrature::exp_sinh<double> integrator;
    auto f = [=](double u) { return lachal_g(dt_, y, v, u); };
    return integrator.integrate(f, 1e-12);
}

double lachal_g_u_integral_exact(double dt_, double y, double v) {
    if (!(dt_ > 0.0)) throw NonpositiveElapsed("lachal_g_u_integral_exact: elapsed time > 0");
    const double z = y + v * dt_;
    return std::sqrt(3.0 / (2.0 * std::numbers::pi)) / std::pow(dt_, 1.5) *
           safe_exp(-1.5 * z * z / (dt_ * dt_ * dt_));
}

double bound_constant(double T, double beta_star, BoundScheme scheme) {
    if (!(T > 0.0)) throw Error("bound_constant: T must be > 0");
    if (!(beta_star > 0.0)) throw Error("bound_constant: beta_star must be > 0");

    const double b32 = 1.5 * beta_star * beta_star;
    // t^{-3/2} exp(-b32/t^3) in log form: the naive product is inf * 0 = NaN
    // when quadrature nodes approach t = 0.
    auto inner_integrand = [=](double t) {
        if (t <= 0.0) return 0.0;
        const double q = b32 / (t * t * t);
        if (!(q < 5000.0)) return 0.0; // exponent certainly below -3900
        return std::sqrt(3.0) / std::numbers::pi * safe_exp(-1.5 * std::log(t) - q);
    };
    const double pref = 64.0 / (std::numbers::pi * std::numbers::pi * std::numbers::pi);

    if (scheme == BoundScheme::SqrtSubstitution) {
        auto inner = [&](double upper) {
            if (upper <= 0.0) return 0.0;
            return GK::integrate(inner_integrand, 0.0, upper, 15, 1e-9);
        };
        // s = w^2: int_0^T s^{-1/2} I(T - s) ds = 2 int_0^sqrt(T) I(T - w^2) dw
        auto outer = [&](double w) { return 2.0 * inner(T - w * w); };
        return pref * GK::integrate(outer, 0.0, std::sqrt(T), 15, 1e-9);
    }

    // Two integrator objects: tanh_sinh mutates its node cache during
    // refinement, so the outer and inner levels must not share one.
    boost::math::quadrature::tanh_sinh<double> ts_outer, ts_inner;
    auto inner = [&](double upper) {
        if (upper <= 0.0) return 0.0;
        return ts_inner.integrate(inner_integrand, 0.0, upper);
    };
    auto outer = [&](double s) { return s > 0.0 ? inner(T - s) / std::sqrt(s) : 0.0; };
    return pref * ts_outer.integrate(outer, 0.0, T);
}

std::vector<PassageEstimate> mc_passage_curve(double y, double v, double T, int n_max,
                                              double dt, std::size_t M, std::uint64_t seed,
                                              int workers) {
    if (!(y > 0.0)) throw Error("mc_passage_curve: y must be > 0");
    if (!(T > 0.0) || !(dt > 0.0)) throw Error("mc_passage_curve: T and dt must be > 0");
    if (n_max < 1) throw Error("mc_passage_curve: n_max must be >= 1");
    if (M == 0) throw Error("mc_passage_curve: need at least one path");

    const auto n_steps = static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
    const double dt_last = T - static_cast<double>(n_steps - 1) * dt;

    // Exact increment coefficients: dx = u dt + c11 xi1,
    // du = c21 xi1 + c22 xi2 reproduces cov [[dt^3/3, dt^2/2],[dt^2/2, dt]].
    auto coeffs = [](double h, double& c11, double& c21, double& c22) {
        const double sh = std::sqrt(h);
        c11 = h * sh / std::sqrt(3.0);
        c21 = std::sqrt(3.0) / 2.0 * sh;
        c22 = sh / 2.0;
    };
    double c11, c21, c22, l11, l21, l22;
    coeffs(dt, c11, c21, c22);
    coeffs(std::max(dt_last, 0.0), l11, l21, l22);

    std::vector<std::size_t> at_least(static_cast<std::size_t>(n_max) + 1, 0);
    std::mutex merge_mutex;

    parallel_for_chunks(M, workers, [&](std::size_t lo, std::size_t hi, std::size_t) {
        std::vector<std::size_t> local(static_cast<std::size_t>(n_max) + 1, 0);
        for (std::size_t p = lo; p < hi; ++p) {
            RngStream g(seed, p);
            double x = y, u = v;
            int crossings = 0;
            bool positive = true; // x starts at y > 0
            for (std::size_t s = 0; s < n_steps && crossings < n_max; ++s) {
                const bool last = (s + 1 == n_steps);
                const double a11 = last ? l11 : c11;
                const double a21 = last ? l21 : c21;
                const double a22 = last ? l22 : c22;
                const double h = last ? dt_last : dt;
                double xi1, xi2;
                g.normal_pair(xi1, xi2);
                x += u * h + a11 * xi1;
                u += a21 * xi1 + a22 * xi2;
                const bool now_positive = x > 0.0;
                if (now_positive != positive) {
                    ++crossings;
                    positive = now_positive;
                }
            }
            for (int k = 1; k <= std::min(crossings, n_max); ++k)
                ++local[static_cast<std::size_t>(k)];
        }
        std::scoped_lock lk(merge_mutex);
        for (std::size_t k = 1; k < local.size(); ++k) at_least[k] += local[k];
    });

    std::vector<PassageEstimate> out;
    out.reserve(static_cast<std::size_t>(n_max));
    const auto m = static_cast<double>(M);
    for (int k = 1; k <= n_max; ++k) {
        PassageEstimate e;
        e.n = k;
        e.paths = M;
        e.probability = static_cast<double>(at_least[static_cast<std::size_t>(k)]) / m;
        e.std_error = std::sqrt(e.probability * (1.0 - e.probability) / m);
        out.push_back(e);
    }
    return out;
}

PassageEstimate mc_passage_probability(double y, double v, double T, int n, double dt,
                                       std::size_t M, std::uint64_t seed, int workers) {
    return mc_passage_curve(y, v, T, n, dt, M, seed, workers).back();
}

} // namespace lagrmc
