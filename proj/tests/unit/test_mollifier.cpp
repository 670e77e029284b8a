#include "doctest.h"

#include "lagrmc/mollifier.hpp"
#include "lagrmc/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace lagrmc;

TEST_CASE("bump normalizer closed forms") {
    // c_d = Gamma(d/2 + 3) / (2 pi^{d/2}); hand-reduced values.
    CHECK(bump_normalizer(1) == doctest::Approx(15.0 / 16.0).epsilon(1e-14));
    CHECK(bump_normalizer(2) == doctest::Approx(3.0 / std::numbers::pi).epsilon(1e-14));
    CHECK(bump_normalizer(3) ==
          doctest::Approx(105.0 / (32.0 * std::numbers::pi)).epsilon(1e-14));
}

TEST_CASE("mollifier integrates to one") {
    // Radial reduction: integral of phi_eps over R^d equals
    // S_{d-1} c_d int_0^1 s^{d-1} (1-s^2)^2 ds with S_{d-1} = 2 pi^{d/2}/Gamma(d/2).
    const double surf[] = {2.0, 2.0 * std::numbers::pi, 4.0 * std::numbers::pi};
    for (int d = 1; d <= 3; ++d) {
        for (double eps : {0.05, 0.2, 1.0}) {
            const MollifierSpec mol(eps, d);
            const double cd = bump_normalizer(d);
            const double mass =
                surf[d - 1] * cd *
                gauss_legendre_panel(
                    [&](double s) {
                        const double t = 1.0 - s * s;
                        return std::pow(s, d - 1) * t * t;
                    },
                    0.0, 1.0);
            CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
            // Same mass through phi_eps itself (substitute r = eps*s).
            const double mass_eps =
                surf[d - 1] *
                gauss_legendre_panel(
                    [&](double r) {
                        return std::pow(r, d - 1) * mol.phi_eps_sq(r * r);
                    },
                    0.0, eps);
            CHECK(mass_eps == doctest::Approx(1.0).epsilon(1e-6));
        }
    }
}

TEST_CASE("support and nonnegativity") {
    const MollifierSpec mol(0.3, 2);
    // Exactly at the support edge the profile is zero up to one rounding ulp
    // of the squared-radius ratio.
    CHECK(mol.phi_eps_sq(0.3 * 0.3) <= 1e-30 * mol.peak());
    CHECK(mol.phi_eps_sq(0.09000001) == 0.0);
    CHECK(mol.phi_eps_sq(0.0899) > 0.0);
    CHECK(mol.peak() == doctest::Approx(bump_normalizer(2) / (0.3 * 0.3)).epsilon(1e-14));
    std::vector<double> x = {0.0, 0.0};
    CHECK(mol.phi_eps(x) == mol.peak());
    for (double r2 = 0.0; r2 < 0.2; r2 += 0.003) CHECK(mol.phi_eps_sq(r2) >= 0.0);
    // C^1 at the edge of the support: value and slope both vanish.
    const double h = 1e-6;
    CHECK(std::abs(mol.phi_eps_sq(0.09 - h)) < 1e-7 * mol.peak());
}
