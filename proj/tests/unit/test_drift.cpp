#include "doctest.h"

#include "lagrmc/drift.hpp"
#include "lagrmc/errors.hpp"
#include "lagrmc/rng.hpp"

#include <cmath>
#include <vector>

using namespace lagrmc;

namespace {
std::vector<double> vec(std::initializer_list<double> v) { return std::vector<double>(v); }
} // namespace

TEST_CASE("velocity kernel presets") {
    const auto z = VelocityKernel::zero();
    const auto t = VelocityKernel::neg_tanh();
    const auto c = VelocityKernel::clipped_linear(2.0);
    CHECK(z.eval1(3.7) == 0.0);
    CHECK(z.sup_norm() == 0.0);
    CHECK(t.eval1(0.5) == doctest::Approx(-std::tanh(0.5)).epsilon(1e-15));
    CHECK(t.sup_norm() == 1.0);
    CHECK(c.eval1(5.0) == 2.0);
    CHECK(c.eval1(-5.0) == -2.0);
    CHECK(c.eval1(0.3) == 0.3);
    CHECK(c.sup_norm() == 2.0);
    CHECK(c.breakpoints().size() == 2);
    CHECK(VelocityKernel::from_name("neg_tanh", 0.0).preset() == KernelPreset::NegTanh);
    CHECK_THROWS_AS(VelocityKernel::from_name("bogus", 0.0), Error);
}

TEST_CASE("boundary cutoff") {
    const auto ball = DomainGeometry::ball(vec({0.0, 0.0}), 1.0);
    CHECK(boundary_cutoff(ball, vec({0.0, 0.0}), 0.1) == 1);
    CHECK(boundary_cutoff(ball, vec({0.95, 0.0}), 0.1) == 0);
    const auto hs = DomainGeometry::halfspace(2);
    CHECK(boundary_cutoff(hs, vec({0.2, 9.0}), 0.1) == 1);
    CHECK(boundary_cutoff(hs, vec({0.05, 0.0}), 0.1) == 0);
}

TEST_CASE("exact drift closed-form cases") {
    const auto ball = DomainGeometry::ball(vec({0.0, 0.0}), 1.0);

    // Odd kernel against an even velocity law vanishes identically.
    const DensitySpec even{ball, PositionDensity{0.0},
                           VelocityDensity::gaussian(vec({0.0, 0.0}), 1.0), 1};
    auto B = exact_drift(vec({0.3, -0.2}), even, VelocityKernel::neg_tanh());
    CHECK(B[0] == 0.0);
    CHECK(B[1] == 0.0);

    // Product density: the conditional law does not depend on x.
    const DensitySpec prod{ball, PositionDensity{0.0},
                           VelocityDensity::gaussian(vec({1.0, 0.0}), 1.0), 1};
    const auto B1 = exact_drift(vec({0.0, 0.0}), prod, VelocityKernel::neg_tanh());
    const auto B2 = exact_drift(vec({0.5, 0.1}), prod, VelocityKernel::neg_tanh());
    CHECK(B1[0] == doctest::Approx(B2[0]).epsilon(1e-14));
    CHECK(B1[1] == doctest::Approx(B2[1]).epsilon(1e-14));
    // Reference value fixed ahead of the build with adaptive quadrature.
    CHECK(B1[0] == doctest::Approx(-0.55040049079332717).epsilon(1e-9));
    CHECK(B1[1] == 0.0);

    // Wide clip on a N(1,1) marginal: expectation of the identity.
    const auto Bc = exact_drift(vec({0.0, 0.0}), prod, VelocityKernel::clipped_linear(10.0));
    CHECK(Bc[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(Bc[1] == doctest::Approx(0.0).epsilon(1e-12));

    // Outside the support of the position density the drift is the zero vector.
    const DensitySpec margined{ball, PositionDensity{0.4},
                               VelocityDensity::gaussian(vec({1.0, 0.0}), 1.0), 1};
    const auto B0 = exact_drift(vec({0.9, 0.0}), margined, VelocityKernel::neg_tanh());
    CHECK(B0[0] == 0.0);
    CHECK(B0[1] == 0.0);

    // Uniform-box velocity marginal with a kinked kernel: exact piecewise
    // value (clip(U,-2,2), U ~ Uniform[-3,5] -> 1/2).
    const auto iv = DomainGeometry::interval(1.0);
    const DensitySpec ubox{iv, PositionDensity{0.0},
                           VelocityDensity::uniform_box(vec({-3.0}), vec({5.0})), 1};
    const auto Bu = exact_drift(vec({0.5}), ubox, VelocityKernel::clipped_linear(2.0));
    CHECK(Bu[0] == doctest::Approx(0.5).epsilon(1e-12));
    const DensitySpec utanh{iv, PositionDensity{0.0},
                            VelocityDensity::uniform_box(vec({-1.0}), vec({3.0})), 1};
    const auto Bt = exact_drift(vec({0.5}), utanh, VelocityKernel::neg_tanh());
    CHECK(Bt[0] == doctest::Approx(-0.4688869185236894).epsilon(1e-9));

    // Refused specs.
    DensitySpec mix = prod;
    mix.mixture_components = 2;
    CHECK_THROWS_AS(exact_drift(vec({0.0, 0.0}), mix, VelocityKernel::neg_tanh()),
                    UnsupportedDensity);
    const DensitySpec pt{ball, PositionDensity{0.0},
                         VelocityDensity::point_mass(vec({1.0, 0.0})), 1};
    CHECK_THROWS_AS(exact_drift(vec({0.0, 0.0}), pt, VelocityKernel::neg_tanh()),
                    UnsupportedDensity);
}

TEST_CASE("smoothed drift small instances") {
    const auto ball = DomainGeometry::ball(vec({0.0, 0.0}), 1.0);
    const MollifierSpec mol(0.2, 2);
    const auto b = VelocityKernel::neg_tanh();

    // Single deep atom: ratio b(v) phi / (phi + eps).
    std::vector<double> y = {0.1, 0.0};
    std::vector<double> v = {2.0, -1.0};
    const EmpiricalSnapshot one{2, 1, y, v};
    auto B = smoothed_drift(vec({0.0, 0.0}), one, mol, b, ball);
    const double phi = mol.phi_eps(vec({-0.1, 0.0}));
    CHECK(B[0] == doctest::Approx(-std::tanh(2.0) * phi / (phi + 0.2)).epsilon(1e-14));
    CHECK(B[1] == doctest::Approx(std::tanh(1.0) * phi / (phi + 0.2)).epsilon(1e-14));

    // Query farther than eps from every atom: exact zero.
    B = smoothed_drift(vec({-0.5, 0.0}), one, mol, b, ball);
    CHECK(B[0] == 0.0);
    CHECK(B[1] == 0.0);

    // All atoms hugging the wall: the cutoff removes everything.
    std::vector<double> yw = {0.95, 0.0, 0.0, 0.95};
    std::vector<double> vw = {1.0, 1.0, 1.0, 1.0};
    const EmpiricalSnapshot wall{2, 2, yw, vw};
    B = smoothed_drift(vec({0.9, 0.0}), wall, mol, b, ball);
    CHECK(B[0] == 0.0);
    CHECK(B[1] == 0.0);

    // Empty snapshot is total too.
    const EmpiricalSnapshot empty{2, 0, {}, {}};
    B = smoothed_drift(vec({0.0, 0.0}), empty, mol, b, ball);
    CHECK(B[0] == 0.0);
}

TEST_CASE("smoothed drift is bounded by the kernel sup") {
    RngStream g(77, 0);
    const auto ball = DomainGeometry::ball(vec({0.0, 0.0}), 1.0);
    const auto b = VelocityKernel::clipped_linear(3.0);
    for (double eps : {0.05, 0.2, 0.5}) {
        const MollifierSpec mol(eps, 2);
        const std::size_t N = 300;
        std::vector<double> y(2 * N), v(2 * N);
        for (std::size_t i = 0; i < N; ++i) {
            double z[2];
            g.normal_pair(z[0], z[1]);
            const double r = std::sqrt(g.uniform()) * 0.999;
            const double nn = std::hypot(z[0], z[1]);
            y[2 * i] = r * z[0] / nn;
            y[2 * i + 1] = r * z[1] / nn;
            g.normal_pair(v[2 * i], v[2 * i + 1]);
            v[2 * i] *= 5.0;
            v[2 * i + 1] *= 5.0;
        }
        const EmpiricalSnapshot snap{2, N, y, v};
        for (int q = 0; q < 50; ++q) {
            std::vector<double> xq = {g.uniform_in(-1.0, 1.0) * 0.7,
                                      g.uniform_in(-1.0, 1.0) * 0.7};
            const auto B = smoothed_drift(xq, snap, mol, b, ball);
            CHECK(std::abs(B[0]) <= b.sup_norm());
            CHECK(std::abs(B[1]) <= b.sup_norm());
        }
    }
}

TEST_CASE("binned evaluator matches the naive sum") {
    RngStream g(1234, 0);
    for (int d = 1; d <= 3; ++d) {
        DomainGeometry dom =
            d == 1 ? DomainGeometry::interval(2.0)
                   : DomainGeometry::ball(std::vector<double>(d, 0.0), 1.0);
        for (double eps : {0.07, 0.25}) {
            const MollifierSpec mol(eps, d);
            for (const auto& b :
                 {VelocityKernel::neg_tanh(), VelocityKernel::clipped_linear(1.5)}) {
                const std::size_t N = 400;
                std::vector<double> y(N * d), v(N * d);
                std::size_t k = 0;
                while (k < N) {
                    std::vector<double> cand(d);
                    for (int j = 0; j < d; ++j)
                        cand[j] = d == 1 ? g.uniform_in(0.0, 2.0)
                                         : g.uniform_in(-1.0, 1.0);
                    if (dom.signed_distance(cand) < 0.0) continue;
                    for (int j = 0; j < d; ++j) {
                        y[k * d + j] = cand[j];
                        double z0, z1;
                        g.normal_pair(z0, z1);
                        v[k * d + j] = 2.0 * z0;
                    }
                    ++k;
                }
                const EmpiricalSnapshot snap{d, N, y, v};

                const std::size_t nq = 25;
                std::vector<double> queries(nq * d);
                for (std::size_t q = 0; q < nq; ++q)
                    for (int j = 0; j < d; ++j)
                        queries[q * d + j] =
                            d == 1 ? g.uniform_in(0.0, 2.0)
                                   : g.uniform_in(-0.7, 0.7);

                const auto fast = binned_smoothed_drift(queries, nq, snap, mol, b, dom);
                for (std::size_t q = 0; q < nq; ++q) {
                    const auto naive = smoothed_drift(
                        std::span<const double>(queries.data() + q * d, d), snap, mol, b,
                        dom);
                    for (int j = 0; j < d; ++j)
                        CHECK(std::abs(fast[q * d + j] - naive[j]) <= 1e-12);
                }
            }
        }
    }
}

TEST_CASE("drift evaluator grid path agrees with naive path") {
    RngStream g(555, 0);
    const auto ball = DomainGeometry::ball(vec({0.0, 0.0}), 1.0);
    const MollifierSpec mol(0.15, 2);
    const auto b = VelocityKernel::neg_tanh();
    const std::size_t N = 1000;
    std::vector<double> y(2 * N), v(2 * N);
    std::size_t k = 0;
    while (k < N) {
        const double a = g.uniform_in(-1.0, 1.0), c = g.uniform_in(-1.0, 1.0);
        if (a * a + c * c >= 1.0) continue;
        y[2 * k] = a;
        y[2 * k + 1] = c;
        g.normal_pair(v[2 * k], v[2 * k + 1]);
        ++k;
    }
    const EmpiricalSnapshot snap{2, N, y, v};
    const DriftEvaluator ev(snap, mol, b, ball, true);
    CHECK(ev.grid_active());
    for (int q = 0; q < 200; ++q) {
        std::vector<double> xq = {g.uniform_in(-0.9, 0.9), g.uniform_in(-0.9, 0.9)};
        SmallVec a{}, bnaive{};
        ev.eval(xq, std::span<double>(a.data(), 2));
        ev.eval_naive(xq, std::span<double>(bnaive.data(), 2));
        CHECK(std::abs(a[0] - bnaive[0]) <= 1e-12);
        CHECK(std::abs(a[1] - bnaive[1]) <= 1e-12);
    }
}

TEST_CASE("density sampling hits the requested law") {
    const auto ball = DomainGeometry::ball(vec({0.0, 0.0}), 1.0);
    const DensitySpec spec{ball, PositionDensity{0.3},
                           VelocityDensity::gaussian(vec({1.0, -2.0}), 0.5), 1};
    const std::size_t N = 20000;
    auto [xs, vs] = sample_density(spec, N, 99);
    REQUIRE(xs.size() == 2 * N);
    REQUIRE(vs.size() == 2 * N);
    double vmean0 = 0.0, vmean1 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        CHECK(ball.signed_distance(std::span<const double>(xs.data() + 2 * i, 2)) >=
              0.3 - 1e-12);
        vmean0 += vs[2 * i];
        vmean1 += vs[2 * i + 1];
    }
    CHECK(vmean0 / N == doctest::Approx(1.0).epsilon(0.02));
    CHECK(vmean1 / N == doctest::Approx(-2.0).epsilon(0.02));

    // Same seed, same draws; the sampler is a pure function of (spec, N, seed).
    auto [xs2, vs2] = sample_density(spec, N, 99);
    CHECK(xs == xs2);
    CHECK(vs == vs2);
}
