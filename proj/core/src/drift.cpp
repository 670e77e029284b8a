#include "lagrmc/drift.hpp"

#include <cmath>
#include <cstring>

#include "lagrmc/errors.hpp"
#include "lagrmc/quadrature.hpp"
#include "lagrmc/rng.hpp"

namespace lagrmc {

int boundary_cutoff(const DomainGeometry& dom, std::span<const double> y, double eps) {
    return dom.signed_distance(y) > eps ? 1 : 0;
}

DriftEvaluator::DriftEvaluator(const EmpiricalSnapshot& snap, const MollifierSpec& mol,
                               const VelocityKernel& b, const DomainGeometry& dom,
                               bool build_grid)
    : snap_(snap), mol_(mol), eps_(mol.epsilon()) {
    if (snap.d != mol.dim()) throw Error("drift: snapshot/mollifier dimension mismatch");
    const int d = snap.d;
    const std::size_t N = snap.N;

    bvals_.resize(N * d);
    beta_.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
        const double* ui = snap.u.data() + i * d;
        for (int j = 0; j < d; ++j) bvals_[i * d + j] = b.eval1(ui[j]);
        beta_[i] = static_cast<std::uint8_t>(
            boundary_cutoff(dom, std::span<const double>(snap.x.data() + i * d, d), eps_));
    }
    if (build_grid && N > 0) {
        grid_ = std::make_unique<CellGrid>(snap.x, N, d, eps_);
        if (!grid_->usable()) grid_.reset();
    }
}

void DriftEvaluator::finalize(const double* num, double den, std::span<double> out) const {
    const int d = snap_.d;
    const double inv_n = snap_.N > 0 ? 1.0 / static_cast<double>(snap_.N) : 0.0;
    const double denom = den * inv_n + eps_;
    for (int j = 0; j < d; ++j) out[j] = (num[j] * inv_n) / denom;
}

void DriftEvaluator::eval_naive(std::span<const double> xq, std::span<double> out) const {
    const int d = snap_.d;
    double num[kMaxDim] = {};
    double den = 0.0;
    for (std::size_t i = 0; i < snap_.N; ++i) {
        if (!beta_[i]) continue;
        const double* yi = snap_.x.data() + i * d;
        double r2 = 0.0;
        for (int j = 0; j < d; ++j) {
            const double t = xq[j] - yi[j];
            r2 += t * t;
        }
        const double w = mol_.phi_eps_sq(r2);
        if (w == 0.0) continue;
        den += w;
        const double* bi = bvals_.data() + i * d;
        for (int j = 0; j < d; ++j) num[j] += bi[j] * w;
    }
    finalize(num, den, out);
}

void DriftEvaluator::eval_grid(std::span<const double> xq, std::span<double> out) const {
    const int d = snap_.d;
    double num[kMaxDim] = {};
    double den = 0.0;
    grid_->for_neighbors(xq, [&](std::uint32_t i) {
        if (!beta_[i]) return;
        const double* yi = snap_.x.data() + std::size_t{i} * d;
        double r2 = 0.0;
        for (int j = 0; j < d; ++j) {
            const double t = xq[j] - yi[j];
            r2 += t * t;
        }
        const double w = mol_.phi_eps_sq(r2);
        if (w == 0.0) return;
        den += w;
        const double* bi = bvals_.data() + std::size_t{i} * d;
        for (int j = 0; j < d; ++j) num[j] += bi[j] * w;
    });
    finalize(num, den, out);
}

void DriftEvaluator::eval(std::span<const double> xq, std::span<double> out) const {
    if (grid_active())
        eval_grid(xq, out);
    else
        eval_naive(xq, out);
}

std::vector<double> smoothed_drift(std::span<const double> x, const EmpiricalSnapshot& snap,
                                   const MollifierSpec& mol, const VelocityKernel& b,
                                   const DomainGeometry& dom) {
    DriftEvaluator ev(snap, mol, b, dom, /*build_grid=*/false);
    std::vector<double> out(snap.d);
    ev.eval_naive(x, out);
    return out;
}

std::vector<double> binned_smoothed_drift(std::span<const double> queries, std::size_t n_query,
                                          const EmpiricalSnapshot& snap,
                                          const MollifierSpec& mol, const VelocityKernel& b,
                                          const DomainGeometry& dom) {
    DriftEvaluator ev(snap, mol, b, dom, /*build_grid=*/true);
    const int d = snap.d;
    std::vector<double> out(n_query * d);
    for (std::size_t q = 0; q < n_query; ++q)
        ev.eval(std::span<const double>(queries.data() + q * d, d),
                std::span<double>(out.data() + q * d, d));
    return out;
}

// ---- exact drift ----

VelocityDensity VelocityDensity::gaussian(std::vector<double> mean, double stddev) {
    if (!(stddev > 0.0)) throw Error("gaussian velocity density needs a positive stddev");
    VelocityDensity v;
    v.kind = Kind::Gaussian;
    v.mean = std::move(mean);
    v.stddev = stddev;
    return v;
}

VelocityDensity VelocityDensity::uniform_box(std::vector<double> lo, std::vector<double> hi) {
    if (lo.size() != hi.size()) throw Error("uniform box bounds must have equal dimension");
    for (std::size_t j = 0; j < lo.size(); ++j)
        if (!(lo[j] < hi[j])) throw Error("uniform box needs lo < hi in every coordinate");
    VelocityDensity v;
    v.kind = Kind::UniformBox;
    v.lo = std::move(lo);
    v.hi = std::move(hi);
    return v;
}

VelocityDensity VelocityDensity::point_mass(std::vector<double> p) {
    VelocityDensity v;
    v.kind = Kind::Point;
    v.point = std::move(p);
    return v;
}

std::vector<double> exact_drift(std::span<const double> x, const DensitySpec& spec,
                                const VelocityKernel& b) {
    if (spec.mixture_components != 1)
        throw UnsupportedDensity("exact_drift: density is not a product (mixture spec)");
    if (spec.vel.kind == VelocityDensity::Kind::Point)
        throw UnsupportedDensity(
            "exact_drift: point-mass velocity marginal has no density; use a Gaussian or a box");

    const int d = spec.domain.dim();
    std::vector<double> out(d, 0.0);

    // Outside the support of the position marginal the conditional
    // expectation is defined as zero.
    if (spec.domain.signed_distance(x) < spec.pos.margin) return out;

    switch (spec.vel.kind) {
    case VelocityDensity::Kind::Gaussian:
        for (int j = 0; j < d; ++j)
            out[j] = gauss_hermite_expect([&](double v) { return b.eval1(v); },
                                          spec.vel.mean[j], spec.vel.stddev);
        break;
    case VelocityDensity::Kind::UniformBox: {
        const auto kinks = b.breakpoints();
        for (int j = 0; j < d; ++j) {
            const double lo = spec.vel.lo[j], hi = spec.vel.hi[j];
            out[j] = gauss_legendre_split([&](double v) { return b.eval1(v); }, lo, hi,
                                          kinks) /
                     (hi - lo);
        }
        break;
    }
    case VelocityDensity::Kind::Point:
        break; // unreachable
    }
    return out;
}

std::pair<std::vector<double>, std::vector<double>>
sample_density(const DensitySpec& spec, std::size_t N, std::uint64_t seed) {
    const int d = spec.domain.dim();
    if (spec.pos.margin >= spec.domain.inradius())
        throw InfeasibleMargin("sample_density: margin exceeds the domain inradius");

    double lo[kMaxDim], hi[kMaxDim];
    spec.domain.bounding_box(std::span<double>(lo, d), std::span<double>(hi, d));

    std::vector<double> xs(N * d), us(N * d);
    for (std::size_t i = 0; i < N; ++i) {
        RngStream g(seed, i);
        double* xi = xs.data() + i * d;
        // Rejection sampling of the uniform position over {sd >= margin}.
        for (;;) {
            for (int j = 0; j < d; ++j) xi[j] = g.uniform_in(lo[j], hi[j]);
            if (spec.domain.signed_distance(std::span<const double>(xi, d)) >= spec.pos.margin)
                break;
        }
        double* ui = us.data() + i * d;
        switch (spec.vel.kind) {
        case VelocityDensity::Kind::Gaussian: {
            g.normals(ui, d);
            for (int j = 0; j < d; ++j) ui[j] = spec.vel.mean[j] + spec.vel.stddev * ui[j];
            break;
        }
        case VelocityDensity::Kind::UniformBox:
            for (int j = 0; j < d; ++j) ui[j] = g.uniform_in(spec.vel.lo[j], spec.vel.hi[j]);
            break;
        case VelocityDensity::Kind::Point:
            for (int j = 0; j < d; ++j) ui[j] = spec.vel.point[j];
            break;
        }
    }
    return {std::move(xs), std::move(us)};
}

} // namespace lagrmc
