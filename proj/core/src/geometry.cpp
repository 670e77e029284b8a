#include "lagrmc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lagrmc/errors.hpp"

namespace lagrmc {

DomainGeometry DomainGeometry::ball(std::vector<double> center, double radius) {
    if (radius <= 0.0) throw Error("ball radius must be positive");
    if (center.empty() || center.size() > static_cast<std::size_t>(kMaxDim))
        throw Error("ball dimension must be in [1, " + std::to_string(kMaxDim) + "]");
    DomainGeometry d;
    d.kind_ = DomainKind::Ball;
    d.dim_ = static_cast<int>(center.size());
    d.center_ = std::move(center);
    d.radius_ = radius;
    d.scale_ = radius;
    return d;
}

DomainGeometry DomainGeometry::halfspace(int dim) {
    if (dim < 1 || dim > kMaxDim)
        throw Error("halfspace dimension must be in [1, " + std::to_string(kMaxDim) + "]");
    DomainGeometry d;
    d.kind_ = DomainKind::HalfSpace;
    d.dim_ = dim;
    d.scale_ = 1.0; // no intrinsic length; tolerances are absolute
    return d;
}

DomainGeometry DomainGeometry::interval(double length) {
    if (length <= 0.0) throw Error("interval length must be positive");
    DomainGeometry d;
    d.kind_ = DomainKind::Interval;
    d.dim_ = 1;
    d.length_ = length;
    d.scale_ = length;
    return d;
}

double DomainGeometry::inradius() const {
    switch (kind_) {
    case DomainKind::Ball: return radius_;
    case DomainKind::Interval: return 0.5 * length_;
    case DomainKind::HalfSpace: return std::numeric_limits<double>::infinity();
    }
    return 0.0;
}

double DomainGeometry::signed_distance(std::span<const double> x) const {
    switch (kind_) {
    case DomainKind::Ball: {
        double s = 0.0;
        for (int j = 0; j < dim_; ++j) {
            const double t = x[j] - center_[j];
            s += t * t;
        }
        return radius_ - std::sqrt(s);
    }
    case DomainKind::HalfSpace:
        return x[0];
    case DomainKind::Interval:
        return std::min(x[0], length_ - x[0]);
    }
    return 0.0;
}

void DomainGeometry::outward_normal(std::span<const double> x, std::span<double> n_out) const {
    const double sd = signed_distance(x);
    if (std::abs(sd) > tol_boundary())
        throw NotOnBoundary("outward_normal: point is not on the boundary (signed distance " +
                            std::to_string(sd) + ")");
    switch (kind_) {
    case DomainKind::Ball: {
        double r = 0.0;
        for (int j = 0; j < dim_; ++j) {
            const double t = x[j] - center_[j];
            r += t * t;
        }
        r = std::sqrt(r);
        if (r == 0.0) throw NotOnBoundary("outward_normal: ball center is not on the boundary");
        for (int j = 0; j < dim_; ++j) n_out[j] = (x[j] - center_[j]) / r;
        return;
    }
    case DomainKind::HalfSpace:
        n_out[0] = -1.0;
        for (int j = 1; j < dim_; ++j) n_out[j] = 0.0;
        return;
    case DomainKind::Interval:
        n_out[0] = (x[0] < 0.5 * length_) ? -1.0 : 1.0;
        return;
    }
}

std::optional<ExitHit> DomainGeometry::exit_ball(std::span<const double> x,
                                                 std::span<const double> u, double h) const {
    // Solve |x - c + s u|^2 = R^2 for the crossing time s.
    double a = 0.0, b = 0.0, c0 = 0.0;
    for (int j = 0; j < dim_; ++j) {
        const double w = x[j] - center_[j];
        a += u[j] * u[j];
        b += w * u[j];
        c0 += w * w;
    }
    c0 -= radius_ * radius_;
    if (a == 0.0) return std::nullopt; // immobile

    const double disc = b * b - a * c0;
    if (disc <= 0.0) return std::nullopt; // never touches the sphere

    // Stable quadratic roots: compute the root free of cancellation first and
    // recover the other via Vieta. Repeated reflections would otherwise
    // accumulate the cancellation error of the naive formula.
    const double sq = std::sqrt(disc);
    double t_big; // the larger (outbound) root
    if (b <= 0.0) {
        t_big = (-b + sq) / a;
    } else {
        const double t_small = -(b + sq) / a; // negative, stable
        t_big = (c0 / a) / t_small;
    }

    const double band = tol_boundary();
    const double dist = radius_ - std::sqrt(c0 + radius_ * radius_); // signed distance to the sphere

    double root;
    if (dist > band) {
        // Strict interior: exactly one positive root, the outbound one.
        root = t_big;
    } else {
        // On-boundary band (post-reflection restarts live here).
        if (b < 0.0) {
            // Moving inward: the trajectory re-enters and exits at the far
            // chord point t_big > 0.
            root = t_big;
        } else {
            // Tangent or outward on the boundary: grazing. Treated as no
            // reflection; transport continues and containment repair handles
            // the quadratic-order drift off the sphere.
            return std::nullopt;
        }
    }

    if (!(root > 0.0) || root > h) return std::nullopt;

    ExitHit e;
    e.t = root;
    // Hit point on the exact same arithmetic path the caller would take.
    for (int j = 0; j < dim_; ++j) e.hit[j] = x[j] + root * u[j];
    return e;
}

std::optional<ExitHit> DomainGeometry::exit_faces(std::span<const double> x,
                                                  std::span<const double> u, double h) const {
    // Linear motion against one or two flat faces; smallest positive
    // crossing wins. Non-positive candidates (band starts moving away or
    // degenerate misuse) are skipped — legitimate flows always move away
    // from a just-reflected face.
    double best = std::numeric_limits<double>::infinity();
    double face_coord = 0.0;
    bool found = false;

    // Face x_1 = 0 (both half-space and interval), approached when u_1 < 0.
    if (u[0] < 0.0 && x[0] > 0.0) {
        const double t = x[0] / (-u[0]);
        if (t > 0.0 && t <= h && t < best) {
            best = t;
            face_coord = 0.0;
            found = true;
        }
    }
    // Face x_1 = L (interval only), approached when u_1 > 0.
    if (kind_ == DomainKind::Interval && u[0] > 0.0 && x[0] < length_) {
        const double t = (length_ - x[0]) / u[0];
        if (t > 0.0 && t <= h && t < best) {
            best = t;
            face_coord = length_;
            found = true;
        }
    }
    if (!found) return std::nullopt;

    ExitHit e;
    e.t = best;
    e.hit[0] = face_coord; // snap exactly onto the face
    for (int j = 1; j < dim_; ++j) e.hit[j] = x[j] + best * u[j];
    return e;
}

std::optional<ExitHit> DomainGeometry::first_exit_time(std::span<const double> x,
                                                       std::span<const double> u,
                                                       double h) const {
    if (!(h > 0.0)) throw Error("first_exit_time: time budget must be positive");
    const double sd = signed_distance(x);
    if (sd < -tol_boundary())
        throw StartsOutside("first_exit_time: start point is outside the domain (signed distance " +
                            std::to_string(sd) + ")");
    if (kind_ == DomainKind::Ball) return exit_ball(x, u, h);
    return exit_faces(x, u, h);
}

void DomainGeometry::project_to_boundary(std::span<const double> x, std::span<double> out) const {
    switch (kind_) {
    case DomainKind::Ball: {
        double r = 0.0;
        for (int j = 0; j < dim_; ++j) {
            const double t = x[j] - center_[j];
            r += t * t;
        }
        r = std::sqrt(r);
        if (r == 0.0) throw Error("project_to_boundary: undefined at the ball center");
        const double f = radius_ / r;
        for (int j = 0; j < dim_; ++j) out[j] = center_[j] + (x[j] - center_[j]) * f;
        return;
    }
    case DomainKind::HalfSpace:
        out[0] = 0.0;
        for (int j = 1; j < dim_; ++j) out[j] = x[j];
        return;
    case DomainKind::Interval:
        out[0] = (x[0] < 0.5 * length_) ? 0.0 : length_;
        return;
    }
}

bool DomainGeometry::project_into(std::span<double> x) const {
    switch (kind_) {
    case DomainKind::Ball: {
        double r = 0.0;
        for (int j = 0; j < dim_; ++j) {
            const double t = x[j] - center_[j];
            r += t * t;
        }
        r = std::sqrt(r);
        if (r <= radius_) return false;
        const double f = radius_ / r;
        for (int j = 0; j < dim_; ++j) x[j] = center_[j] + (x[j] - center_[j]) * f;
        return true;
    }
    case DomainKind::HalfSpace:
        if (x[0] >= 0.0) return false;
        x[0] = 0.0;
        return true;
    case DomainKind::Interval:
        if (x[0] >= 0.0 && x[0] <= length_) return false;
        x[0] = std::clamp(x[0], 0.0, length_);
        return true;
    }
    return false;
}

void DomainGeometry::bounding_box(std::span<double> lo, std::span<double> hi) const {
    switch (kind_) {
    case DomainKind::Ball:
        for (int j = 0; j < dim_; ++j) {
            lo[j] = center_[j] - radius_;
            hi[j] = center_[j] + radius_;
        }
        return;
    case DomainKind::Interval:
        lo[0] = 0.0;
        hi[0] = length_;
        return;
    case DomainKind::HalfSpace:
        throw Error("bounding_box: half-space is unbounded");
    }
}

double DomainGeometry::volume() const {
    switch (kind_) {
    case DomainKind::Ball: {
        const double hd = 0.5 * dim_;
        return std::pow(std::numbers::pi, hd) * std::pow(radius_, dim_) / std::tgamma(hd + 1.0);
    }
    case DomainKind::Interval:
        return length_;
    case DomainKind::HalfSpace:
        throw Error("volume: half-space is unbounded");
    }
    return 0.0;
}

double DomainGeometry::boundary_area() const {
    switch (kind_) {
    case DomainKind::Ball:
        // |S^{d-1}_R| = d * V_d(R) / R
        return dim_ * volume() / radius_;
    case DomainKind::Interval:
        return 2.0; // counting measure on the two endpoints
    case DomainKind::HalfSpace:
        throw Error("boundary_area: half-space boundary is unbounded");
    }
    return 0.0;
}

} // namespace lagrmc
