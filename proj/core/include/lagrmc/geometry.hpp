#pragma once

// Confining domains with closed-form boundary geometry: ball, half-space and
// interval. Everything the transport phase needs — signed distance, outward
// normals, exact segment/boundary intersection times, specular reflection —
// is exact (no iteration, no meshes).

#include <optional>
#include <span>
#include <vector>

#include "lagrmc/vec_ops.hpp"

namespace lagrmc {

enum class DomainKind { Ball, HalfSpace, Interval };

// Result of first_exit_time: the crossing time and the boundary point.
struct ExitHit {
    double t = 0.0;
    SmallVec hit{}; // first dim() entries are meaningful
};

class DomainGeometry {
public:
    // D = { |x - center| < radius }.
    static DomainGeometry ball(std::vector<double> center, double radius);
    // D = { x : x_1 > 0 } in dimension dim. Non-compact: usable only for the
    // free-Langevin passage-time studies, not a compliant confinement domain.
    static DomainGeometry halfspace(int dim);
    // D = (0, length), one-dimensional.
    static DomainGeometry interval(double length);

    DomainKind kind() const { return kind_; }
    int dim() const { return dim_; }

    double radius() const { return radius_; }
    const std::vector<double>& center() const { return center_; }
    double length() const { return length_; }

    // Characteristic length used to scale boundary tolerances.
    double scale() const { return scale_; }

    // Points with |signed_distance| <= tol_boundary count as "on boundary".
    // Floating-point exit roots cannot land exactly on the boundary, so all
    // on-boundary logic works within this band.
    double tol_boundary() const { return 1e-9 * scale_; }

    // Largest feasible interior margin (radius of the biggest inscribed ball).
    double inradius() const;

    // > 0 inside, 0 on the boundary, < 0 outside.
    double signed_distance(std::span<const double> x) const;

    // Unit outward normal at a boundary point. Throws NotOnBoundary when
    // |signed_distance(x)| > tol_boundary.
    void outward_normal(std::span<const double> x, std::span<double> n_out) const;

    // Smallest s in (0, h] with x + s u on the boundary, or nullopt when the
    // segment stays strictly interior. Closed form: linear for flat faces,
    // stable quadratic for the ball. For the ball the returned hit point is
    // computed as x + t u componentwise — the exact arithmetic the caller
    // would use. Throws StartsOutside when signed_distance(x) < -tol_boundary.
    std::optional<ExitHit> first_exit_time(std::span<const double> x,
                                           std::span<const double> u, double h) const;

    // Nearest boundary point (radial projection for the ball, nearest face
    // otherwise). Throws Error at the ball center where it is undefined.
    void project_to_boundary(std::span<const double> x, std::span<double> out) const;

    // Containment repair: clamp a point sitting slightly outside back onto
    // the closed domain. Returns true if the point moved. The caller decides
    // how far outside is acceptable before calling this.
    bool project_into(std::span<double> x) const;

    // Axis-aligned bounding box (throws Error for the unbounded half-space).
    void bounding_box(std::span<double> lo, std::span<double> hi) const;

    double volume() const;        // Lebesgue measure (throws for half-space)
    double boundary_area() const; // surface measure; 2 for the interval

    // True for domains satisfying the compact smooth-boundary hypothesis the
    // confined model assumes. Half-space: false (oracle use only). Interval:
    // false as well (0-dimensional boundary), kept for comparison studies.
    bool compliant_compact() const { return kind_ == DomainKind::Ball; }

private:
    DomainGeometry() = default;

    std::optional<ExitHit> exit_ball(std::span<const double> x,
                                     std::span<const double> u, double h) const;
    std::optional<ExitHit> exit_faces(std::span<const double> x,
                                      std::span<const double> u, double h) const;

    DomainKind kind_ = DomainKind::Ball;
    int dim_ = 1;
    std::vector<double> center_;
    double radius_ = 1.0;
    double length_ = 1.0;
    double scale_ = 1.0;
};

} // namespace lagrmc
