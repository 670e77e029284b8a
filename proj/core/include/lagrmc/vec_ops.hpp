#pragma once

// Tiny fixed-cap vector helpers for points and velocities in dimension d <= 8,
// stored in flat double arrays. All loops are over an explicit runtime d.

#include <array>
#include <cmath>
#include <cstddef>
#include <span>

namespace lagrmc {

inline constexpr int kMaxDim = 8;

// A stack buffer large enough for any supported dimension. The active length
// is always carried separately.
using SmallVec = std::array<double, kMaxDim>;

inline double dot(std::span<const double> a, std::span<const double> b, int d) {
    double s = 0.0;
    for (int j = 0; j < d; ++j) s += a[j] * b[j];
    return s;
}

inline double norm2_sq(std::span<const double> a, int d) {
    double s = 0.0;
    for (int j = 0; j < d; ++j) s += a[j] * a[j];
    return s;
}

inline double norm2(std::span<const double> a, int d) {
    return std::sqrt(norm2_sq(a, d));
}

inline double dist_sq(std::span<const double> a, std::span<const double> b, int d) {
    double s = 0.0;
    for (int j = 0; j < d; ++j) {
        const double t = a[j] - b[j];
        s += t * t;
    }
    return s;
}

// out = u - 2 (u.n) n, the specular velocity jump at a wall with unit outward
// normal n. Also usable in place (out aliasing u is fine: u[j] is read before
// out[j] is written only through the precomputed inner product).
inline void specular_reflect(std::span<const double> u, std::span<const double> n,
                             std::span<double> out, int d) {
    const double s = dot(u, n, d);
    for (int j = 0; j < d; ++j) out[j] = u[j] - 2.0 * s * n[j];
}

} // namespace lagrmc
