#include "lagrmc/mollifier.hpp"

#include <cmath>
#include <numbers>

#include "lagrmc/errors.hpp"
#include "lagrmc/vec_ops.hpp"

namespace lagrmc {

double bump_normalizer(int d) {
    if (d < 1 || d > kMaxDim) throw Error("bump_normalizer: unsupported dimension");
    // 1 / integral_{|x|<1} (1-|x|^2)^2 dx = Gamma(d/2+3) / (2 pi^{d/2})
    const double hd = 0.5 * d;
    return std::tgamma(hd + 3.0) / (2.0 * std::pow(std::numbers::pi, hd));
}

MollifierSpec::MollifierSpec(double epsilon, int d) : epsilon_(epsilon), d_(d) {
    if (!(epsilon > 0.0)) throw Error("mollifier width must be positive");
    inv_eps_sq_ = 1.0 / (epsilon * epsilon);
    peak_ = bump_normalizer(d) / std::pow(epsilon, d);
}

} // namespace lagrmc
