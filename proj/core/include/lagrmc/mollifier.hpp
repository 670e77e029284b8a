#pragma once

// Compactly supported C^1 bump mollifier family
//     phi(x)  = c_d (1 - |x|^2)^2   on |x| < 1,  0 outside,
//     phi_eps(x) = eps^{-d} phi(x/eps),
// with c_d chosen so that phi integrates to one in dimension d.

#include <span>

namespace lagrmc {

// Normalizing constant c_d = Gamma(d/2 + 3) / (2 pi^{d/2}).
double bump_normalizer(int d);

class MollifierSpec {
public:
    MollifierSpec(double epsilon, int d);

    double epsilon() const { return epsilon_; }
    int dim() const { return d_; }

    // phi_eps evaluated from the squared distance |x|^2; the hot path has the
    // squared distance already.
    double phi_eps_sq(double r2) const {
        const double z = r2 * inv_eps_sq_;
        if (z >= 1.0) return 0.0;
        const double t = 1.0 - z;
        return peak_ * t * t;
    }

    double phi_eps(std::span<const double> x) const {
        double r2 = 0.0;
        for (int j = 0; j < d_; ++j) r2 += x[j] * x[j];
        return phi_eps_sq(r2);
    }

    // Peak value phi_eps(0) = c_d / eps^d.
    double peak() const { return peak_; }

private:
    double epsilon_;
    int d_;
    double inv_eps_sq_;
    double peak_;
};

} // namespace lagrmc
