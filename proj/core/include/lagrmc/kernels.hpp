#pragma once

// Velocity kernels b(u): the bounded continuous functions whose conditional
// expectation drives the drift. All presets act componentwise.

#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace lagrmc {

enum class KernelPreset { Zero, NegTanh, ClippedLinear };

class VelocityKernel {
public:
    static VelocityKernel zero() { return VelocityKernel(KernelPreset::Zero, 0.0); }
    static VelocityKernel neg_tanh() { return VelocityKernel(KernelPreset::NegTanh, 0.0); }
    static VelocityKernel clipped_linear(double clip);

    // Parse from a config preset name ("zero" | "neg_tanh" | "clipped_linear").
    static VelocityKernel from_name(const std::string& name, double clip);

    KernelPreset preset() const { return preset_; }
    double clip() const { return clip_; }
    bool is_zero() const { return preset_ == KernelPreset::Zero; }

    // sup over u of |b(u)| componentwise: the bound the smoothed drift
    // inherits.
    double sup_norm() const;

    double eval1(double uj) const {
        switch (preset_) {
        case KernelPreset::Zero: return 0.0;
        case KernelPreset::NegTanh: return -std::tanh(uj);
        case KernelPreset::ClippedLinear:
            return uj < -clip_ ? -clip_ : (uj > clip_ ? clip_ : uj);
        }
        return 0.0;
    }

    void eval(std::span<const double> u, std::span<double> out, int d) const {
        for (int j = 0; j < d; ++j) out[j] = eval1(u[j]);
    }

    // Kink locations of the 1-D profile; quadrature rules split there to
    // keep spectral accuracy.
    std::vector<double> breakpoints() const;

    std::string name() const;

private:
    VelocityKernel(KernelPreset p, double clip) : preset_(p), clip_(clip) {}

    KernelPreset preset_;
    double clip_;
};

} // namespace lagrmc
