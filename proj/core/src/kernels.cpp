#include "lagrmc/kernels.hpp"

#include "lagrmc/errors.hpp"

namespace lagrmc {

VelocityKernel VelocityKernel::clipped_linear(double clip) {
    if (!(clip > 0.0)) throw Error("clipped_linear kernel needs a positive clip");
    return VelocityKernel(KernelPreset::ClippedLinear, clip);
}

VelocityKernel VelocityKernel::from_name(const std::string& name, double clip) {
    if (name == "zero") return zero();
    if (name == "neg_tanh") return neg_tanh();
    if (name == "clipped_linear") return clipped_linear(clip);
    throw Error("unknown kernel preset '" + name + "'");
}

double VelocityKernel::sup_norm() const {
    switch (preset_) {
    case KernelPreset::Zero: return 0.0;
    case KernelPreset::NegTanh: return 1.0;
    case KernelPreset::ClippedLinear: return clip_;
    }
    return 0.0;
}

std::vector<double> VelocityKernel::breakpoints() const {
    if (preset_ == KernelPreset::ClippedLinear) return {-clip_, clip_};
    return {};
}

std::string VelocityKernel::name() const {
    switch (preset_) {
    case KernelPreset::Zero: return "zero";
    case KernelPreset::NegTanh: return "neg_tanh";
    case KernelPreset::ClippedLinear: return "clipped_linear";
    }
    return "?";
}

} // namespace lagrmc
