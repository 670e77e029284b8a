#pragma once

// Counter-based random number streams.
//
// Every consumer (a particle, a Monte Carlo path, a projection sampler) owns
// its own SplitMix64 stream whose starting state is derived from
// (master seed, stream id) by two finalizer rounds. Streams are therefore
// independent of scheduling: the numbers a particle sees depend only on the
// seed and its id, never on worker count or on how much entropy any other
// particle consumed. This is what makes simulation output bit-identical
// across thread configurations.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace lagrmc {

// SplitMix64 (Vigna's finalizer): state advances by the golden-gamma
// increment, output is a bijective avalanche of the state.
class SplitMix64 {
public:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

    explicit SplitMix64(std::uint64_t state = 0) : state_(state) {}

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t next() {
        state_ += kGamma;
        return mix(state_);
    }

    std::uint64_t state() const { return state_; }
    void set_state(std::uint64_t s) { state_ = s; }

private:
    std::uint64_t state_;
};

// Starting state for stream `stream_id` under `seed`: two dependent mixing
// rounds so that both near-identical seeds and near-identical ids produce
// unrelated streams.
inline std::uint64_t stream_state(std::uint64_t seed, std::uint64_t stream_id) {
    const std::uint64_t a = SplitMix64::mix(seed + SplitMix64::kGamma);
    return SplitMix64::mix(a ^ (stream_id * SplitMix64::kGamma + 0x94D049BB133111EBULL));
}

// One independent stream of uniforms and Gaussians.
class RngStream {
public:
    RngStream() : gen_(0) {}
    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : gen_(stream_state(seed, stream_id)) {}

    static RngStream from_raw_state(std::uint64_t state) {
        RngStream r;
        r.gen_.set_state(state);
        return r;
    }

    std::uint64_t next_u64() { return gen_.next(); }

    // Uniform on [0,1): 53 random bits.
    double uniform() { return static_cast<double>(gen_.next() >> 11) * 0x1.0p-53; }

    // Uniform on (0,1]: safe as a log argument.
    double uniform_pos() {
        return static_cast<double>((gen_.next() >> 11) + 1) * 0x1.0p-53;
    }

    // Uniform on [lo, hi).
    double uniform_in(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box-Muller pair: consumes exactly two u64 draws and yields two
    // independent standard normals. Fixed consumption keeps streams aligned
    // no matter how callers split the pair.
    void normal_pair(double& z0, double& z1) {
        const double u1 = uniform_pos();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        z0 = r * std::cos(a);
        z1 = r * std::sin(a);
    }

    // Fills out[0..n) with standard normals, drawing ceil(n/2) pairs and
    // discarding the spare half when n is odd.
    void normals(double* out, int n) {
        int j = 0;
        while (j + 1 < n) {
            normal_pair(out[j], out[j + 1]);
            j += 2;
        }
        if (j < n) {
            double z0 = 0.0, z1 = 0.0;
            normal_pair(z0, z1);
            out[j] = z0;
        }
    }

    std::uint64_t raw_state() const { return gen_.state(); }

private:
    SplitMix64 gen_;
};

} // namespace lagrmc
