#ifndef SOSPULSE_RNG_HPP
#define SOSPULSE_RNG_HPP

#include <cstdint>
#include <random>

#include "sospulse/types.hpp"

namespace sospulse {

/// Seeded standard-normal sampler (Box-Muller over mt19937_64 uniforms).
/// Self-contained so that streams are identical across standard libraries.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}

    Real operator()() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const Real u1 = uniform_open();
        const Real u2 = uniform_open();
        const Real radius = std::sqrt(-2.0 * std::log(u1));
        const Real angle  = two_pi * u2;
        spare_     = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    /// Uniform draw in (0, 1].
    Real uniform_open() {
        return (static_cast<Real>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Uniform draw in [lo, hi).
    Real uniform(Real lo, Real hi) {
        return lo + (hi - lo) * static_cast<Real>(engine_() >> 11) * 0x1.0p-53;
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    Real spare_     = 0.0;
};

}  // namespace sospulse

#endif  // SOSPULSE_RNG_HPP
