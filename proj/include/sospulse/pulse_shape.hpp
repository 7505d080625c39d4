#ifndef SOSPULSE_PULSE_SHAPE_HPP
#define SOSPULSE_PULSE_SHAPE_HPP

#include <limits>
#include <stdexcept>
#include <vector>

#include "sospulse/types.hpp"

namespace sospulse {

/// Known pulse shape h(t) of a pulse stream.
///
/// Three kinds are supported:
///  - Dirac: h(t) = delta(t), H(omega) = 1, zero time support.
///  - Gaussian: unit-area h(t) = exp(-t^2/(2 sigma^2)) / sqrt(2 pi sigma^2),
///    with H(omega) = exp(-omega^2 sigma^2 / 2). The effective support cuts
///    the tails at |t| = 8 sigma, below 1e-14 of the peak.
///  - TabulatedSymmetric: samples of an even pulse on a uniform grid
///    centered at t = 0; evaluated by linear interpolation, transformed by
///    trapezoidal quadrature.
///
/// All evaluators use the e^{-j omega t} analysis convention.
class PulseShape {
public:
    enum class Kind { Dirac, Gaussian, TabulatedSymmetric };

    static PulseShape dirac() { return PulseShape(Kind::Dirac, 0.0); }

    static PulseShape gaussian(Real sigma) {
        if (!(sigma > 0.0)) throw std::invalid_argument("PulseShape: Gaussian sigma must be > 0");
        PulseShape s(Kind::Gaussian, sigma);
        return s;
    }

    /// Tabulated even pulse; `samples` covers [-(n-1)/2, (n-1)/2] * spacing.
    static PulseShape tabulated_symmetric(std::vector<Real> samples, Real spacing) {
        if (!(spacing > 0.0)) throw std::invalid_argument("PulseShape: tabulated spacing must be > 0");
        if (samples.size() < 2) throw std::invalid_argument("PulseShape: tabulated pulse needs >= 2 samples");
        PulseShape s(Kind::TabulatedSymmetric, 0.0);
        s.samples_ = std::move(samples);
        s.spacing_ = spacing;
        return s;
    }

    Kind kind() const { return kind_; }
    Real sigma() const { return sigma_; }
    bool is_dirac() const { return kind_ == Kind::Dirac; }

    /// Effective time support R: h(t) = 0 for |t| >= R/2.
    Real support() const {
        switch (kind_) {
            case Kind::Dirac: return 0.0;
            case Kind::Gaussian: return 16.0 * sigma_;
            case Kind::TabulatedSymmetric:
                return static_cast<Real>(samples_.size() - 1) * spacing_;
        }
        return 0.0;
    }

    /// Pointwise value h(t). Dirac pulses have no pointwise rendering.
    Real evaluate(Real t) const {
        switch (kind_) {
            case Kind::Dirac:
                throw std::domain_error("PulseShape: Dirac pulses cannot be evaluated pointwise");
            case Kind::Gaussian: {
                const Real u = t / sigma_;
                if (std::abs(u) >= 8.0) return 0.0;
                return std::exp(-0.5 * u * u) / std::sqrt(two_pi * sigma_ * sigma_);
            }
            case Kind::TabulatedSymmetric: {
                const Real half = 0.5 * support();
                if (std::abs(t) >= half) return 0.0;
                const Real pos = (t + half) / spacing_;
                const auto i0  = static_cast<std::size_t>(pos);
                if (i0 + 1 >= samples_.size()) return samples_.back();
                const Real frac = pos - static_cast<Real>(i0);
                return samples_[i0] * (1.0 - frac) + samples_[i0 + 1] * frac;
            }
        }
        return 0.0;
    }

    /// CTFT H(omega) = int h(t) e^{-j omega t} dt. Finite for all real omega.
    Complex ctft(Real omega) const {
        switch (kind_) {
            case Kind::Dirac: return {1.0, 0.0};
            case Kind::Gaussian: {
                const Real e = 0.5 * omega * omega * sigma_ * sigma_;
                return {std::exp(-e), 0.0};
            }
            case Kind::TabulatedSymmetric: {
                // Trapezoidal quadrature on the tabulating grid.
                const Real half = 0.5 * support();
                Complex acc{0.0, 0.0};
                for (std::size_t i = 0; i < samples_.size(); ++i) {
                    const Real t = -half + static_cast<Real>(i) * spacing_;
                    const Real w = (i == 0 || i + 1 == samples_.size()) ? 0.5 : 1.0;
                    acc += w * samples_[i] * cis(-omega * t);
                }
                return acc * spacing_;
            }
        }
        return {0.0, 0.0};
    }

private:
    PulseShape(Kind kind, Real sigma) : kind_(kind), sigma_(sigma) {}

    Kind kind_;
    Real sigma_;
    std::vector<Real> samples_;
    Real spacing_ = 0.0;
};

/// Free-function form of the CTFT evaluator.
inline Complex ctft_pulse(const PulseShape& shape, Real omega) { return shape.ctft(omega); }

}  // namespace sospulse

#endif  // SOSPULSE_PULSE_SHAPE_HPP
