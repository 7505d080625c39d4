#ifndef SOSPULSE_SOS_KERNEL_HPP
#define SOSPULSE_SOS_KERNEL_HPP

#include <functional>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "sospulse/index_set.hpp"
#include "sospulse/types.hpp"

namespace sospulse {

/// Sum-of-Sincs sampling kernel.
///
/// Frequency domain:
///   G(omega) = (tau / sqrt(2 pi)) sum_{k in K} b_k phi(omega tau / (2 pi) - k)
/// with phi = sinc for the rect-sinc window, giving the time-domain form
///   g(t) = rect(t / tau) sum_{k in K} b_k e^{j 2 pi k t / tau},
/// compactly supported on [-tau/2, tau/2). At every integer grid frequency
/// 2 pi k' / tau the response is (tau/sqrt(2 pi)) b_{k'} for k' in K and 0
/// otherwise, so the kernel passes exactly the Fourier coefficients indexed
/// by K.
///
/// A custom window phi (tabulated, with phi(0) = 1 and phi(n) = 0 at nonzero
/// integers) may replace the sinc; such kernels evaluate in the frequency
/// domain only, unless a tabulated impulse response is attached.
class SosKernel {
public:
    enum class Window { RectSinc, Custom };

    /// Tabulated window phi on a uniform grid of dimensionless frequency
    /// centered at 0, spacing in units of (2 pi / tau).
    struct TabulatedWindow {
        std::vector<Real> samples;
        Real spacing;
    };

    /// Tabulated impulse response on a uniform time grid centered at 0.
    struct TabulatedImpulse {
        std::vector<Complex> samples;
        Real spacing;
    };

    SosKernel(Real tau, IndexSet indices, ComplexVector coefficients);

    /// Kernel with a custom tabulated window replacing the sinc.
    static SosKernel with_custom_window(Real tau, IndexSet indices, ComplexVector coefficients,
                                        TabulatedWindow window);

    /// Copy of a custom-window kernel carrying a tabulated inverse
    /// transform, enabling time-domain evaluation.
    SosKernel with_impulse_response(TabulatedImpulse impulse) const;

    /// All coefficients set to one: the Dirichlet-kernel instance.
    static SosKernel dirichlet(Real tau, IndexSet indices);

    /// Symmetric Hamming-window coefficients over K.
    static SosKernel hamming(Real tau, IndexSet indices);

    Real tau() const { return tau_; }
    const IndexSet& indices() const { return indices_; }
    const ComplexVector& coefficients() const { return b_; }
    Complex coefficient(Index k) const { return b_[indices_.position(k)]; }
    Window window() const { return window_; }

    /// True iff K is symmetric and b_k = conj(b_{-k}); the time-domain
    /// kernel is then real valued.
    bool is_real() const;

    /// Time support: exactly tau for the rect-sinc window, the table extent
    /// when a tabulated impulse response is attached.
    Real support() const {
        if (impulse_)
            return static_cast<Real>(impulse_->samples.size() - 1) * impulse_->spacing;
        return tau_;
    }

    /// The smooth factor sum_k b_k e^{j 2 pi k t / tau}, without the window.
    Complex exp_sum(Real t) const;

    /// g(t); zero outside [-tau/2, tau/2) (half-open convention).
    Complex eval_time(Real t) const;

    /// G(omega).
    Complex eval_freq(Real omega) const;

    /// In-support test with the half-open convention.
    bool in_support(Real t) const { return t >= -0.5 * tau_ && t < 0.5 * tau_; }

    /// Rescaled copy with Tr(B* B) = sum_k |b_k|^2 = 1.
    SosKernel trace_normalized() const;

private:
    Real tau_;
    IndexSet indices_;
    ComplexVector b_;
    Window window_ = Window::RectSinc;
    std::optional<TabulatedWindow> phi_;
    std::optional<TabulatedImpulse> impulse_;

    Real phi_value(Real u) const;
};

/// (2r+1)-period extension g_r(t) = sum_{m=-r}^{r} g(t + m tau).
///
/// Because the exponential sum is tau-periodic and the shifted rect windows
/// tile, g_r equals the base exponential sum windowed to
/// [-(2r+1) tau / 2, (2r+1) tau / 2).
class PeriodicExtensionKernel {
public:
    PeriodicExtensionKernel(SosKernel base, Index r) : base_(std::move(base)), r_(r) {
        if (r < 0) throw std::invalid_argument("PeriodicExtensionKernel: r must be >= 0");
        if (base_.window() != SosKernel::Window::RectSinc)
            throw std::invalid_argument(
                "PeriodicExtensionKernel: the replica tiling needs the rect-sinc window");
    }

    const SosKernel& base() const { return base_; }
    Index replicas() const { return r_; }
    Real tau() const { return base_.tau(); }
    Real support() const { return static_cast<Real>(2 * r_ + 1) * base_.tau(); }

    bool in_support(Real t) const { return t >= -0.5 * support() && t < 0.5 * support(); }

    Complex eval_time(Real t) const {
        return in_support(t) ? base_.exp_sum(t) : Complex{0.0, 0.0};
    }

private:
    SosKernel base_;
    Index r_;
};

/// Ideal lowpass kernel s(t) = B sinc(B t), the classical special case;
/// eval_freq reports the normalized response (1/sqrt(2 pi)) rect(omega /
/// (2 pi B)). Infinite time support; time evaluation is truncated at a
/// configurable half-width when rendered on a grid.
class LowpassKernel {
public:
    LowpassKernel(Real bandwidth, Real truncation_half_width)
        : bandwidth_(bandwidth), half_width_(truncation_half_width) {
        if (!(bandwidth > 0.0)) throw std::invalid_argument("LowpassKernel: bandwidth must be > 0");
        if (!(half_width_ > 0.0))
            throw std::invalid_argument("LowpassKernel: truncation half-width must be > 0");
    }

    Real bandwidth() const { return bandwidth_; }
    Real support() const { return 2.0 * half_width_; }
    bool in_support(Real t) const { return std::abs(t) <= half_width_; }

    Complex eval_freq(Real omega) const {
        const Real edge = pi * bandwidth_;
        return std::abs(omega) <= edge ? Complex{1.0 / std::sqrt(two_pi), 0.0} : Complex{0.0, 0.0};
    }

    Complex eval_time(Real t) const {
        if (!in_support(t)) return {0.0, 0.0};
        return {bandwidth_ * sinc(bandwidth_ * t), 0.0};
    }

private:
    Real bandwidth_;
    Real half_width_;
};

using Kernel = std::variant<SosKernel, PeriodicExtensionKernel, LowpassKernel>;

/// Replica count for a pulse support R:  r = ceil((R/tau + 3)/2) - 1,
/// the smallest r for which every periodic-case term |nT - t_l - m tau| <
/// (R + tau)/2 with nT, t_l in [0, tau) has |m| <= r.
Index required_replicas(Real pulse_support, Real tau);

/// g_r built from `kernel` with r chosen for pulse support R.
PeriodicExtensionKernel make_periodic_extension(const SosKernel& kernel, Real pulse_support);

/// Per-index outcome of the sampling-condition check.
struct ConditionEntry {
    Index k;
    Real magnitude;
    enum class Status { Zero, NonZero, Inconclusive } status;
    bool ok;  // matches what membership in K requires
};

struct ConditionReport {
    bool pass = true;
    Real epsilon_zero = 0.0;
    Real epsilon_nonzero = 0.0;
    std::vector<ConditionEntry> entries;
};

/// Checks the sampling condition on S(omega): zero at 2 pi k / tau for
/// k outside K, nonzero for k in K, over integer k in
/// [probe_min, probe_max]. Magnitudes between the two thresholds are
/// reported as inconclusive, never silently passed.
ConditionReport verify_condition(const std::function<Complex(Real)>& freq_response,
                                 const IndexSet& indices, Real tau, Index probe_min,
                                 Index probe_max, Real epsilon_zero_rel = 1e-9,
                                 Real epsilon_nonzero_rel = 1e-6);

/// Kernel support in seconds.
Real kernel_support(const Kernel& kernel);

/// Time-domain value of any kernel variant.
Complex kernel_time(const Kernel& kernel, Real t);

/// Effective S*(2 pi k / tau) used when solving for the Fourier
/// coefficients. For a periodic extension this is the base kernel's value:
/// sampling a finite stream with g_r reproduces the samples of the
/// periodized stream filtered by g.
Complex kernel_s_conj(const Kernel& kernel, Index k, Real tau);

}  // namespace sospulse

#endif  // SOSPULSE_SOS_KERNEL_HPP
