#include "sospulse/sos_kernel.hpp"

#include <cmath>

namespace sospulse {

SosKernel::SosKernel(Real tau, IndexSet indices, ComplexVector coefficients)
    : tau_(tau), indices_(indices), b_(std::move(coefficients)) {
    if (!(tau_ > 0.0)) throw std::invalid_argument("SosKernel: tau must be > 0");
    if (b_.size() != indices_.size())
        throw std::invalid_argument("SosKernel: coefficient count must match |K|");
    for (Index i = 0; i < b_.size(); ++i)
        if (b_[i] == Complex{0.0, 0.0})
            throw std::invalid_argument("SosKernel: coefficients must be nonzero on K");
}

SosKernel SosKernel::with_custom_window(Real tau, IndexSet indices, ComplexVector coefficients,
                                        TabulatedWindow window) {
    if (!(window.spacing > 0.0))
        throw std::invalid_argument("SosKernel: window spacing must be > 0");
    if (window.samples.size() < 3)
        throw std::invalid_argument("SosKernel: window table too short");

    SosKernel k(tau, indices, std::move(coefficients));
    k.window_ = Window::Custom;
    k.phi_    = std::move(window);

    // The window must interpolate phi(0) = 1 and phi(n) = 0 at the nonzero
    // integers it covers.
    const Real half = 0.5 * static_cast<Real>(k.phi_->samples.size() - 1) * k.phi_->spacing;
    for (Index n = static_cast<Index>(-std::floor(half)); n <= static_cast<Index>(std::floor(half));
         ++n) {
        const Real want = (n == 0) ? 1.0 : 0.0;
        if (std::abs(k.phi_value(static_cast<Real>(n)) - want) > 1e-9)
            throw std::invalid_argument("SosKernel: custom window violates phi(0)=1, phi(n)=0");
    }
    return k;
}

SosKernel SosKernel::dirichlet(Real tau, IndexSet indices) {
    return SosKernel(tau, indices, ComplexVector::Ones(indices.size()));
}

SosKernel SosKernel::hamming(Real tau, IndexSet indices) {
    const Index m = indices.size();
    if (m < 2) throw std::invalid_argument("SosKernel: Hamming window needs |K| >= 2");
    ComplexVector b(m);
    const Index half = m / 2;
    for (Index i = 0; i < m; ++i) {
        const Index k = indices.at(i);
        // Symmetric length-M Hamming window, centered on the set.
        b[i] = 0.54 - 0.46 * std::cos(two_pi * static_cast<Real>(k + half) / static_cast<Real>(m - 1));
    }
    return SosKernel(tau, indices, std::move(b));
}

bool SosKernel::is_real() const {
    if (!indices_.is_symmetric()) return false;
    for (Index i = 0; i < b_.size(); ++i) {
        const Index k = indices_.at(i);
        if (std::abs(b_[i] - std::conj(b_[indices_.position(-k)])) > 1e-14 * b_.norm())
            return false;
    }
    return true;
}

Complex SosKernel::exp_sum(Real t) const {
    Complex acc{0.0, 0.0};
    const Real base = two_pi * t / tau_;
    for (Index i = 0; i < b_.size(); ++i)
        acc += b_[i] * cis(base * static_cast<Real>(indices_.at(i)));
    return acc;
}

SosKernel SosKernel::with_impulse_response(TabulatedImpulse impulse) const {
    if (window_ != Window::Custom)
        throw std::invalid_argument(
            "SosKernel: rect-sinc kernels already evaluate in closed form");
    if (!(impulse.spacing > 0.0) || impulse.samples.size() < 2)
        throw std::invalid_argument("SosKernel: invalid impulse-response table");
    SosKernel out = *this;
    out.impulse_  = std::move(impulse);
    return out;
}

Complex SosKernel::eval_time(Real t) const {
    if (window_ == Window::Custom) {
        if (!impulse_)
            throw std::domain_error(
                "SosKernel: custom-window kernels evaluate in the frequency domain only, "
                "unless a tabulated impulse response is attached");
        const auto& tab = *impulse_;
        const Real half = 0.5 * static_cast<Real>(tab.samples.size() - 1) * tab.spacing;
        if (std::abs(t) >= half) return {0.0, 0.0};
        const Real pos = (t + half) / tab.spacing;
        const auto i0  = static_cast<std::size_t>(pos);
        if (i0 + 1 >= tab.samples.size()) return tab.samples.back();
        const Real frac = pos - static_cast<Real>(i0);
        return tab.samples[i0] * (1.0 - frac) + tab.samples[i0 + 1] * frac;
    }
    return in_support(t) ? exp_sum(t) : Complex{0.0, 0.0};
}

Real SosKernel::phi_value(Real u) const {
    if (window_ == Window::RectSinc) return sinc(u);
    const auto& tab = *phi_;
    const Real half = 0.5 * static_cast<Real>(tab.samples.size() - 1) * tab.spacing;
    if (std::abs(u) >= half) return 0.0;
    const Real pos = (u + half) / tab.spacing;
    const auto i0  = static_cast<std::size_t>(pos);
    if (i0 + 1 >= tab.samples.size()) return tab.samples.back();
    const Real frac = pos - static_cast<Real>(i0);
    return tab.samples[i0] * (1.0 - frac) + tab.samples[i0 + 1] * frac;
}

Complex SosKernel::eval_freq(Real omega) const {
    const Real u = omega * tau_ / two_pi;
    Complex acc{0.0, 0.0};
    for (Index i = 0; i < b_.size(); ++i)
        acc += b_[i] * phi_value(u - static_cast<Real>(indices_.at(i)));
    return acc * (tau_ / std::sqrt(two_pi));
}

SosKernel SosKernel::trace_normalized() const {
    SosKernel out = *this;
    out.b_ /= b_.norm();
    return out;
}

Index required_replicas(Real pulse_support, Real tau) {
    if (pulse_support < 0.0) throw std::invalid_argument("required_replicas: R must be >= 0");
    if (!(tau > 0.0)) throw std::invalid_argument("required_replicas: tau must be > 0");
    return static_cast<Index>(std::ceil((pulse_support / tau + 3.0) / 2.0)) - 1;
}

PeriodicExtensionKernel make_periodic_extension(const SosKernel& kernel, Real pulse_support) {
    return PeriodicExtensionKernel(kernel, required_replicas(pulse_support, kernel.tau()));
}

ConditionReport verify_condition(const std::function<Complex(Real)>& freq_response,
                                 const IndexSet& indices, Real tau, Index probe_min,
                                 Index probe_max, Real epsilon_zero_rel,
                                 Real epsilon_nonzero_rel) {
    if (probe_min > indices.k_min() || probe_max < indices.k_max())
        throw std::invalid_argument("verify_condition: probe range must cover K");

    Real max_in_set = 0.0;
    for (Index k = indices.k_min(); k <= indices.k_max(); ++k)
        max_in_set = std::max(max_in_set,
                              std::abs(freq_response(two_pi * static_cast<Real>(k) / tau)));

    ConditionReport report;
    report.epsilon_zero    = epsilon_zero_rel * max_in_set;
    report.epsilon_nonzero = epsilon_nonzero_rel * max_in_set;

    for (Index k = probe_min; k <= probe_max; ++k) {
        const Real mag = std::abs(freq_response(two_pi * static_cast<Real>(k) / tau));
        ConditionEntry entry{k, mag, ConditionEntry::Status::Inconclusive, false};
        if (mag < report.epsilon_zero)
            entry.status = ConditionEntry::Status::Zero;
        else if (mag > report.epsilon_nonzero)
            entry.status = ConditionEntry::Status::NonZero;
        entry.ok = indices.contains(k) ? entry.status == ConditionEntry::Status::NonZero
                                       : entry.status == ConditionEntry::Status::Zero;
        report.pass = report.pass && entry.ok;
        report.entries.push_back(entry);
    }
    return report;
}

Real kernel_support(const Kernel& kernel) {
    return std::visit([](const auto& k) { return k.support(); }, kernel);
}

Complex kernel_time(const Kernel& kernel, Real t) {
    return std::visit([t](const auto& k) { return k.eval_time(t); }, kernel);
}

Complex kernel_s_conj(const Kernel& kernel, Index k, Real tau) {
    // The sampling chain uses the plain CTFT S(omega) = int s(t) e^{-j w t} dt,
    // i.e. sqrt(2 pi) times the normalized response reported by eval_freq;
    // at the grid frequencies this is tau b_k for an SoS kernel and 1 in the
    // passband of the ideal lowpass.
    const Real scale = std::sqrt(two_pi);
    if (const auto* sos = std::get_if<SosKernel>(&kernel)) {
        if (std::abs(sos->tau() - tau) > 1e-12 * tau)
            throw std::invalid_argument("kernel_s_conj: kernel period does not match stream");
        return scale * std::conj(sos->eval_freq(two_pi * static_cast<Real>(k) / tau));
    }
    if (const auto* ext = std::get_if<PeriodicExtensionKernel>(&kernel))
        return kernel_s_conj(Kernel{ext->base()}, k, tau);
    const auto& lp = std::get<LowpassKernel>(kernel);
    return scale * std::conj(lp.eval_freq(two_pi * static_cast<Real>(k) / tau));
}

}  // namespace sospulse
