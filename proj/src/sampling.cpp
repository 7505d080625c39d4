#include "sospulse/sampling.hpp"

#include <cmath>
#include <stdexcept>

#include "sospulse/rng.hpp"

namespace sospulse {
namespace {

// Smooth kernel factor without the support window; only evaluated inside
// the support range, where it equals the kernel (the right edge is taken as
// the interior limit so trapezoid cells see a continuous integrand).
// Custom-window kernels carry their own tabulated, edge-smooth response.
Complex kernel_inner(const Kernel& kernel, Real t) {
    if (const auto* sos = std::get_if<SosKernel>(&kernel))
        return sos->window() == SosKernel::Window::RectSinc ? sos->exp_sum(t)
                                                            : sos->eval_time(t);
    if (const auto* ext = std::get_if<PeriodicExtensionKernel>(&kernel))
        return ext->base().exp_sum(t);
    const auto& lp = std::get<LowpassKernel>(kernel);
    return {lp.bandwidth() * sinc(lp.bandwidth() * t), 0.0};
}

bool kernel_is_real(const Kernel& kernel) {
    if (const auto* sos = std::get_if<SosKernel>(&kernel)) return sos->is_real();
    if (const auto* ext = std::get_if<PeriodicExtensionKernel>(&kernel))
        return ext->base().is_real();
    return true;  // lowpass
}

std::string kernel_kind_name(const Kernel& kernel) {
    if (std::holds_alternative<SosKernel>(kernel)) return "sos";
    if (std::holds_alternative<PeriodicExtensionKernel>(kernel)) return "periodic-extension";
    return "lowpass";
}

IndexSet kernel_index_set(const Kernel& kernel, Real tau) {
    if (const auto* sos = std::get_if<SosKernel>(&kernel)) return sos->indices();
    if (const auto* ext = std::get_if<PeriodicExtensionKernel>(&kernel))
        return ext->base().indices();
    const auto& lp = std::get<LowpassKernel>(kernel);
    const auto half = static_cast<Index>(std::floor(lp.bandwidth() * tau / 2.0 + 1e-12));
    return IndexSet::symmetric(half);
}

RealVector resolve_instants(const PulseStream& stream, const AcquisitionConfig& config,
                            Real* period_out) {
    if (!config.instants.empty()) {
        RealVector t(static_cast<Index>(config.instants.size()));
        for (Index i = 0; i < t.size(); ++i) t[i] = config.instants[static_cast<std::size_t>(i)];
        *period_out = 0.0;
        return t;
    }
    if (config.n_samples < 1) throw std::invalid_argument("acquire: need N >= 1");
    const Real T =
        config.period > 0.0 ? config.period : stream.tau() / static_cast<Real>(config.n_samples);
    RealVector t(config.n_samples);
    for (Index n = 0; n < config.n_samples; ++n)
        t[n] = config.window_start + static_cast<Real>(n) * T;
    *period_out = T;
    return t;
}

ComplexVector acquire_dirac_analytic(const PulseStream& stream, const Kernel& kernel,
                                     const RealVector& instants) {
    const Real tau       = stream.tau();
    const Real half_supp = 0.5 * kernel_support(kernel);
    const bool periodic  = stream.kind() == PulseStream::Kind::Periodic;
    const auto& delays   = stream.delays();
    const auto& amps     = stream.amplitudes();

    ComplexVector c = ComplexVector::Zero(instants.size());
    for (Index n = 0; n < instants.size(); ++n) {
        Complex acc{0.0, 0.0};
        for (std::size_t l = 0; l < delays.size(); ++l) {
            long m_lo = 0, m_hi = 0;
            if (periodic) {
                m_lo = static_cast<long>(std::ceil((instants[n] - delays[l] - half_supp) / tau)) - 1;
                m_hi = static_cast<long>(std::floor((instants[n] - delays[l] + half_supp) / tau)) + 1;
            }
            for (long m = m_lo; m <= m_hi; ++m)
                acc += amps[l] *
                       std::conj(kernel_time(kernel, delays[l] + static_cast<Real>(m) * tau -
                                                         instants[n]));
        }
        c[n] = acc;
    }
    return c;
}

ComplexVector acquire_fourier(const PulseStream& periodic_view, const Kernel& kernel,
                              const RealVector& instants) {
    const Real tau     = periodic_view.tau();
    const IndexSet set = kernel_index_set(kernel, tau);
    const ComplexVector x = exact_fourier_coeffs(periodic_view, set);

    ComplexVector s(set.size());
    for (Index i = 0; i < set.size(); ++i) s[i] = kernel_s_conj(kernel, set.at(i), tau);

    ComplexVector c = ComplexVector::Zero(instants.size());
    for (Index n = 0; n < instants.size(); ++n) {
        Complex acc{0.0, 0.0};
        for (Index i = 0; i < set.size(); ++i)
            acc += x[i] * s[i] * cis(two_pi * static_cast<Real>(set.at(i)) * instants[n] / tau);
        c[n] = acc;
    }
    return c;
}

ComplexVector acquire_quadrature(const PulseStream& stream, const AcquisitionConfig& config,
                                 const RealVector& instants, Real period) {
    if (config.grid_factor < 100)
        throw std::invalid_argument("acquire: quadrature grid must be >= 100x oversampled");
    const Real t_ref = period > 0.0 ? period : stream.tau() / static_cast<Real>(instants.size());
    const Real dt_target = t_ref / static_cast<Real>(config.grid_factor);
    if (stream.shape().kind() == PulseShape::Kind::Gaussian &&
        dt_target > stream.shape().sigma() / 20.0)
        throw std::invalid_argument("acquire: grid resolution insufficient for pulse width");

    const Real width  = kernel_support(config.kernel);
    const auto cells  = static_cast<Index>(std::ceil(width / dt_target));
    const Real dt     = width / static_cast<Real>(cells);

    ComplexVector c = ComplexVector::Zero(instants.size());
    for (Index n = 0; n < instants.size(); ++n) {
        const Real lo = instants[n] - 0.5 * width;
        Complex acc{0.0, 0.0};
        for (Index i = 0; i <= cells; ++i) {
            const Real t = lo + static_cast<Real>(i) * dt;
            const Complex f =
                std::conj(kernel_inner(config.kernel, t - instants[n])) * stream_value(stream, t);
            acc += (i == 0 || i == cells) ? 0.5 * f : f;
        }
        c[n] = acc * dt;
    }
    return c;
}

}  // namespace

SampleSet acquire(const PulseStream& stream, const AcquisitionConfig& config) {
    const Real tau = stream.tau();
    Real period    = 0.0;
    RealVector instants = resolve_instants(stream, config, &period);
    if (instants.size() < 1) throw std::invalid_argument("acquire: no sample instants");

    const bool is_dirac = stream.shape().is_dirac();
    const Real support  = stream.shape().support();

    switch (stream.kind()) {
        case PulseStream::Kind::Periodic:
            if (std::holds_alternative<PeriodicExtensionKernel>(config.kernel))
                throw std::invalid_argument(
                    "acquire: periodic streams are sampled with the base kernel, not g_r");
            break;
        case PulseStream::Kind::Finite:
        case PulseStream::Kind::Bursty: {
            const auto* ext = std::get_if<PeriodicExtensionKernel>(&config.kernel);
            if (ext == nullptr)
                throw std::invalid_argument(
                    "acquire: finite/bursty streams require a periodic-extension kernel");
            if (ext->replicas() < required_replicas(support, tau))
                throw std::invalid_argument(
                    "acquire: kernel has too few replicas for the pulse support");
            if (stream.kind() == PulseStream::Kind::Finite) {
                for (Index n = 0; n < instants.size(); ++n)
                    if (instants[n] < 0.0 || instants[n] >= tau)
                        throw std::invalid_argument(
                            "acquire: finite-stream instants must lie in [0, tau)");
            } else {
                const Real threshold = burst_spacing_threshold(ext->replicas(), tau, support);
                const auto& starts   = stream.burst_starts();
                for (std::size_t i = 1; i < starts.size(); ++i) {
                    const Real gap = starts[i] - starts[i - 1] - tau;
                    if (!(gap > threshold))
                        throw std::invalid_argument("acquire: burst-spacing violation");
                }
            }
            break;
        }
    }

    AcquisitionPath path = config.path;
    if (path == AcquisitionPath::Auto) {
        const bool bursty_pointwise = stream.kind() == PulseStream::Kind::Bursty && !is_dirac;
        path = bursty_pointwise ? AcquisitionPath::Quadrature : AcquisitionPath::Analytic;
    }

    // The truncated lowpass rendering cannot serve as an exact Dirac
    // evaluator; periodic Dirac streams under a lowpass go through the
    // Fourier path instead.
    const bool dirac_time_path =
        is_dirac && !std::holds_alternative<LowpassKernel>(config.kernel);

    ComplexVector clean;
    if (path == AcquisitionPath::Analytic) {
        if (dirac_time_path) {
            clean = acquire_dirac_analytic(stream, config.kernel, instants);
        } else if (stream.kind() == PulseStream::Kind::Periodic) {
            clean = acquire_fourier(stream, config.kernel, instants);
        } else if (stream.kind() == PulseStream::Kind::Finite) {
            // Sampling tilde-x with g_r reproduces the samples of the
            // periodized stream filtered by g.
            const PulseStream periodized = PulseStream::periodic(
                stream.shape(), tau, stream.delays(), stream.amplitudes());
            clean = acquire_fourier(periodized, config.kernel, instants);
        } else {
            throw std::invalid_argument(
                "acquire: no analytic path for bursty non-Dirac streams; use quadrature");
        }
    } else {
        if (is_dirac)
            throw std::invalid_argument("acquire: Dirac streams are sampled analytically");
        clean = acquire_quadrature(stream, config, instants, period);
    }

    SampleSet out;
    out.instants     = std::move(instants);
    out.clean_values = clean;
    out.values       = std::move(clean);
    out.real_valued  = stream.has_real_amplitudes() && kernel_is_real(config.kernel);
    out.meta.tau          = tau;
    out.meta.period       = period;
    out.meta.window_start = config.window_start;
    out.meta.n_samples    = out.instants.size();
    out.meta.path         = path == AcquisitionPath::Analytic ? "analytic" : "quadrature";
    out.meta.grid_factor  = path == AcquisitionPath::Quadrature ? config.grid_factor : 0;
    out.meta.kernel_kind  = kernel_kind_name(config.kernel);
    return out;
}

SampleSet add_noise(const SampleSet& samples, Real target_snr_db, std::uint64_t seed) {
    SampleSet out = samples;
    out.snr_db    = target_snr_db;
    out.noise_seed = seed;
    if (std::isinf(target_snr_db) && target_snr_db > 0.0) {
        out.values      = samples.clean_values;
        out.noise_sigma = 0.0;
        return out;
    }

    const Index n = samples.clean_values.size();
    const Real power = samples.clean_values.squaredNorm() / static_cast<Real>(n);
    const Real sigma = std::sqrt(power / std::pow(10.0, target_snr_db / 10.0));
    out.noise_sigma  = sigma;

    GaussianSampler normal(seed);
    out.values = samples.clean_values;
    if (samples.real_valued) {
        for (Index i = 0; i < n; ++i) out.values[i] += sigma * normal();
    } else {
        const Real per_part = sigma / std::sqrt(2.0);
        for (Index i = 0; i < n; ++i)
            out.values[i] += Complex{per_part * normal(), per_part * normal()};
    }
    return out;
}

}  // namespace sospulse
