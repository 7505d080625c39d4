#include "sospulse/pulse_stream.hpp"

#include <cmath>

namespace sospulse {

ComplexVector evaluate_stream(const PulseStream& stream, const FineGrid& grid) {
    const PulseShape& h = stream.shape();
    if (h.is_dirac())
        throw std::domain_error("evaluate_stream: Dirac streams have no pointwise rendering");
    if (h.kind() == PulseShape::Kind::Gaussian && grid.dt > h.sigma())
        throw std::invalid_argument("evaluate_stream: grid too coarse for pulse width");

    const Real tau  = stream.tau();
    const Real half = 0.5 * h.support();

    ComplexVector out = ComplexVector::Zero(grid.n_points);
    const auto& delays = stream.delays();
    const auto& amps   = stream.amplitudes();

    for (std::size_t l = 0; l < delays.size(); ++l) {
        long m_lo = 0, m_hi = 0;
        if (stream.kind() == PulseStream::Kind::Periodic) {
            // Replica m contributes iff its support intersects the window.
            m_lo = static_cast<long>(std::ceil((grid.t0 - delays[l] - half) / tau));
            m_hi = static_cast<long>(std::floor((grid.t_end() - delays[l] + half) / tau));
        }
        for (long m = m_lo; m <= m_hi; ++m) {
            const Real center = delays[l] + static_cast<Real>(m) * tau;
            // Restrict to grid points within the pulse support.
            Index i_lo = static_cast<Index>(std::ceil((center - half - grid.t0) / grid.dt));
            Index i_hi = static_cast<Index>(std::floor((center + half - grid.t0) / grid.dt));
            i_lo       = std::max<Index>(i_lo, 0);
            i_hi       = std::min<Index>(i_hi, grid.n_points - 1);
            for (Index i = i_lo; i <= i_hi; ++i)
                out[i] += amps[l] * h.evaluate(grid.at(i) - center);
        }
    }
    return out;
}

Complex stream_value(const PulseStream& stream, Real t) {
    const PulseShape& h = stream.shape();
    if (h.is_dirac())
        throw std::domain_error("stream_value: Dirac streams have no pointwise rendering");

    const Real tau  = stream.tau();
    const Real half = 0.5 * h.support();
    const auto& delays = stream.delays();
    const auto& amps   = stream.amplitudes();

    Complex acc{0.0, 0.0};
    for (std::size_t l = 0; l < delays.size(); ++l) {
        if (stream.kind() == PulseStream::Kind::Periodic) {
            const long m_lo = static_cast<long>(std::ceil((t - delays[l] - half) / tau));
            const long m_hi = static_cast<long>(std::floor((t - delays[l] + half) / tau));
            for (long m = m_lo; m <= m_hi; ++m)
                acc += amps[l] * h.evaluate(t - delays[l] - static_cast<Real>(m) * tau);
        } else if (std::abs(t - delays[l]) <= half) {
            acc += amps[l] * h.evaluate(t - delays[l]);
        }
    }
    return acc;
}

ComplexVector exact_fourier_coeffs(const PulseStream& stream, const IndexSet& indices) {
    if (stream.kind() != PulseStream::Kind::Periodic)
        throw std::invalid_argument("exact_fourier_coeffs: stream must be periodic");

    const Real tau = stream.tau();
    const auto& delays = stream.delays();
    const auto& amps   = stream.amplitudes();

    ComplexVector x(indices.size());
    for (Index i = 0; i < indices.size(); ++i) {
        const Index k    = indices.at(i);
        const Real omega = two_pi * static_cast<Real>(k) / tau;
        Complex phase_sum{0.0, 0.0};
        for (std::size_t l = 0; l < delays.size(); ++l)
            phase_sum += amps[l] * cis(-omega * delays[l]);
        x[i] = stream.shape().ctft(omega) * phase_sum / tau;
    }
    return x;
}

}  // namespace sospulse
