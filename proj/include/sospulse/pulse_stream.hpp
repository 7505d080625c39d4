#ifndef SOSPULSE_PULSE_STREAM_HPP
#define SOSPULSE_PULSE_STREAM_HPP

#include <stdexcept>
#include <vector>

#include "sospulse/index_set.hpp"
#include "sospulse/pulse_shape.hpp"
#include "sospulse/types.hpp"

namespace sospulse {

/// Uniform evaluation grid: t_i = t0 + i*dt, i = 0..n_points-1.
struct FineGrid {
    Real t0;
    Real dt;
    Index n_points;

    FineGrid(Real t0_, Real dt_, Index n) : t0(t0_), dt(dt_), n_points(n) {
        if (!(dt > 0.0)) throw std::invalid_argument("FineGrid: dt must be > 0");
        if (n_points < 2) throw std::invalid_argument("FineGrid: need at least 2 points");
    }

    Real at(Index i) const { return t0 + static_cast<Real>(i) * dt; }
    Real t_end() const { return at(n_points - 1); }
};

/// Parametric stream of pulses: a known shape h(t) plus L (delay, amplitude)
/// pairs, in one of three arrangements:
///  - Periodic(tau): x(t) = sum_m sum_l a_l h(t - t_l - m tau)
///  - Finite(tau):   x(t) = sum_l a_l h(t - t_l), t_l in [0, tau)
///  - Bursty(tau):   bursts of duration <= tau at known start times, each
///    holding at most L pulses, quiet phases in between.
///
/// Delays are absolute times in seconds; amplitudes may be complex.
class PulseStream {
public:
    enum class Kind { Periodic, Finite, Bursty };

    PulseStream(PulseShape shape, Kind kind, Real tau, std::vector<Real> delays,
                std::vector<Complex> amplitudes, std::vector<Real> burst_starts = {})
        : shape_(std::move(shape)),
          kind_(kind),
          tau_(tau),
          delays_(std::move(delays)),
          amplitudes_(std::move(amplitudes)),
          burst_starts_(std::move(burst_starts)) {
        if (!(tau_ > 0.0)) throw std::invalid_argument("PulseStream: tau must be > 0");
        if (delays_.empty()) throw std::invalid_argument("PulseStream: need at least one pulse");
        if (delays_.size() != amplitudes_.size())
            throw std::invalid_argument("PulseStream: delays/amplitudes size mismatch");
        for (std::size_t i = 0; i < delays_.size(); ++i)
            for (std::size_t j = i + 1; j < delays_.size(); ++j)
                if (delays_[i] == delays_[j])
                    throw std::invalid_argument("PulseStream: delays must be pairwise distinct");
        if (kind_ != Kind::Bursty) {
            for (Real t : delays_)
                if (t < 0.0 || t >= tau_)
                    throw std::invalid_argument("PulseStream: delays must lie in [0, tau)");
            if (!burst_starts_.empty())
                throw std::invalid_argument("PulseStream: burst_starts only valid for Bursty kind");
        } else {
            if (burst_starts_.empty())
                throw std::invalid_argument("PulseStream: Bursty kind needs burst_starts");
            for (std::size_t i = 1; i < burst_starts_.size(); ++i)
                if (burst_starts_[i] <= burst_starts_[i - 1])
                    throw std::invalid_argument("PulseStream: burst_starts must be increasing");
        }
    }

    static PulseStream periodic(PulseShape shape, Real tau, std::vector<Real> delays,
                                std::vector<Complex> amplitudes) {
        return PulseStream(std::move(shape), Kind::Periodic, tau, std::move(delays),
                           std::move(amplitudes));
    }
    static PulseStream finite(PulseShape shape, Real tau, std::vector<Real> delays,
                              std::vector<Complex> amplitudes) {
        return PulseStream(std::move(shape), Kind::Finite, tau, std::move(delays),
                           std::move(amplitudes));
    }
    static PulseStream bursty(PulseShape shape, Real tau, std::vector<Real> delays,
                              std::vector<Complex> amplitudes, std::vector<Real> burst_starts) {
        return PulseStream(std::move(shape), Kind::Bursty, tau, std::move(delays),
                           std::move(amplitudes), std::move(burst_starts));
    }

    const PulseShape& shape() const { return shape_; }
    Kind kind() const { return kind_; }
    Real tau() const { return tau_; }
    Index order() const { return static_cast<Index>(delays_.size()); }
    const std::vector<Real>& delays() const { return delays_; }
    const std::vector<Complex>& amplitudes() const { return amplitudes_; }
    const std::vector<Real>& burst_starts() const { return burst_starts_; }

    bool has_real_amplitudes() const {
        for (const Complex& a : amplitudes_)
            if (a.imag() != 0.0) return false;
        return true;
    }

    /// Pulses (delay relative to `start`, amplitude) whose delay lies in
    /// [start, start + tau). Used by the per-burst reduction.
    PulseStream window(Real start) const {
        std::vector<Real> d;
        std::vector<Complex> a;
        for (std::size_t l = 0; l < delays_.size(); ++l) {
            const Real rel = delays_[l] - start;
            if (rel >= 0.0 && rel < tau_) {
                d.push_back(rel);
                a.push_back(amplitudes_[l]);
            }
        }
        return finite(shape_, tau_, std::move(d), std::move(a));
    }

private:
    PulseShape shape_;
    Kind kind_;
    Real tau_;
    std::vector<Real> delays_;
    std::vector<Complex> amplitudes_;
    std::vector<Real> burst_starts_;
};

/// Evaluates the stream pointwise on a fine grid.
///
/// Periodic streams include every replica m whose pulse support
/// [m tau + t_l - R/2, m tau + t_l + R/2] intersects the grid window.
/// Dirac streams have no pointwise rendering and are rejected; downstream
/// acquisition handles them analytically.
ComplexVector evaluate_stream(const PulseStream& stream, const FineGrid& grid);

/// Pointwise value x(t) of a non-Dirac stream, replicas included for the
/// periodic kind.
Complex stream_value(const PulseStream& stream, Real t);

/// Closed-form Fourier series coefficients of a periodic stream:
///   X[k] = (1/tau) H(2 pi k / tau) sum_l a_l e^{-j 2 pi k t_l / tau},
/// for each k in `indices`, ordered k_min..k_max.
ComplexVector exact_fourier_coeffs(const PulseStream& stream, const IndexSet& indices);

}  // namespace sospulse

#endif  // SOSPULSE_PULSE_STREAM_HPP
