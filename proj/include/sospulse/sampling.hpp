#ifndef SOSPULSE_SAMPLING_HPP
#define SOSPULSE_SAMPLING_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sospulse/pulse_stream.hpp"
#include "sospulse/sos_kernel.hpp"
#include "sospulse/types.hpp"

namespace sospulse {

/// How the filter-and-sample chain is evaluated.
///  - Analytic: closed forms. Dirac streams sample the kernel directly
///    (c[n] = sum_l a_l g*(t_l - t_n)); periodic streams use the finite
///    Fourier sum c[n] = sum_{k in K} X[k] e^{j 2 pi k t_n / tau} S*(2 pi
///    k/tau); finite streams with a periodic-extension kernel reduce to the
///    periodized stream sampled by the base kernel.
///  - Quadrature: trapezoidal integration of <s(t - t_n), x(t)> on a fine
///    grid aligned with the kernel support, `grid_factor` points per
///    sampling period.
///  - Auto: analytic where a closed form exists, quadrature otherwise
///    (bursty non-Dirac streams, tabulated shapes under a lowpass kernel).
enum class AcquisitionPath { Auto, Analytic, Quadrature };

struct AcquisitionConfig {
    explicit AcquisitionConfig(Kernel k, Index n = 0) : kernel(std::move(k)), n_samples(n) {}

    Kernel kernel;
    Index n_samples = 0;
    Real period = 0.0;        // T; <= 0 selects tau / N
    Real window_start = 0.0;  // first uniform instant
    std::vector<Real> instants;  // explicit nonuniform instants (overrides uniform grid)
    AcquisitionPath path = AcquisitionPath::Auto;
    Index grid_factor = 1000;  // quadrature oversampling relative to T
};

struct AcquisitionMeta {
    Real tau = 0.0;
    Real period = 0.0;
    Real window_start = 0.0;
    Index n_samples = 0;
    std::string path;     // "analytic" | "quadrature"
    Index grid_factor = 0;
    std::string kernel_kind;  // "sos" | "periodic-extension" | "lowpass"
};

/// Acquired samples plus their pre-noise values and noise bookkeeping.
struct SampleSet {
    RealVector instants;
    ComplexVector values;
    ComplexVector clean_values;
    Real noise_sigma = 0.0;
    std::optional<Real> snr_db;
    std::uint64_t noise_seed = 0;
    bool real_valued = false;  // real stream through a real kernel
    AcquisitionMeta meta;
};

/// Minimal quiet gap between adjacent bursts for samples taken during one
/// burst to be influenced by that burst only: ((2r+1) tau + R) / 2.
inline Real burst_spacing_threshold(Index r, Real tau, Real pulse_support) {
    return 0.5 * (static_cast<Real>(2 * r + 1) * tau + pulse_support);
}

/// Filters the stream with the sampling kernel (as s*(-t)) and samples at
/// the configured instants: c[n] = <s(t - t_n), x(t)>.
///
/// Preconditions by stream kind: periodic streams take the base SoS or
/// lowpass kernel; finite streams require a periodic-extension kernel with
/// enough replicas for the pulse support; bursty streams additionally
/// require compliant spacing per `burst_spacing_threshold`.
SampleSet acquire(const PulseStream& stream, const AcquisitionConfig& config);

/// Adds seeded white Gaussian noise calibrated so that
/// SNR = (||c||^2 / N) / sigma_n^2 matches `target_snr_db` (real noise for
/// real sample vectors, circularly symmetric complex noise otherwise).
/// An infinite target leaves the samples untouched.
SampleSet add_noise(const SampleSet& samples, Real target_snr_db, std::uint64_t seed);

}  // namespace sospulse

#endif  // SOSPULSE_SAMPLING_HPP
