#ifndef SOSPULSE_ULTRASOUND_HPP
#define SOSPULSE_ULTRASOUND_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sospulse/recovery.hpp"
#include "sospulse/sampling.hpp"
#include "sospulse/sos_kernel.hpp"
#include "sospulse/types.hpp"

namespace sospulse {

/// Single-element pulse-echo record at the front-end rate f_s.
struct ChannelRecord {
    RealVector samples;      // real passband signal
    Real sample_rate = 0.0;  // f_s (Hz)
    Real carrier = 0.0;      // f_c (Hz)
    Real sound_speed = 0.0;  // m/s
    Real window = 0.0;       // tau (s), the imaging time window
    Real pulse_sigma = 0.0;  // Gaussian envelope width (s)
};

/// Point scatterer: echo arrival time within the window and reflectivity
/// (peak envelope amplitude of the echo).
struct Scatterer {
    Real delay = 0.0;
    Real reflectivity = 0.0;
};

/// Synthesizes a channel record: Gaussian echoes modulated at the carrier,
/// plus AWGN calibrated to `snr_db` against the clean record
/// (SNR = (||s||^2/n) / sigma_n^2). An infinite SNR gives a clean record.
ChannelRecord synthesize_channel(const std::vector<Scatterer>& scatterers, Real sample_rate,
                                 Real carrier, Real pulse_sigma, Real window, Real sound_speed,
                                 Real snr_db, std::uint64_t seed);

struct DemodulationOptions {
    Index fir_taps = 201;        // linear-phase lowpass length (odd)
    Real cutoff_sigma_mult = 3.0;  // cutoff 3/sigma rad/s passes the Gaussian band
};

/// Quadrature demodulation to complex baseband: mix by e^{-j 2 pi f_c t},
/// lowpass at the pulse bandwidth with a group-delay-compensated FIR, and
/// rescale so an isolated echo's baseband magnitude reproduces its envelope.
ComplexVector demodulate(const ChannelRecord& record, const DemodulationOptions& options = {});

/// Envelope |baseband|.
RealVector envelope(const ComplexVector& baseband);

/// Mimics the analog scheme on the high-rate record: correlates the
/// baseband vector with g_r(t - nT) at rate f_s (an FIR spanning (2r+1)tau)
/// and keeps the N low-rate outputs on the grid T = tau/N. The decimation
/// factor f_s T is recorded in the metadata.
SampleSet low_rate_acquire(const ComplexVector& baseband, const ChannelRecord& record,
                           const PeriodicExtensionKernel& kernel, Index n_samples,
                           Index model_order_hint = 0, std::vector<std::string>* warnings = nullptr);

/// Zeroes every sample whose magnitude falls below fraction * max|values|.
SampleSet hard_threshold(const SampleSet& samples, Real fraction);

struct DepthReport {
    std::vector<Real> depths;          // meters
    std::vector<Real> reflectivities;  // echo peak amplitudes
    bool two_way = true;
};

/// Maps recovered delays to scatterer depths: depth = c t / 2 under the
/// default two-way travel convention (depth = c t with `two_way = false`).
/// Reflectivities are rescaled from the unit-area Gaussian fit.
DepthReport depth_report(const RecoveryResult& result, Real sound_speed, Real pulse_sigma,
                         bool two_way = true);

struct UltrasoundOptions {
    Index n_samples = 17;
    Index model_order = 4;        // L, strongest echoes to estimate
    Real threshold_fraction = 0.1;
    bool tls = true;
    Index cadzow_iterations = 20;
    bool two_way_depth = true;
    DemodulationOptions demodulation;
};

struct UltrasoundResult {
    SampleSet samples;          // post-threshold low-rate samples
    RecoveryResult recovery;
    DepthReport depths;
    Real rate_reduction = 0.0;  // high-rate count / N
    std::vector<std::string> warnings;
};

/// Full processing chain of a channel record: demodulate, envelope-detect,
/// filter-and-decimate with g_3p, hard-threshold, recover, report depths.
UltrasoundResult process_channel(const ChannelRecord& record, const UltrasoundOptions& options);

}  // namespace sospulse

#endif  // SOSPULSE_ULTRASOUND_HPP
