#include "sospulse/ultrasound.hpp"

#include <cmath>
#include <stdexcept>

#include "sospulse/pulse_shape.hpp"
#include "sospulse/rng.hpp"

namespace sospulse {

ChannelRecord synthesize_channel(const std::vector<Scatterer>& scatterers, Real sample_rate,
                                 Real carrier, Real pulse_sigma, Real window, Real sound_speed,
                                 Real snr_db, std::uint64_t seed) {
    if (!(sample_rate > 2.0 * carrier))
        throw std::invalid_argument("synthesize_channel: need f_s > 2 f_c");
    if (!(pulse_sigma > 0.0) || !(window > 0.0))
        throw std::invalid_argument("synthesize_channel: sigma and window must be > 0");
    for (const auto& s : scatterers)
        if (s.delay < 0.0 || s.delay >= window)
            throw std::invalid_argument("synthesize_channel: scatterer delay outside the window");

    const auto n = static_cast<Index>(std::llround(window * sample_rate));
    ChannelRecord record;
    record.samples     = RealVector::Zero(n);
    record.sample_rate = sample_rate;
    record.carrier     = carrier;
    record.sound_speed = sound_speed;
    record.window      = window;
    record.pulse_sigma = pulse_sigma;

    for (Index i = 0; i < n; ++i) {
        const Real t = static_cast<Real>(i) / sample_rate;
        Real v = 0.0;
        for (const auto& s : scatterers) {
            const Real u = (t - s.delay) / pulse_sigma;
            if (std::abs(u) > 40.0) continue;
            v += s.reflectivity * std::exp(-0.5 * u * u) * std::cos(two_pi * carrier * (t - s.delay));
        }
        record.samples[i] = v;
    }

    if (!(std::isinf(snr_db) && snr_db > 0.0)) {
        const Real power = record.samples.squaredNorm() / static_cast<Real>(n);
        // A record with no echoes has no SNR reference; it becomes pure
        // unit-variance noise.
        const Real sigma_n =
            power > 0.0 ? std::sqrt(power / std::pow(10.0, snr_db / 10.0)) : 1.0;
        GaussianSampler normal(seed);
        for (Index i = 0; i < n; ++i) record.samples[i] += sigma_n * normal();
    }
    return record;
}

ComplexVector demodulate(const ChannelRecord& record, const DemodulationOptions& options) {
    if (!(record.sample_rate > 2.0 * record.carrier))
        throw std::invalid_argument("demodulate: need f_s > 2 f_c");
    const Index n = record.samples.size();
    if (n == 0) throw std::invalid_argument("demodulate: empty record");

    Index taps = options.fir_taps;
    if (taps % 2 == 0) ++taps;

    // Quadrature mix to baseband.
    ComplexVector mixed(n);
    for (Index i = 0; i < n; ++i) {
        const Real t = static_cast<Real>(i) / record.sample_rate;
        mixed[i] = record.samples[i] * cis(-two_pi * record.carrier * t);
    }

    // Windowed-sinc lowpass at the pulse bandwidth; cutoff in cycles per
    // sample. Gain 2 restores the envelope halved by the mixer.
    const Real cutoff = options.cutoff_sigma_mult / record.pulse_sigma / two_pi / record.sample_rate;
    if (!(cutoff < 0.5))
        throw std::invalid_argument("demodulate: pulse bandwidth exceeds Nyquist");
    RealVector fir(taps);
    const Index half = (taps - 1) / 2;
    Real gain_dc = 0.0;
    for (Index i = 0; i < taps; ++i) {
        const Real m = static_cast<Real>(i - half);
        const Real w = 0.54 - 0.46 * std::cos(two_pi * static_cast<Real>(i) /
                                              static_cast<Real>(taps - 1));
        fir[i] = 2.0 * cutoff * sinc(2.0 * cutoff * m) * w;
        gain_dc += fir[i];
    }
    fir *= 2.0 / gain_dc;  // unit DC gain, times the mixer compensation

    // Linear-phase filtering with the group delay removed.
    ComplexVector baseband = ComplexVector::Zero(n);
    for (Index i = 0; i < n; ++i) {
        Complex acc{0.0, 0.0};
        const Index j_lo = std::max<Index>(0, i + half - (n - 1));
        const Index j_hi = std::min<Index>(taps - 1, i + half);
        for (Index j = j_lo; j <= j_hi; ++j) acc += fir[j] * mixed[i + half - j];
        baseband[i] = acc;
    }
    return baseband;
}

RealVector envelope(const ComplexVector& baseband) { return baseband.cwiseAbs(); }

SampleSet low_rate_acquire(const ComplexVector& baseband, const ChannelRecord& record,
                           const PeriodicExtensionKernel& kernel, Index n_samples,
                           Index model_order_hint, std::vector<std::string>* warnings) {
    if (n_samples < 1) throw std::invalid_argument("low_rate_acquire: need N >= 1");
    const Index n_hr = baseband.size();
    const Real f_s   = record.sample_rate;
    const Real tau   = record.window;
    const Real t_step = tau / static_cast<Real>(n_samples);
    if (model_order_hint > 0 && n_samples < 2 * model_order_hint && warnings != nullptr)
        warnings->push_back("low_rate_acquire: fewer than 2L samples");

    if (n_samples == n_hr) {
        // Full-rate request: identity decimation, the baseband itself.
        SampleSet out;
        out.instants = RealVector(n_hr);
        for (Index i = 0; i < n_hr; ++i) out.instants[i] = static_cast<Real>(i) / f_s;
        out.clean_values = baseband;
        out.values       = baseband;
        out.meta.tau         = tau;
        out.meta.period      = 1.0 / f_s;
        out.meta.n_samples   = n_hr;
        out.meta.path        = "identity";
        out.meta.grid_factor = 1;
        out.meta.kernel_kind = "none";
        return out;
    }

    // FIR at the front-end rate spanning the (2r+1)tau kernel support.
    const Real half_supp = 0.5 * kernel.support();
    SampleSet out;
    out.instants     = RealVector(n_samples);
    out.clean_values = ComplexVector::Zero(n_samples);
    for (Index n = 0; n < n_samples; ++n) {
        const Real t_n = static_cast<Real>(n) * t_step;
        out.instants[n] = t_n;
        const Index i_lo = std::max<Index>(0, static_cast<Index>(std::ceil((t_n - half_supp) * f_s)));
        const Index i_hi = std::min<Index>(n_hr - 1,
                                           static_cast<Index>(std::floor((t_n + half_supp) * f_s)));
        Complex acc{0.0, 0.0};
        for (Index i = i_lo; i <= i_hi; ++i) {
            const Real t = static_cast<Real>(i) / f_s;
            acc += baseband[i] * std::conj(kernel.eval_time(t - t_n));
        }
        out.clean_values[n] = acc / f_s;
    }
    out.values      = out.clean_values;
    out.real_valued = kernel.base().is_real();
    out.meta.tau          = tau;
    out.meta.period       = t_step;
    out.meta.n_samples    = n_samples;
    out.meta.path         = "fir-decimation";
    out.meta.grid_factor  = static_cast<Index>(std::llround(f_s * t_step));
    out.meta.kernel_kind  = "periodic-extension";
    return out;
}

SampleSet hard_threshold(const SampleSet& samples, Real fraction) {
    if (fraction < 0.0 || fraction >= 1.0)
        throw std::invalid_argument("hard_threshold: fraction must be in [0, 1)");
    SampleSet out = samples;
    if (fraction == 0.0 || out.values.size() == 0) return out;
    const Real cut = fraction * out.values.cwiseAbs().maxCoeff();
    for (Index i = 0; i < out.values.size(); ++i)
        if (std::abs(out.values[i]) < cut) out.values[i] = Complex{0.0, 0.0};
    return out;
}

DepthReport depth_report(const RecoveryResult& result, Real sound_speed, Real pulse_sigma,
                         bool two_way) {
    DepthReport report;
    report.two_way = two_way;
    const Real travel = two_way ? 0.5 : 1.0;
    const Real area   = std::sqrt(two_pi * pulse_sigma * pulse_sigma);
    for (std::size_t l = 0; l < result.delays.size(); ++l) {
        report.depths.push_back(sound_speed * result.delays[l] * travel);
        // Amplitudes were fitted against the unit-area Gaussian; undo the
        // area normalization to report peak reflectivity.
        report.reflectivities.push_back(std::abs(result.amplitudes[l]) / area);
    }
    return report;
}

UltrasoundResult process_channel(const ChannelRecord& record, const UltrasoundOptions& options) {
    UltrasoundResult out;

    const ComplexVector baseband = demodulate(record, options.demodulation);
    const RealVector env = envelope(baseband);

    const PulseShape shape = PulseShape::gaussian(record.pulse_sigma);
    const IndexSet indices = IndexSet::symmetric(options.model_order);
    const SosKernel base   = SosKernel::dirichlet(record.window, indices);
    const PeriodicExtensionKernel kernel = make_periodic_extension(base, shape.support());

    SampleSet samples = low_rate_acquire(env.cast<Complex>(), record, kernel, options.n_samples,
                                         options.model_order, &out.warnings);
    if (options.threshold_fraction > 0.0) {
        samples = hard_threshold(samples, options.threshold_fraction);
        // A sample zeroed by the threshold is an erasure, not a measurement
        // of zero; drop those rows when enough survive to keep the system
        // overdetermined.
        std::vector<Index> keep;
        for (Index i = 0; i < samples.values.size(); ++i)
            if (samples.values[i] != Complex{0.0, 0.0}) keep.push_back(i);
        if (static_cast<Index>(keep.size()) >= 2 * options.model_order + 1) {
            SampleSet pruned = samples;
            pruned.instants     = RealVector(static_cast<Index>(keep.size()));
            pruned.values       = ComplexVector(static_cast<Index>(keep.size()));
            pruned.clean_values = ComplexVector(static_cast<Index>(keep.size()));
            for (std::size_t i = 0; i < keep.size(); ++i) {
                pruned.instants[static_cast<Index>(i)]     = samples.instants[keep[i]];
                pruned.values[static_cast<Index>(i)]       = samples.values[keep[i]];
                pruned.clean_values[static_cast<Index>(i)] = samples.clean_values[keep[i]];
            }
            pruned.meta.n_samples = pruned.instants.size();
            samples = std::move(pruned);
        } else {
            out.warnings.push_back("threshold left fewer than M samples; zeros kept as rows");
        }
    }

    const CoefficientSystem system =
        CoefficientSystem::build(Kernel{kernel}, shape, record.window, samples.instants);

    RecoveryOptions rec;
    rec.tls               = options.tls;
    rec.cadzow_iterations = options.cadzow_iterations;
    out.recovery          = recover(samples, system, options.model_order, rec);
    out.depths = depth_report(out.recovery, record.sound_speed, record.pulse_sigma,
                              options.two_way_depth);
    out.samples        = std::move(samples);
    out.rate_reduction = static_cast<Real>(record.samples.size()) /
                         static_cast<Real>(options.n_samples);
    return out;
}

}  // namespace sospulse
