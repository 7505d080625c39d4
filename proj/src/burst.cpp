#include "sospulse/burst.hpp"

#include <cmath>

namespace sospulse {
namespace {

BurstValidationReport validate_spacing(const std::vector<Real>& starts, Real tau, Index replicas,
                                       Real pulse_support) {
    BurstValidationReport report;
    const Real threshold = burst_spacing_threshold(replicas, tau, pulse_support);
    for (std::size_t i = 1; i < starts.size(); ++i) {
        BurstSpacingEntry entry;
        entry.first_burst = i - 1;
        entry.gap         = starts[i] - starts[i - 1] - tau;
        entry.threshold   = threshold;
        entry.margin      = entry.gap - threshold;
        entry.pass        = entry.gap > threshold;
        report.pass       = report.pass && entry.pass;
        report.entries.push_back(entry);
    }
    return report;
}

}  // namespace

BurstValidationReport validate_plan(const PulseStream& stream,
                                    const PeriodicExtensionKernel& kernel) {
    if (stream.kind() != PulseStream::Kind::Bursty)
        throw std::invalid_argument("validate_plan: stream must be bursty");
    return validate_spacing(stream.burst_starts(), stream.tau(), kernel.replicas(),
                            stream.shape().support());
}

BurstValidationReport validate_plan(const BurstPlan& plan) {
    return validate_spacing(plan.burst_starts, plan.tau, plan.replicas, plan.pulse_support);
}

std::vector<BurstRecovery> segment_and_recover(const PulseStream& stream,
                                               const PeriodicExtensionKernel& kernel,
                                               Index samples_per_burst, Index model_order,
                                               const RecoveryOptions& options) {
    if (stream.kind() != PulseStream::Kind::Bursty)
        throw std::invalid_argument("segment_and_recover: stream must be bursty");
    const auto report = validate_plan(stream, kernel);
    if (!report.pass)
        throw std::invalid_argument("segment_and_recover: burst spacing violates the "
                                    "((2r+1)tau + R)/2 separation requirement");

    const Real tau = stream.tau();
    const Real t_step = tau / static_cast<Real>(samples_per_burst);

    std::vector<BurstRecovery> out;
    for (std::size_t b = 0; b < stream.burst_starts().size(); ++b) {
        BurstRecovery entry;
        entry.burst       = b;
        entry.burst_start = stream.burst_starts()[b];
        try {
            Index in_window = 0;
            for (Real t : stream.delays()) {
                const Real rel = t - entry.burst_start;
                if (rel >= 0.0 && rel < tau) ++in_window;
            }
            if (in_window > model_order)
                throw std::invalid_argument("burst holds more than L pulses");
            AcquisitionConfig config(kernel, samples_per_burst);
            config.period       = t_step;
            config.window_start = entry.burst_start;
            // Samples are taken during the burst; the spacing guarantee makes
            // them blind to every other burst.
            const SampleSet samples = acquire(stream, config);

            RealVector local = samples.instants.array() - entry.burst_start;
            const CoefficientSystem system =
                CoefficientSystem::build(Kernel{kernel}, stream.shape(), tau, local);

            SampleSet local_samples = samples;
            local_samples.instants  = std::move(local);
            RecoveryResult result   = recover(local_samples, system, model_order, options);
            for (Real& t : result.delays) t += entry.burst_start;
            entry.result = std::move(result);
            entry.ok     = true;
        } catch (const std::exception& e) {
            entry.ok    = false;
            entry.error = e.what();
        }
        out.push_back(std::move(entry));
    }
    return out;
}

std::vector<Real> detect_bursts(const ComplexVector& values, const FineGrid& grid,
                                Real threshold_fraction, Real quiet_gap) {
    if (values.size() != grid.n_points)
        throw std::invalid_argument("detect_bursts: value count must match the grid");
    if (threshold_fraction <= 0.0 || threshold_fraction >= 1.0)
        throw std::invalid_argument("detect_bursts: fraction must be in (0, 1)");
    const Real cut = threshold_fraction * values.cwiseAbs().maxCoeff();

    std::vector<Real> starts;
    Real last_active = -std::numeric_limits<Real>::infinity();
    for (Index i = 0; i < values.size(); ++i) {
        if (std::abs(values[i]) < cut) continue;
        const Real t = grid.at(i);
        if (t - last_active > quiet_gap) starts.push_back(t);
        last_active = t;
    }
    return starts;
}

std::vector<BurstRecovery> recover_bursts(const BurstPlan& plan,
                                          const std::vector<SampleSet>& per_burst_samples,
                                          const Kernel& kernel, const PulseShape& shape,
                                          Index model_order, const RecoveryOptions& options) {
    if (per_burst_samples.size() != plan.burst_starts.size())
        throw std::invalid_argument("recover_bursts: one sample set per burst required");

    std::vector<BurstRecovery> out;
    for (std::size_t b = 0; b < per_burst_samples.size(); ++b) {
        BurstRecovery entry;
        entry.burst       = b;
        entry.burst_start = plan.burst_starts[b];
        try {
            RealVector local = per_burst_samples[b].instants.array() - entry.burst_start;
            const CoefficientSystem system =
                CoefficientSystem::build(kernel, shape, plan.tau, local);
            SampleSet local_samples = per_burst_samples[b];
            local_samples.instants  = std::move(local);
            RecoveryResult result   = recover(local_samples, system, model_order, options);
            for (Real& t : result.delays) t += entry.burst_start;
            entry.result = std::move(result);
            entry.ok     = true;
        } catch (const std::exception& e) {
            entry.ok    = false;
            entry.error = e.what();
        }
        out.push_back(std::move(entry));
    }
    return out;
}

}  // namespace sospulse
