#ifndef SOSPULSE_BURST_HPP
#define SOSPULSE_BURST_HPP

#include <optional>
#include <string>
#include <vector>

#include "sospulse/pulse_stream.hpp"
#include "sospulse/recovery.hpp"
#include "sospulse/sampling.hpp"
#include "sospulse/sos_kernel.hpp"
#include "sospulse/types.hpp"

namespace sospulse {

/// Acquisition plan for an infinite bursty stream: known burst start times,
/// the per-burst window tau, the kernel extension r, and the pulse support
/// R that together determine the admissible spacing.
struct BurstPlan {
    std::vector<Real> burst_starts;
    Real tau = 0.0;
    Index replicas = 1;       // r of the g_r sampling kernel
    Real pulse_support = 0.0; // R
    Index samples_per_burst = 0;
};

/// Spacing compliance of one adjacent burst pair.
struct BurstSpacingEntry {
    std::size_t first_burst = 0;
    Real gap = 0.0;        // quiet time between end of one burst and start of next
    Real threshold = 0.0;  // ((2r+1) tau + R) / 2
    Real margin = 0.0;     // gap - threshold
    bool pass = false;
};

struct BurstValidationReport {
    bool pass = true;
    std::vector<BurstSpacingEntry> entries;
};

/// Checks that every adjacent pair of bursts is separated by more than
/// ((2r+1) tau + R)/2 of quiet time, so that samples taken during a burst
/// are influenced by that burst only. Report-only; never throws on failure.
BurstValidationReport validate_plan(const PulseStream& stream,
                                    const PeriodicExtensionKernel& kernel);

BurstValidationReport validate_plan(const BurstPlan& plan);

/// Per-burst recovery outcome; failures are isolated per burst.
struct BurstRecovery {
    std::size_t burst = 0;
    Real burst_start = 0.0;
    bool ok = false;
    std::string error;  // set when ok == false
    std::optional<RecoveryResult> result;  // delays reported in absolute time
};

/// Samples each burst window [start, start + tau) with N uniform instants
/// and runs the finite-stream recovery locally; recovered delays are mapped
/// back to absolute time (burst start + local delay). A failure in one
/// burst does not abort the others.
std::vector<BurstRecovery> segment_and_recover(const PulseStream& stream,
                                               const PeriodicExtensionKernel& kernel,
                                               Index samples_per_burst, Index model_order,
                                               const RecoveryOptions& options = {});

/// Recovery from externally supplied per-burst sample sets (instants in
/// absolute time), matching the plan's burst windows.
std::vector<BurstRecovery> recover_bursts(const BurstPlan& plan,
                                          const std::vector<SampleSet>& per_burst_samples,
                                          const Kernel& kernel, const PulseShape& shape,
                                          Index model_order, const RecoveryOptions& options = {});

/// Convenience energy-threshold detector for burst start times on a
/// rendered signal: contiguous activity above fraction * max, clustered by
/// quiet gaps longer than `quiet_gap`. Burst locations are normally inputs;
/// this helper is not part of the guaranteed-recovery path.
std::vector<Real> detect_bursts(const ComplexVector& values, const FineGrid& grid,
                                Real threshold_fraction, Real quiet_gap);

}  // namespace sospulse

#endif  // SOSPULSE_BURST_HPP
