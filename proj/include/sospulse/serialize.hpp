#ifndef SOSPULSE_SERIALIZE_HPP
#define SOSPULSE_SERIALIZE_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "sospulse/burst.hpp"
#include "sospulse/pulse_stream.hpp"
#include "sospulse/recovery.hpp"
#include "sospulse/sampling.hpp"
#include "sospulse/sos_kernel.hpp"

namespace sospulse {

/// Stream document: {shape, tau, kind, delays[], amplitudes[], burst_starts[]?}.
/// Amplitudes serialize as numbers when real, as {re, im} objects otherwise.
nlohmann::json stream_to_json(const PulseStream& stream);
PulseStream stream_from_json(const nlohmann::json& doc);

nlohmann::json shape_to_json(const PulseShape& shape);
PulseShape shape_from_json(const nlohmann::json& doc);

/// Kernel document: {tau, k_min, k_max, coefficients: [{k, re, im}],
/// window: "rect-sinc"|"custom", r?}; `r` marks a periodic extension.
nlohmann::json kernel_to_json(const SosKernel& kernel);
nlohmann::json kernel_to_json(const PeriodicExtensionKernel& kernel);
Kernel kernel_from_json(const nlohmann::json& doc);

nlohmann::json recovery_to_json(const RecoveryResult& result);

/// CSV columns: instant, re, im, clean_re, clean_im. A JSON metadata
/// sidecar is written next to the CSV as `<path>.meta.json`.
void write_samples_csv(const SampleSet& samples, const std::string& path);
SampleSet read_samples_csv(const std::string& path);

nlohmann::json burst_plan_to_json(const BurstPlan& plan);
BurstPlan burst_plan_from_json(const nlohmann::json& doc);

/// Burst-tagged sample CSV: burst_id, instant, re, im. Returns one sample
/// set per burst id in ascending id order.
std::vector<SampleSet> read_burst_samples_csv(const std::string& path);
void write_burst_samples_csv(const std::vector<SampleSet>& per_burst, const std::string& path);

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const nlohmann::json& doc, const std::string& path);

}  // namespace sospulse

#endif  // SOSPULSE_SERIALIZE_HPP
