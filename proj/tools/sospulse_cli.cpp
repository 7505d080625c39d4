// Command-line front end: kernel design, sampling, recovery, experiment
// sweeps, and the ultrasound processing chain.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sospulse/experiment.hpp"
#include "sospulse/serialize.hpp"
#include "sospulse/ultrasound.hpp"
#include "sospulse/waterfilling.hpp"

namespace fs = std::filesystem;
using namespace sospulse;

namespace {

PulseShape parse_pulse(const std::string& text) {
    if (text == "dirac") return PulseShape::dirac();
    if (text.rfind("gaussian:", 0) == 0)
        return PulseShape::gaussian(std::stod(text.substr(9)));
    throw CLI::ValidationError("pulse", "expected 'dirac' or 'gaussian:<sigma>'");
}

std::vector<Real> parse_instants(const std::string& text) {
    std::vector<Real> out;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(std::stod(field));
    return out;
}

RealVector read_record_samples(const std::string& path) {
    if (path.size() > 4 && (path.substr(path.size() - 4) == ".raw" ||
                            path.substr(path.size() - 4) == ".bin")) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open " + path);
        std::vector<std::int16_t> raw;
        std::int16_t v = 0;
        while (in.read(reinterpret_cast<char*>(&v), sizeof(v))) raw.push_back(v);
        RealVector samples(static_cast<Index>(raw.size()));
        for (std::size_t i = 0; i < raw.size(); ++i)
            samples[static_cast<Index>(i)] = static_cast<Real>(raw[i]) / 32768.0;
        return samples;
    }
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<Real> values;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        values.push_back(std::stod(line));
    }
    RealVector samples(static_cast<Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i)
        samples[static_cast<Index>(i)] = values[i];
    return samples;
}

void write_gnuplot(const ExperimentResult& result, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out.precision(17);
    out << "# snr_db factor n_samples mean_delay_sq_err mean_amp_sq_err\n";
    for (const auto& row : result.rows)
        out << row.snr_db << ' ' << row.factor << ' ' << row.n_samples << ' '
            << row.mean_delay_sq_err << ' ' << row.mean_amp_sq_err << '\n';
}

int cmd_design_kernel(Real tau, Index k_min, Index k_max, const std::string& window,
                      const std::string& pulse, Index order, Real amplitude_var, Real noise_var,
                      Index n_samples, Real extend_for_support, const std::string& out_path) {
    const IndexSet indices(k_min, k_max);
    SosKernel kernel = [&] {
        if (window == "dirichlet") return SosKernel::dirichlet(tau, indices);
        if (window == "hamming") return SosKernel::hamming(tau, indices);
        if (window == "optimal") {
            const auto shape = parse_pulse(pulse);
            const auto wf =
                optimal_coefficients(shape, tau, indices, order, amplitude_var, noise_var,
                                     n_samples > 0 ? n_samples : indices.size());
            return kernel_from_beta(tau, indices, wf.beta);
        }
        throw CLI::ValidationError("window", "expected dirichlet|hamming|optimal");
    }();

    nlohmann::json doc;
    if (extend_for_support >= 0.0)
        doc = kernel_to_json(make_periodic_extension(kernel, extend_for_support));
    else
        doc = kernel_to_json(kernel);
    save_json_file(doc, out_path);
    std::cout << "wrote " << out_path << " (M=" << indices.size() << ")\n";
    return 0;
}

int cmd_sample(const std::string& stream_path, const std::string& kernel_path, Index n_samples,
               Real period, Real window_start, const std::string& instants, Real snr_db,
               std::uint64_t seed, const std::string& path_mode, Index grid_factor,
               const std::string& out_path) {
    const PulseStream stream = stream_from_json(load_json_file(stream_path));
    const Kernel kernel      = kernel_from_json(load_json_file(kernel_path));

    AcquisitionConfig config(kernel, n_samples);
    config.period       = period;
    config.window_start = window_start;
    config.grid_factor  = grid_factor;
    if (!instants.empty()) config.instants = parse_instants(instants);
    if (path_mode == "analytic")
        config.path = AcquisitionPath::Analytic;
    else if (path_mode == "quadrature")
        config.path = AcquisitionPath::Quadrature;

    SampleSet samples = acquire(stream, config);
    if (std::isfinite(snr_db)) samples = add_noise(samples, snr_db, seed);
    write_samples_csv(samples, out_path);
    std::cout << "wrote " << out_path << " and " << out_path << ".meta.json (N="
              << samples.instants.size() << ", path=" << samples.meta.path << ")\n";
    return 0;
}

int cmd_recover(const std::string& samples_path, const std::string& kernel_path,
                const std::string& pulse, Index order, Real tau_override, bool tls,
                Index cadzow_iterations, const std::string& burst_plan_path,
                const std::string& out_path) {
    const Kernel kernel    = kernel_from_json(load_json_file(kernel_path));
    const PulseShape shape = parse_pulse(pulse);

    RecoveryOptions options;
    options.tls               = tls;
    options.cadzow_iterations = cadzow_iterations;

    if (!burst_plan_path.empty()) {
        const BurstPlan plan = burst_plan_from_json(load_json_file(burst_plan_path));
        const auto per_burst = read_burst_samples_csv(samples_path);
        const auto results   = recover_bursts(plan, per_burst, kernel, shape, order, options);
        nlohmann::json doc   = nlohmann::json::array();
        for (const auto& burst : results) {
            nlohmann::json entry;
            entry["burst"]       = burst.burst;
            entry["burst_start"] = burst.burst_start;
            entry["ok"]          = burst.ok;
            if (burst.ok)
                entry["result"] = recovery_to_json(*burst.result);
            else
                entry["error"] = burst.error;
            doc.push_back(entry);
        }
        save_json_file(doc, out_path);
        std::cout << "wrote " << out_path << " (" << results.size() << " bursts)\n";
        return 0;
    }

    const SampleSet samples = read_samples_csv(samples_path);
    const Real tau = tau_override > 0.0 ? tau_override : samples.meta.tau;
    if (!(tau > 0.0))
        throw std::runtime_error("recover: tau unknown; pass --tau or provide sidecar metadata");
    const auto system  = CoefficientSystem::build(kernel, shape, tau, samples.instants);
    const auto result  = recover(samples, system, order, options);
    save_json_file(recovery_to_json(result), out_path);
    std::cout << "wrote " << out_path << " (" << result.delays.size() << " pulses, residual "
              << result.residual_y << ")\n";
    return 0;
}

int cmd_experiment(const std::string& spec_path, const std::string& out_dir) {
    std::ifstream in(spec_path);
    if (!in) throw std::runtime_error("cannot open " + spec_path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const ExperimentSpec spec = spec_from_json_text(buffer.str());

    fs::create_directories(out_dir);
    const ExperimentResult result = run(spec);
    const std::string stem = (fs::path(out_dir) / scenario_name(spec.scenario)).string();
    write_csv(result, stem + ".csv");
    write_json(result, stem + ".json");
    write_gnuplot(result, stem + ".dat");
    std::cout << "wrote " << stem << ".{csv,json,dat} (" << result.rows.size() << " rows)\n";
    return 0;
}

int cmd_ultrasound(const std::string& synthesize_path, const std::string& input_path,
                   const std::string& header_path, Index order, Index n_samples,
                   Real threshold_fraction, Real snr_db, std::uint64_t seed, bool one_way,
                   const std::string& out_path) {
    ChannelRecord record;
    if (!synthesize_path.empty()) {
        const auto doc = load_json_file(synthesize_path);
        std::vector<Scatterer> scatterers;
        const Real c_sound = doc.value("sound_speed", 1550.0);
        const bool two_way = !one_way;
        for (const auto& s : doc.at("scatterers")) {
            Scatterer sc;
            if (s.contains("delay"))
                sc.delay = s["delay"].get<Real>();
            else
                sc.delay = s.at("depth_m").get<Real>() * (two_way ? 2.0 : 1.0) / c_sound;
            sc.reflectivity = s.value("reflectivity", 1.0);
            scatterers.push_back(sc);
        }
        record = synthesize_channel(scatterers, doc.value("sample_rate", 20e6),
                                    doc.value("carrier", 1.7021e6), doc.value("sigma", 3e-7),
                                    doc.value("window", 2.08e-4), c_sound, snr_db, seed);
    } else {
        const auto header  = load_json_file(header_path);
        record.samples     = read_record_samples(input_path);
        record.sample_rate = header.at("f_s").get<Real>();
        record.carrier     = header.at("f_c").get<Real>();
        record.pulse_sigma = header.at("sigma").get<Real>();
        record.sound_speed = header.value("sound_speed", 1550.0);
        record.window = header.value("window", static_cast<Real>(record.samples.size()) /
                                                   record.sample_rate);
    }

    UltrasoundOptions options;
    options.n_samples          = n_samples;
    options.model_order        = order;
    options.threshold_fraction = threshold_fraction;
    options.two_way_depth      = !one_way;
    const UltrasoundResult result = process_channel(record, options);

    nlohmann::json doc;
    doc["recovery"]        = recovery_to_json(result.recovery);
    doc["depths_m"]        = result.depths.depths;
    doc["reflectivities"]  = result.depths.reflectivities;
    doc["two_way"]         = result.depths.two_way;
    doc["rate_reduction"]  = result.rate_reduction;
    doc["high_rate_count"] = record.samples.size();
    doc["low_rate_count"]  = n_samples;
    doc["warnings"]        = result.warnings;
    save_json_file(doc, out_path);
    std::cout << "wrote " << out_path << " (rate reduction " << result.rate_reduction << "x)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sub-Nyquist sampling toolkit for streams of pulses"};
    app.require_subcommand(1);

    // design-kernel
    auto* design = app.add_subcommand("design-kernel", "Design an SoS sampling kernel");
    Real dk_tau = 1.0;
    Index dk_kmin = -5, dk_kmax = 5, dk_order = 5, dk_n = 0;
    std::string dk_window = "dirichlet", dk_pulse = "dirac", dk_out = "kernel.json";
    Real dk_ampvar = 1.0, dk_noisevar = 1e-2, dk_extend = -1.0;
    design->add_option("--tau", dk_tau, "Period in seconds");
    design->add_option("--k-min", dk_kmin, "Smallest Fourier index");
    design->add_option("--k-max", dk_kmax, "Largest Fourier index");
    design->add_option("--window", dk_window, "dirichlet|hamming|optimal");
    design->add_option("--pulse", dk_pulse, "Pulse for optimal design: dirac|gaussian:<sigma>");
    design->add_option("--L", dk_order, "Pulse count prior for optimal design");
    design->add_option("--amplitude-var", dk_ampvar, "Amplitude variance prior");
    design->add_option("--noise-var", dk_noisevar, "Sample noise variance for optimal design");
    design->add_option("--N", dk_n, "Sample count for optimal design (default |K|)");
    design->add_option("--extend-for-support", dk_extend,
                       "Emit g_r for a pulse of this support (seconds)");
    design->add_option("--out", dk_out, "Output kernel JSON");

    // sample
    auto* sample = app.add_subcommand("sample", "Filter a stream and take low-rate samples");
    std::string sm_stream, sm_kernel, sm_instants, sm_path = "auto", sm_out = "samples.csv";
    Index sm_n = 0, sm_grid = 1000;
    Real sm_t = 0.0, sm_start = 0.0, sm_snr = std::numeric_limits<Real>::infinity();
    std::uint64_t sm_seed = 1;
    sample->add_option("--stream", sm_stream, "Stream JSON")->required();
    sample->add_option("--kernel", sm_kernel, "Kernel JSON")->required();
    sample->add_option("--N", sm_n, "Sample count");
    sample->add_option("--T", sm_t, "Sampling period (default tau/N)");
    sample->add_option("--window-start", sm_start, "First sample instant");
    sample->add_option("--instants", sm_instants, "Explicit comma-separated instants");
    sample->add_option("--snr-db", sm_snr, "Add noise at this SNR");
    sample->add_option("--seed", sm_seed, "Noise seed");
    sample->add_option("--path", sm_path, "auto|analytic|quadrature");
    sample->add_option("--grid-factor", sm_grid, "Quadrature oversampling factor");
    sample->add_option("--out", sm_out, "Output CSV (sidecar <out>.meta.json)");

    // recover
    auto* rec = app.add_subcommand("recover", "Estimate delays and amplitudes from samples");
    std::string rc_samples, rc_kernel, rc_pulse = "dirac", rc_plan, rc_out = "result.json";
    Index rc_order = 0, rc_cadzow = 0;
    Real rc_tau = 0.0;
    bool rc_tls = false;
    rec->add_option("--samples", rc_samples, "Sample CSV (or burst-tagged CSV)")->required();
    rec->add_option("--kernel", rc_kernel, "Kernel JSON")->required();
    rec->add_option("--pulse", rc_pulse, "dirac|gaussian:<sigma>");
    rec->add_option("--L", rc_order, "Model order")->required();
    rec->add_option("--tau", rc_tau, "Period override (else from sidecar)");
    rec->add_flag("--tls", rc_tls, "Total least-squares annihilator");
    rec->add_option("--cadzow-iters", rc_cadzow, "Cadzow denoising iterations");
    rec->add_option("--burst-plan", rc_plan, "BurstPlan JSON for tagged burst samples");
    rec->add_option("--out", rc_out, "Output JSON");

    // experiment
    auto* exp = app.add_subcommand("experiment", "Run a scenario sweep from a spec file");
    std::string ex_spec, ex_out = ".";
    exp->add_option("--spec", ex_spec, "ExperimentSpec JSON")->required();
    exp->add_option("--out", ex_out, "Output directory");

    // ultrasound
    auto* us = app.add_subcommand("ultrasound", "Pulse-echo channel processing chain");
    std::string us_synth, us_input, us_header, us_out = "report.json";
    Index us_order = 4, us_n = 17;
    Real us_thresh = 0.1, us_snr = 20.0;
    std::uint64_t us_seed = 1;
    bool us_oneway = false;
    us->add_option("--synthesize", us_synth, "Phantom JSON to synthesize a record");
    us->add_option("--input", us_input, "Recorded channel data (CSV lines or .raw int16)");
    us->add_option("--header", us_header, "JSON header for --input: {f_s, f_c, sigma, ...}");
    us->add_option("--L", us_order, "Number of echoes to estimate");
    us->add_option("--N", us_n, "Low-rate sample count");
    us->add_option("--threshold-fraction", us_thresh, "Hard threshold as fraction of max");
    us->add_option("--snr-db", us_snr, "Channel SNR for synthesis");
    us->add_option("--seed", us_seed, "Synthesis noise seed");
    us->add_flag("--one-way", us_oneway, "Report depth = c t instead of c t / 2");
    us->add_option("--out", us_out, "Output report JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (design->parsed())
            return cmd_design_kernel(dk_tau, dk_kmin, dk_kmax, dk_window, dk_pulse, dk_order,
                                     dk_ampvar, dk_noisevar, dk_n, dk_extend, dk_out);
        if (sample->parsed())
            return cmd_sample(sm_stream, sm_kernel, sm_n, sm_t, sm_start, sm_instants, sm_snr,
                              sm_seed, sm_path, sm_grid, sm_out);
        if (rec->parsed())
            return cmd_recover(rc_samples, rc_kernel, rc_pulse, rc_order, rc_tau, rc_tls,
                               rc_cadzow, rc_plan, rc_out);
        if (exp->parsed()) return cmd_experiment(ex_spec, ex_out);
        if (us->parsed()) {
            if (us_synth.empty() == us_input.empty())
                throw std::runtime_error("ultrasound: pass exactly one of --synthesize/--input");
            return cmd_ultrasound(us_synth, us_input, us_header, us_order, us_n, us_thresh,
                                  us_snr, us_seed, us_oneway, us_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
