#include "sospulse/serialize.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace sospulse {
namespace {

nlohmann::json complex_to_json(const Complex& z) {
    if (z.imag() == 0.0) return z.real();
    return nlohmann::json{{"re", z.real()}, {"im", z.imag()}};
}

Complex complex_from_json(const nlohmann::json& j) {
    if (j.is_number()) return {j.get<Real>(), 0.0};
    return {j.at("re").get<Real>(), j.value("im", 0.0)};
}

}  // namespace

nlohmann::json shape_to_json(const PulseShape& shape) {
    switch (shape.kind()) {
        case PulseShape::Kind::Dirac: return {{"kind", "dirac"}};
        case PulseShape::Kind::Gaussian: return {{"kind", "gaussian"}, {"sigma", shape.sigma()}};
        case PulseShape::Kind::TabulatedSymmetric: break;
    }
    throw std::invalid_argument("shape_to_json: tabulated shapes carry their table; use files");
}

PulseShape shape_from_json(const nlohmann::json& doc) {
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "dirac") return PulseShape::dirac();
    if (kind == "gaussian") return PulseShape::gaussian(doc.at("sigma").get<Real>());
    if (kind == "tabulated")
        return PulseShape::tabulated_symmetric(doc.at("samples").get<std::vector<Real>>(),
                                               doc.at("spacing").get<Real>());
    throw std::invalid_argument("shape_from_json: unknown kind '" + kind + "'");
}

nlohmann::json stream_to_json(const PulseStream& stream) {
    nlohmann::json doc;
    doc["shape"] = shape_to_json(stream.shape());
    doc["tau"]   = stream.tau();
    switch (stream.kind()) {
        case PulseStream::Kind::Periodic: doc["kind"] = "periodic"; break;
        case PulseStream::Kind::Finite: doc["kind"] = "finite"; break;
        case PulseStream::Kind::Bursty: doc["kind"] = "bursty"; break;
    }
    doc["delays"] = stream.delays();
    nlohmann::json amps = nlohmann::json::array();
    for (const Complex& a : stream.amplitudes()) amps.push_back(complex_to_json(a));
    doc["amplitudes"] = amps;
    if (stream.kind() == PulseStream::Kind::Bursty) doc["burst_starts"] = stream.burst_starts();
    return doc;
}

PulseStream stream_from_json(const nlohmann::json& doc) {
    const PulseShape shape = shape_from_json(doc.at("shape"));
    const Real tau         = doc.at("tau").get<Real>();
    const std::string kind = doc.at("kind").get<std::string>();
    const auto delays      = doc.at("delays").get<std::vector<Real>>();
    std::vector<Complex> amplitudes;
    for (const auto& a : doc.at("amplitudes")) amplitudes.push_back(complex_from_json(a));

    if (kind == "periodic") return PulseStream::periodic(shape, tau, delays, amplitudes);
    if (kind == "finite") return PulseStream::finite(shape, tau, delays, amplitudes);
    if (kind == "bursty")
        return PulseStream::bursty(shape, tau, delays, amplitudes,
                                   doc.at("burst_starts").get<std::vector<Real>>());
    throw std::invalid_argument("stream_from_json: unknown kind '" + kind + "'");
}

nlohmann::json kernel_to_json(const SosKernel& kernel) {
    nlohmann::json doc;
    doc["tau"]   = kernel.tau();
    doc["k_min"] = kernel.indices().k_min();
    doc["k_max"] = kernel.indices().k_max();
    nlohmann::json coeffs = nlohmann::json::array();
    for (Index i = 0; i < kernel.indices().size(); ++i) {
        const Complex b = kernel.coefficients()[i];
        coeffs.push_back({{"k", kernel.indices().at(i)}, {"re", b.real()}, {"im", b.imag()}});
    }
    doc["coefficients"] = coeffs;
    doc["window"] = kernel.window() == SosKernel::Window::RectSinc ? "rect-sinc" : "custom";
    return doc;
}

nlohmann::json kernel_to_json(const PeriodicExtensionKernel& kernel) {
    nlohmann::json doc = kernel_to_json(kernel.base());
    doc["r"] = kernel.replicas();
    return doc;
}

Kernel kernel_from_json(const nlohmann::json& doc) {
    const Real tau    = doc.at("tau").get<Real>();
    const auto k_min  = doc.at("k_min").get<Index>();
    const auto k_max  = doc.at("k_max").get<Index>();
    const IndexSet indices(k_min, k_max);

    ComplexVector b = ComplexVector::Zero(indices.size());
    for (const auto& entry : doc.at("coefficients")) {
        const auto k = entry.at("k").get<Index>();
        b[indices.position(k)] = Complex{entry.at("re").get<Real>(), entry.value("im", 0.0)};
    }
    if (doc.value("window", "rect-sinc") != "rect-sinc")
        throw std::invalid_argument("kernel_from_json: custom windows need their table; "
                                    "only rect-sinc kernels round-trip through JSON");
    SosKernel base(tau, indices, std::move(b));
    if (doc.contains("r")) return PeriodicExtensionKernel(base, doc.at("r").get<Index>());
    return base;
}

nlohmann::json recovery_to_json(const RecoveryResult& result) {
    nlohmann::json doc;
    doc["delays"] = result.delays;
    nlohmann::json amps = nlohmann::json::array();
    for (const Complex& a : result.amplitudes) amps.push_back(complex_to_json(a));
    doc["amplitudes"] = amps;
    doc["residual_y"]       = result.residual_y;
    doc["residual_samples"] = result.residual_samples;
    nlohmann::json roots = nlohmann::json::array();
    for (Index i = 0; i < result.annihilator.roots.size(); ++i) {
        roots.push_back({{"re", result.annihilator.roots[i].real()},
                         {"im", result.annihilator.roots[i].imag()}});
    }
    doc["roots"] = roots;
    doc["root_moduli"] = std::vector<Real>(result.annihilator.root_moduli.data(),
                                           result.annihilator.root_moduli.data() +
                                               result.annihilator.root_moduli.size());
    doc["effective_rank"] = result.annihilator.effective_rank;
    doc["degenerate"]     = result.annihilator.degenerate;
    doc["warnings"]       = result.warnings;
    return doc;
}

namespace {

nlohmann::json sample_meta_to_json(const SampleSet& samples) {
    nlohmann::json doc;
    doc["tau"]          = samples.meta.tau;
    doc["T"]            = samples.meta.period;
    doc["window_start"] = samples.meta.window_start;
    doc["N"]            = samples.meta.n_samples;
    doc["path"]         = samples.meta.path;
    doc["grid_factor"]  = samples.meta.grid_factor;
    doc["kernel_kind"]  = samples.meta.kernel_kind;
    doc["noise_sigma"]  = samples.noise_sigma;
    if (samples.snr_db && std::isfinite(*samples.snr_db)) doc["snr_db"] = *samples.snr_db;
    doc["seed"]        = samples.noise_seed;
    doc["real_valued"] = samples.real_valued;
    return doc;
}

void sample_meta_from_json(const nlohmann::json& doc, SampleSet& samples) {
    samples.meta.tau          = doc.value("tau", 0.0);
    samples.meta.period       = doc.value("T", 0.0);
    samples.meta.window_start = doc.value("window_start", 0.0);
    samples.meta.n_samples    = doc.value("N", Index{0});
    samples.meta.path         = doc.value("path", "");
    samples.meta.grid_factor  = doc.value("grid_factor", Index{0});
    samples.meta.kernel_kind  = doc.value("kernel_kind", "");
    samples.noise_sigma       = doc.value("noise_sigma", 0.0);
    if (doc.contains("snr_db")) samples.snr_db = doc["snr_db"].get<Real>();
    samples.noise_seed  = doc.value("seed", std::uint64_t{0});
    samples.real_valued = doc.value("real_valued", false);
}

}  // namespace

void write_samples_csv(const SampleSet& samples, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_samples_csv: cannot open " + path);
    out.precision(17);
    out << "instant,re,im,clean_re,clean_im\n";
    for (Index i = 0; i < samples.instants.size(); ++i)
        out << samples.instants[i] << ',' << samples.values[i].real() << ','
            << samples.values[i].imag() << ',' << samples.clean_values[i].real() << ','
            << samples.clean_values[i].imag() << '\n';
    save_json_file(sample_meta_to_json(samples), path + ".meta.json");
}

SampleSet read_samples_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_samples_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_samples_csv: empty file");

    std::vector<Real> instants;
    std::vector<Complex> values, clean;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        Real cols[5];
        for (int c = 0; c < 5; ++c) {
            if (!std::getline(ss, field, ','))
                throw std::runtime_error("read_samples_csv: malformed row '" + line + "'");
            cols[c] = std::stod(field);
        }
        instants.push_back(cols[0]);
        values.emplace_back(cols[1], cols[2]);
        clean.emplace_back(cols[3], cols[4]);
    }

    SampleSet samples;
    samples.instants     = Eigen::Map<const RealVector>(instants.data(),
                                                        static_cast<Index>(instants.size()));
    samples.values       = Eigen::Map<const ComplexVector>(values.data(),
                                                           static_cast<Index>(values.size()));
    samples.clean_values = Eigen::Map<const ComplexVector>(clean.data(),
                                                           static_cast<Index>(clean.size()));

    std::ifstream meta(path + ".meta.json");
    if (meta) {
        nlohmann::json doc;
        meta >> doc;
        sample_meta_from_json(doc, samples);
    }
    return samples;
}

nlohmann::json burst_plan_to_json(const BurstPlan& plan) {
    nlohmann::json doc;
    doc["burst_starts"]      = plan.burst_starts;
    doc["tau"]               = plan.tau;
    doc["r"]                 = plan.replicas;
    doc["pulse_support"]     = plan.pulse_support;
    doc["samples_per_burst"] = plan.samples_per_burst;
    return doc;
}

BurstPlan burst_plan_from_json(const nlohmann::json& doc) {
    BurstPlan plan;
    plan.burst_starts      = doc.at("burst_starts").get<std::vector<Real>>();
    plan.tau               = doc.at("tau").get<Real>();
    plan.replicas          = doc.value("r", Index{1});
    plan.pulse_support     = doc.value("pulse_support", 0.0);
    plan.samples_per_burst = doc.value("samples_per_burst", Index{0});
    return plan;
}

std::vector<SampleSet> read_burst_samples_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_burst_samples_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_burst_samples_csv: empty file");

    std::map<long, std::vector<std::pair<Real, Complex>>> by_burst;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 4)
            throw std::runtime_error("read_burst_samples_csv: malformed row '" + line + "'");
        by_burst[std::stol(fields[0])].emplace_back(
            std::stod(fields[1]), Complex{std::stod(fields[2]), std::stod(fields[3])});
    }

    std::vector<SampleSet> out;
    for (const auto& [burst_id, rows] : by_burst) {
        SampleSet samples;
        samples.instants     = RealVector(static_cast<Index>(rows.size()));
        samples.values       = ComplexVector(static_cast<Index>(rows.size()));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            samples.instants[static_cast<Index>(i)] = rows[i].first;
            samples.values[static_cast<Index>(i)]   = rows[i].second;
        }
        samples.clean_values = samples.values;
        out.push_back(std::move(samples));
    }
    return out;
}

void write_burst_samples_csv(const std::vector<SampleSet>& per_burst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_burst_samples_csv: cannot open " + path);
    out.precision(17);
    out << "burst_id,instant,re,im\n";
    for (std::size_t b = 0; b < per_burst.size(); ++b)
        for (Index i = 0; i < per_burst[b].instants.size(); ++i)
            out << b << ',' << per_burst[b].instants[i] << ',' << per_burst[b].values[i].real()
                << ',' << per_burst[b].values[i].imag() << '\n';
}

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json doc;
    in >> doc;
    return doc;
}

void save_json_file(const nlohmann::json& doc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << doc.dump(2) << '\n';
}

}  // namespace sospulse
