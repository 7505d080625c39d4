#include "sospulse/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "sospulse/burst.hpp"
#include "sospulse/pulse_stream.hpp"
#include "sospulse/recovery.hpp"
#include "sospulse/rng.hpp"
#include "sospulse/sampling.hpp"
#include "sospulse/spectral.hpp"
#include "sospulse/ultrasound.hpp"
#include "sospulse/waterfilling.hpp"

namespace sospulse {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    return splitmix64(base ^ splitmix64(a * 0x100000001b3ull + b + 1));
}

PulseShape make_shape(const ExperimentSpec& spec) {
    if (spec.pulse == "dirac") return PulseShape::dirac();
    if (spec.pulse == "gaussian") return PulseShape::gaussian(spec.sigma);
    throw std::invalid_argument("ExperimentSpec: unknown pulse '" + spec.pulse + "'");
}

std::vector<Real> equally_spaced_delays(Index count, Real tau) {
    std::vector<Real> t(static_cast<std::size_t>(count));
    for (Index l = 0; l < count; ++l)
        t[static_cast<std::size_t>(l)] = (2.0 * static_cast<Real>(l) + 1.0) * tau /
                                         (2.0 * static_cast<Real>(count));
    return t;
}

SosKernel build_kernel(KernelChoice choice, Real tau, const IndexSet& indices,
                       const PulseShape& shape, Index model_order, Real amplitude_var,
                       Real noise_var, Index n_samples) {
    switch (choice) {
        case KernelChoice::Dirichlet: return SosKernel::dirichlet(tau, indices);
        case KernelChoice::Hamming: return SosKernel::hamming(tau, indices);
        case KernelChoice::Optimal: {
            const auto wf = optimal_coefficients(shape, tau, indices, model_order, amplitude_var,
                                                 noise_var, n_samples);
            return kernel_from_beta(tau, indices, wf.beta);
        }
    }
    throw std::invalid_argument("unknown kernel choice");
}

Real sorted_delay_sq_err(const std::vector<Real>& truth, const std::vector<Real>& estimate) {
    std::vector<Real> a = truth, b = estimate;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    Real acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
    return acc;
}

Real matched_amp_sq_err(const std::vector<Real>& t_true, const std::vector<Complex>& a_true,
                        const std::vector<Real>& t_est, const std::vector<Complex>& a_est) {
    // Pair by delay rank, the same convention as the delay metric.
    std::vector<std::size_t> ord_true(t_true.size()), ord_est(t_est.size());
    for (std::size_t i = 0; i < ord_true.size(); ++i) ord_true[i] = i;
    for (std::size_t i = 0; i < ord_est.size(); ++i) ord_est[i] = i;
    std::sort(ord_true.begin(), ord_true.end(),
              [&](std::size_t x, std::size_t y) { return t_true[x] < t_true[y]; });
    std::sort(ord_est.begin(), ord_est.end(),
              [&](std::size_t x, std::size_t y) { return t_est[x] < t_est[y]; });
    Real acc = 0.0;
    for (std::size_t i = 0; i < ord_true.size(); ++i)
        acc += std::norm(a_true[ord_true[i]] - a_est[ord_est[i]]);
    return acc;
}

struct SweepSetup {
    PulseStream stream;
    Kernel kernel;
    CoefficientSystem system;
    SampleSet clean;
};

SweepSetup make_sweep_setup(const ExperimentSpec& spec, Index n_samples, Index k_half,
                            Real design_noise_var) {
    const PulseShape shape = make_shape(spec);
    const Real tau         = spec.tau;
    const IndexSet indices = IndexSet::symmetric(k_half);

    std::vector<Real> delays = spec.delays;
    if (delays.empty()) delays = equally_spaced_delays(spec.model_order, tau);
    std::vector<Complex> amps;
    if (spec.amplitudes.empty())
        amps.assign(delays.size(), Complex{1.0, 0.0});
    else
        for (Real a : spec.amplitudes) amps.emplace_back(a, 0.0);

    const bool finite = spec.scenario == Scenario::FiniteDemo ||
                        spec.scenario == Scenario::FiniteNoisy ||
                        spec.scenario == Scenario::HighOrder;
    PulseStream stream = finite ? PulseStream::finite(shape, tau, delays, amps)
                                : PulseStream::periodic(shape, tau, delays, amps);

    const SosKernel base = build_kernel(spec.kernel, tau, indices, shape, spec.model_order,
                                        spec.amplitude_var, design_noise_var, n_samples);
    Kernel kernel = finite ? Kernel{make_periodic_extension(base, shape.support())} : Kernel{base};

    AcquisitionConfig config(kernel, n_samples);
    SampleSet clean = acquire(stream, config);

    CoefficientSystem system = CoefficientSystem::build(kernel, shape, tau, clean.instants);
    return SweepSetup{std::move(stream), std::move(kernel), std::move(system), std::move(clean)};
}

ExperimentRow run_snr_point(const ExperimentSpec& spec, const SweepSetup& setup, Real snr_db,
                            std::size_t snr_index, Index factor, const RecoveryOptions& options) {
    ExperimentRow row;
    row.snr_db    = snr_db;
    row.factor    = factor;
    row.n_samples = setup.clean.instants.size();
    row.trials    = spec.trials;

    const auto t0 = std::chrono::steady_clock::now();
    Real delay_acc = 0.0, amp_acc = 0.0;
    Index ok = 0;
    for (Index trial = 0; trial < spec.trials; ++trial) {
        const std::uint64_t seed =
            trial_seed(spec.seed, static_cast<std::uint64_t>(snr_index) * 131 + factor,
                       static_cast<std::uint64_t>(trial));
        const SampleSet noisy = add_noise(setup.clean, snr_db, seed);
        try {
            const RecoveryResult rec = recover(noisy, setup.system, spec.model_order, options);
            if (static_cast<Index>(rec.delays.size()) != setup.stream.order())
                throw std::runtime_error("degenerate recovery");
            delay_acc += sorted_delay_sq_err(setup.stream.delays(), rec.delays);
            amp_acc += matched_amp_sq_err(setup.stream.delays(), setup.stream.amplitudes(),
                                          rec.delays, rec.amplitudes);
            ++ok;
        } catch (const std::exception&) {
            ++row.failures;
        }
    }
    if (ok > 0) {
        row.mean_delay_sq_err = delay_acc / static_cast<Real>(ok);
        row.mean_amp_sq_err   = amp_acc / static_cast<Real>(ok);
    }
    row.runtime_s = std::chrono::duration<Real>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

// Design noise variance for the optimal kernel at a given SNR: calibrated
// against the trace-normalized Dirichlet clean samples of the same setup.
Real design_noise_for(const ExperimentSpec& spec, Index n_samples, Index k_half, Real snr_db) {
    if (spec.kernel != KernelChoice::Optimal || std::isinf(snr_db)) return 1.0;
    ExperimentSpec probe = spec;
    probe.kernel         = KernelChoice::Dirichlet;
    SweepSetup setup     = make_sweep_setup(probe, n_samples, k_half, 1.0);
    const auto* sos      = std::get_if<SosKernel>(&setup.kernel);
    Real scale           = 1.0;
    if (sos != nullptr) scale = 1.0 / sos->coefficients().squaredNorm();
    const Real power =
        scale * setup.clean.clean_values.squaredNorm() / static_cast<Real>(n_samples);
    return power / std::pow(10.0, snr_db / 10.0);
}

ExperimentResult run_sweep(const ExperimentSpec& spec) {
    ExperimentResult result;
    result.spec = spec;

    const Index k_half = spec.k_half > 0 ? spec.k_half : spec.model_order;
    const Index m      = 2 * k_half + 1;
    const Index n      = spec.n_samples > 0 ? spec.n_samples : m;

    RecoveryOptions options;
    options.tls               = spec.tls;
    options.cadzow_iterations = spec.cadzow_iterations;

    std::vector<Real> grid = spec.snr_db_grid;
    if (grid.empty()) grid = {std::numeric_limits<Real>::infinity()};

    for (std::size_t si = 0; si < grid.size(); ++si) {
        const SweepSetup setup =
            make_sweep_setup(spec, n, k_half, design_noise_for(spec, n, k_half, grid[si]));
        result.rows.push_back(run_snr_point(spec, setup, grid[si], si, 1, options));
    }
    return result;
}

ExperimentResult run_oversampling(const ExperimentSpec& spec) {
    ExperimentResult result;
    result.spec = spec;

    const Index base_n = spec.n_samples > 0 ? spec.n_samples : 2 * spec.model_order + 1;
    RecoveryOptions options;
    options.tls               = true;
    options.cadzow_iterations = spec.cadzow_iterations > 0 ? spec.cadzow_iterations : 10;

    std::vector<Real> grid = spec.snr_db_grid;
    if (grid.empty()) grid = {10.0, 20.0, 30.0};

    for (Index factor : spec.oversampling_factors) {
        const Index n      = base_n * factor;
        const Index m      = (n % 2 == 1) ? n : n - 1;  // symmetric K needs odd M
        const Index k_half = (m - 1) / 2;
        ExperimentSpec local = spec;
        local.n_samples      = n;
        for (std::size_t si = 0; si < grid.size(); ++si) {
            const SweepSetup setup = make_sweep_setup(local, n, k_half, 1.0);
            result.rows.push_back(run_snr_point(local, setup, grid[si], si, factor, options));
        }
    }
    return result;
}

ExperimentResult run_infinite(const ExperimentSpec& spec) {
    ExperimentResult result;
    result.spec = spec;

    const PulseShape shape = make_shape(spec);
    const Real tau         = spec.tau;
    const Index k_half     = spec.k_half > 0 ? spec.k_half : spec.model_order;
    const Index n          = spec.n_samples > 0 ? spec.n_samples : 2 * k_half + 1;

    const SosKernel base = build_kernel(spec.kernel, tau, IndexSet::symmetric(k_half), shape,
                                        spec.model_order, spec.amplitude_var, 1.0, n);
    const PeriodicExtensionKernel kernel = make_periodic_extension(base, shape.support());
    const Real gap = burst_spacing_threshold(kernel.replicas(), tau, shape.support()) + 0.5 * tau;

    std::vector<Real> starts, delays;
    std::vector<Complex> amps;
    const std::vector<Real> local = equally_spaced_delays(spec.model_order, tau);
    for (Index b = 0; b < spec.bursts; ++b) {
        const Real start = static_cast<Real>(b) * (tau + gap);
        starts.push_back(start);
        for (Real t : local) {
            delays.push_back(start + t);
            amps.emplace_back(1.0, 0.0);
        }
    }
    const PulseStream stream = PulseStream::bursty(shape, tau, delays, amps, starts);

    RecoveryOptions options;
    options.tls               = spec.tls;
    options.cadzow_iterations = spec.cadzow_iterations;

    const auto t0 = std::chrono::steady_clock::now();
    const auto recoveries = segment_and_recover(stream, kernel, n, spec.model_order, options);

    std::vector<Real> est;
    Index failures = 0;
    for (const auto& burst : recoveries) {
        if (!burst.ok || !burst.result) {
            ++failures;
            continue;
        }
        for (Real t : burst.result->delays) est.push_back(t);
    }

    ExperimentRow row;
    row.n_samples = n * spec.bursts;
    row.trials    = 1;
    row.failures  = failures;
    if (est.size() == delays.size()) row.mean_delay_sq_err = sorted_delay_sq_err(delays, est);
    row.runtime_s = std::chrono::duration<Real>(std::chrono::steady_clock::now() - t0).count();
    result.rows.push_back(row);
    return result;
}

ExperimentResult run_ultrasound(const ExperimentSpec& spec) {
    ExperimentResult result;
    result.spec = spec;

    const Real tau = spec.tau;
    std::vector<Scatterer> phantom;
    if (spec.delays.empty()) {
        const std::vector<Real> t = {0.2 * tau, 0.4 * tau, 0.6 * tau, 0.8 * tau};
        const std::vector<Real> rho = {1.0, 0.9, 1.1, 0.8};
        for (std::size_t i = 0; i < t.size(); ++i) phantom.push_back({t[i], rho[i]});
    } else {
        for (std::size_t i = 0; i < spec.delays.size(); ++i)
            phantom.push_back({spec.delays[i],
                               spec.amplitudes.empty() ? 1.0 : spec.amplitudes[i]});
    }
    std::vector<Real> truth;
    for (const auto& s : phantom) truth.push_back(s.delay);

    std::vector<Real> grid = spec.snr_db_grid;
    if (grid.empty()) grid = {20.0};

    for (Index n_low : spec.ultrasound_sample_counts) {
        for (std::size_t si = 0; si < grid.size(); ++si) {
            ExperimentRow row;
            row.snr_db    = grid[si];
            row.n_samples = n_low;
            row.trials    = spec.trials;
            const auto t0 = std::chrono::steady_clock::now();
            Real delay_acc = 0.0;
            Index ok = 0;
            for (Index trial = 0; trial < spec.trials; ++trial) {
                const std::uint64_t seed =
                    trial_seed(spec.seed, static_cast<std::uint64_t>(si) * 977 + n_low,
                               static_cast<std::uint64_t>(trial));
                try {
                    const ChannelRecord record =
                        synthesize_channel(phantom, spec.sample_rate, spec.carrier, spec.sigma,
                                           tau, spec.sound_speed, grid[si], seed);
                    UltrasoundOptions options;
                    options.n_samples          = n_low;
                    options.model_order        = static_cast<Index>(phantom.size());
                    options.threshold_fraction = spec.threshold_fraction;
                    const UltrasoundResult run = process_channel(record, options);
                    if (run.recovery.delays.size() != truth.size())
                        throw std::runtime_error("degenerate recovery");
                    delay_acc += sorted_delay_sq_err(truth, run.recovery.delays);
                    ++ok;
                } catch (const std::exception&) {
                    ++row.failures;
                }
            }
            if (ok > 0) row.mean_delay_sq_err = delay_acc / static_cast<Real>(ok);
            row.runtime_s =
                std::chrono::duration<Real>(std::chrono::steady_clock::now() - t0).count();
            result.rows.push_back(row);
        }
    }
    return result;
}

ExperimentSpec apply_scenario_defaults(ExperimentSpec spec) {
    if (spec.tau <= 0.0) spec.tau = spec.scenario == Scenario::Ultrasound ? 2.08e-4 : 1.0;
    if (spec.sigma <= 0.0) spec.sigma = spec.scenario == Scenario::Ultrasound ? 3e-7 : 7e-3;
    switch (spec.scenario) {
        case Scenario::PeriodicDemo:
            spec.pulse = "gaussian";
            if (spec.model_order == 2) spec.model_order = 5;
            if (spec.kernel == KernelChoice::Dirichlet) spec.kernel = KernelChoice::Hamming;
            spec.snr_db_grid.clear();
            spec.trials = 1;
            break;
        case Scenario::PeriodicNoisy:
            if (spec.delays.empty() && spec.model_order == 2)
                spec.delays = {spec.tau / 3.0, 2.0 * spec.tau / 3.0};
            if (spec.snr_db_grid.empty()) spec.snr_db_grid = {5, 10, 15, 20, 25, 30};
            break;
        case Scenario::FiniteDemo:
        case Scenario::HighOrder:
            if (spec.scenario == Scenario::HighOrder && spec.model_order == 2)
                spec.model_order = 100;
            if (spec.scenario == Scenario::FiniteDemo && spec.model_order == 2)
                spec.model_order = 5;
            spec.snr_db_grid.clear();
            spec.trials = 1;
            break;
        case Scenario::FiniteNoisy:
            if (spec.snr_db_grid.empty()) spec.snr_db_grid = {5, 10, 15, 20, 25, 30};
            break;
        default: break;
    }
    return spec;
}

}  // namespace

ExperimentResult run(const ExperimentSpec& raw) {
    if (raw.trials < 1) throw std::invalid_argument("ExperimentSpec: trials must be >= 1");
    const ExperimentSpec spec = apply_scenario_defaults(raw);
    switch (spec.scenario) {
        case Scenario::PeriodicDemo:
        case Scenario::PeriodicNoisy:
        case Scenario::FiniteDemo:
        case Scenario::FiniteNoisy:
        case Scenario::HighOrder: return run_sweep(spec);
        case Scenario::Oversampling: return run_oversampling(spec);
        case Scenario::InfiniteDemo: return run_infinite(spec);
        case Scenario::Ultrasound: return run_ultrasound(spec);
    }
    throw std::invalid_argument("unknown scenario");
}

std::vector<KernelComparisonRow> compare_kernels(const ComparisonSpec& spec) {
    const PulseShape shape = spec.pulse == "dirac" ? PulseShape::dirac()
                                                   : PulseShape::gaussian(spec.sigma);
    const Real tau         = spec.tau;
    const IndexSet indices = IndexSet::symmetric(spec.k_half);
    const Index m          = indices.size();
    const Index n          = spec.n_samples > 0 ? spec.n_samples : m;
    const Index order      = spec.model_order;

    // Trace-normalized kernels under comparison.
    std::vector<SosKernel> kernels;
    for (KernelChoice choice : spec.kernels) {
        SosKernel k = build_kernel(choice, tau, indices, shape, order, spec.amplitude_var,
                                   spec.noise_var, n);
        kernels.push_back(k.trace_normalized());
    }

    // Shared geometry: uniform instants, V(-t_s), prior-weighted spectrum.
    RealVector instants(n);
    for (Index i = 0; i < n; ++i) instants[i] = static_cast<Real>(i) * tau / static_cast<Real>(n);
    RealVector k_values(m);
    for (Index i = 0; i < m; ++i) k_values[i] = static_cast<Real>(indices.at(i));
    ComplexMatrix v(n, m);
    for (Index r = 0; r < n; ++r)
        for (Index c = 0; c < m; ++c)
            v(r, c) = cis(two_pi * k_values[c] * instants[r] / tau);

    const RealVector h_tilde =
        prior_weighted_spectrum(shape, tau, indices, order, spec.amplitude_var);

    // LMMSE estimator of x from y = V B x + w per kernel, fixed noise_var.
    std::vector<ComplexMatrix> estimators;
    for (const auto& kernel : kernels) {
        const ComplexVector b = kernel.coefficients();
        ComplexMatrix vb      = v * b.asDiagonal();
        ComplexMatrix r_xx    = h_tilde.array().square().matrix().cast<Complex>().asDiagonal();
        ComplexMatrix r_yy    = vb * r_xx * vb.adjoint() +
                             spec.noise_var * ComplexMatrix::Identity(n, n);
        estimators.push_back(r_xx * vb.adjoint() * r_yy.inverse());
    }

    std::vector<KernelComparisonRow> rows;
    for (std::size_t ki = 0; ki < kernels.size(); ++ki) {
        for (Real snr : spec.snr_db_grid) {
            KernelComparisonRow row;
            row.kernel = spec.kernels[ki];
            row.snr_db = snr;
            rows.push_back(row);
        }
    }

    const std::size_t n_snr = spec.snr_db_grid.size();
    for (Index trial = 0; trial < spec.trials; ++trial) {
        GaussianSampler signal_rng(trial_seed(spec.seed, 1, static_cast<std::uint64_t>(trial)));
        GaussianSampler noise_rng(trial_seed(spec.seed, 2, static_cast<std::uint64_t>(trial)));

        // Matched signal: delays separated enough for stable rooting, unit
        // magnitudes for the delay metric.
        std::vector<Real> delays;
        while (true) {
            delays.clear();
            for (Index l = 0; l < order; ++l) delays.push_back(signal_rng.uniform(0.0, tau));
            std::vector<Real> s = delays;
            std::sort(s.begin(), s.end());
            Real min_gap = tau - (s.back() - s.front());
            for (std::size_t i = 1; i < s.size(); ++i)
                min_gap = std::min(min_gap, s[i] - s[i - 1]);
            if (order == 1 || min_gap > tau / (10.0 * static_cast<Real>(m))) break;
        }
        std::vector<Complex> amps;
        for (Index l = 0; l < order; ++l)
            amps.emplace_back(signal_rng.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0, 0.0);

        // Prior-faithful draw for the x-MSE check.
        RealVector t_prior(order);
        RealVector a_prior(order);
        for (Index l = 0; l < order; ++l) {
            t_prior[l] = signal_rng.uniform(0.0, tau);
            a_prior[l] = std::sqrt(spec.amplitude_var) * signal_rng();
        }
        ComplexVector x_model(m);
        for (Index i = 0; i < m; ++i) {
            Complex acc{0.0, 0.0};
            for (Index l = 0; l < order; ++l)
                acc += a_prior[l] * cis(-two_pi * k_values[i] * t_prior[l] / tau);
            x_model[i] = acc * shape.ctft(two_pi * k_values[i] / tau) / tau;
        }
        ComplexVector w_unit(n);
        for (Index i = 0; i < n; ++i)
            w_unit[i] = Complex{noise_rng(), noise_rng()} / std::sqrt(2.0);
        ComplexVector c_unit(n);
        for (Index i = 0; i < n; ++i) c_unit[i] = Complex{noise_rng(), noise_rng()} / std::sqrt(2.0);

        const PulseStream stream = PulseStream::periodic(shape, tau, delays, amps);

        for (std::size_t ki = 0; ki < kernels.size(); ++ki) {
            // x-MSE at the model noise level, matched noise draw.
            const ComplexVector y =
                v * (kernels[ki].coefficients().array() * x_model.array()).matrix() +
                std::sqrt(spec.noise_var) * w_unit;
            const ComplexVector x_hat = estimators[ki] * y;
            const Real x_mse          = (x_hat - x_model).squaredNorm();

            // Delay error through the full pipeline, per-kernel noise scale.
            AcquisitionConfig config(kernels[ki], n);
            const SampleSet clean = acquire(stream, config);
            const CoefficientSystem system =
                CoefficientSystem::build(config.kernel, shape, tau, clean.instants);

            for (std::size_t si = 0; si < n_snr; ++si) {
                const Real power =
                    clean.clean_values.squaredNorm() / static_cast<Real>(n);
                const Real sigma_n =
                    std::sqrt(power / std::pow(10.0, spec.snr_db_grid[si] / 10.0));
                SampleSet noisy  = clean;
                noisy.values     = clean.clean_values + sigma_n * c_unit;
                noisy.noise_sigma = sigma_n;
                noisy.snr_db      = spec.snr_db_grid[si];

                auto& row = rows[ki * n_snr + si];
                try {
                    const RecoveryResult rec = recover(noisy, system, order);
                    row.mean_delay_sq_err +=
                        sorted_delay_sq_err(delays, rec.delays) / static_cast<Real>(spec.trials);
                } catch (const std::exception&) {
                    row.mean_delay_sq_err += tau * tau / static_cast<Real>(spec.trials);
                }
                row.mean_x_mse += x_mse / static_cast<Real>(spec.trials);
            }
        }
    }
    return rows;
}

std::string kernel_choice_name(KernelChoice choice) {
    switch (choice) {
        case KernelChoice::Dirichlet: return "dirichlet";
        case KernelChoice::Hamming: return "hamming";
        case KernelChoice::Optimal: return "optimal";
    }
    return "unknown";
}

std::string scenario_name(Scenario scenario) {
    switch (scenario) {
        case Scenario::PeriodicDemo: return "periodic_demo";
        case Scenario::PeriodicNoisy: return "periodic_noisy";
        case Scenario::FiniteDemo: return "finite_demo";
        case Scenario::FiniteNoisy: return "finite_noisy";
        case Scenario::HighOrder: return "high_order";
        case Scenario::Oversampling: return "oversampling";
        case Scenario::InfiniteDemo: return "infinite_demo";
        case Scenario::Ultrasound: return "ultrasound";
    }
    return "unknown";
}

KernelChoice kernel_choice_from_name(const std::string& name) {
    if (name == "dirichlet") return KernelChoice::Dirichlet;
    if (name == "hamming") return KernelChoice::Hamming;
    if (name == "optimal") return KernelChoice::Optimal;
    throw std::invalid_argument("unknown kernel choice '" + name + "'");
}

Scenario scenario_from_name(const std::string& name) {
    if (name == "periodic_demo") return Scenario::PeriodicDemo;
    if (name == "periodic_noisy") return Scenario::PeriodicNoisy;
    if (name == "finite_demo") return Scenario::FiniteDemo;
    if (name == "finite_noisy") return Scenario::FiniteNoisy;
    if (name == "high_order") return Scenario::HighOrder;
    if (name == "oversampling") return Scenario::Oversampling;
    if (name == "infinite_demo") return Scenario::InfiniteDemo;
    if (name == "ultrasound") return Scenario::Ultrasound;
    throw std::invalid_argument("unknown scenario '" + name + "'");
}

ExperimentSpec spec_from_json_text(const std::string& text) {
    const nlohmann::json doc = nlohmann::json::parse(text);
    ExperimentSpec spec;
    spec.scenario = scenario_from_name(doc.at("scenario").get<std::string>());
    if (doc.contains("L")) spec.model_order = doc["L"].get<Index>();
    if (doc.contains("tau")) spec.tau = doc["tau"].get<Real>();
    if (doc.contains("k_half")) spec.k_half = doc["k_half"].get<Index>();
    if (doc.contains("N")) spec.n_samples = doc["N"].get<Index>();
    if (doc.contains("kernel"))
        spec.kernel = kernel_choice_from_name(doc["kernel"].get<std::string>());
    if (doc.contains("pulse")) spec.pulse = doc["pulse"].get<std::string>();
    if (doc.contains("sigma")) spec.sigma = doc["sigma"].get<Real>();
    if (doc.contains("delays")) spec.delays = doc["delays"].get<std::vector<Real>>();
    if (doc.contains("amplitudes"))
        spec.amplitudes = doc["amplitudes"].get<std::vector<Real>>();
    if (doc.contains("snr_db_grid"))
        spec.snr_db_grid = doc["snr_db_grid"].get<std::vector<Real>>();
    if (doc.contains("trials")) spec.trials = doc["trials"].get<Index>();
    if (doc.contains("seed")) spec.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("tls")) spec.tls = doc["tls"].get<bool>();
    if (doc.contains("cadzow_iterations"))
        spec.cadzow_iterations = doc["cadzow_iterations"].get<Index>();
    if (doc.contains("oversampling_factors"))
        spec.oversampling_factors = doc["oversampling_factors"].get<std::vector<Index>>();
    if (doc.contains("amplitude_var")) spec.amplitude_var = doc["amplitude_var"].get<Real>();
    if (doc.contains("bursts")) spec.bursts = doc["bursts"].get<Index>();
    if (doc.contains("sample_rate")) spec.sample_rate = doc["sample_rate"].get<Real>();
    if (doc.contains("carrier")) spec.carrier = doc["carrier"].get<Real>();
    if (doc.contains("sound_speed")) spec.sound_speed = doc["sound_speed"].get<Real>();
    if (doc.contains("threshold_fraction"))
        spec.threshold_fraction = doc["threshold_fraction"].get<Real>();
    if (doc.contains("ultrasound_sample_counts"))
        spec.ultrasound_sample_counts =
            doc["ultrasound_sample_counts"].get<std::vector<Index>>();
    return spec;
}

void write_csv(const ExperimentResult& result, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    out.precision(17);
    out << "snr_db,factor,n_samples,mean_delay_sq_err,mean_amp_sq_err,failures,trials,runtime_s\n";
    for (const auto& row : result.rows)
        out << row.snr_db << ',' << row.factor << ',' << row.n_samples << ','
            << row.mean_delay_sq_err << ',' << row.mean_amp_sq_err << ',' << row.failures << ','
            << row.trials << ',' << row.runtime_s << '\n';
}

void write_json(const ExperimentResult& result, const std::string& path) {
    nlohmann::json spec;
    const ExperimentSpec& s = result.spec;
    spec["scenario"]     = scenario_name(s.scenario);
    spec["L"]            = s.model_order;
    spec["tau"]          = s.tau;
    spec["k_half"]       = s.k_half;
    spec["N"]            = s.n_samples;
    spec["kernel"]       = kernel_choice_name(s.kernel);
    spec["pulse"]        = s.pulse;
    spec["sigma"]        = s.sigma;
    spec["delays"]       = s.delays;
    spec["amplitudes"]   = s.amplitudes;
    spec["snr_db_grid"]  = s.snr_db_grid;
    spec["trials"]       = s.trials;
    spec["seed"]         = s.seed;
    spec["tls"]          = s.tls;
    spec["cadzow_iterations"]    = s.cadzow_iterations;
    spec["oversampling_factors"] = s.oversampling_factors;
    spec["amplitude_var"] = s.amplitude_var;
    spec["bursts"]        = s.bursts;
    spec["sample_rate"]   = s.sample_rate;
    spec["carrier"]       = s.carrier;
    spec["sound_speed"]   = s.sound_speed;
    spec["threshold_fraction"]      = s.threshold_fraction;
    spec["ultrasound_sample_counts"] = s.ultrasound_sample_counts;

    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : result.rows) {
        nlohmann::json r;
        r["snr_db"]            = row.snr_db;
        r["factor"]            = row.factor;
        r["n_samples"]         = row.n_samples;
        r["mean_delay_sq_err"] = row.mean_delay_sq_err;
        r["mean_amp_sq_err"]   = row.mean_amp_sq_err;
        r["failures"]          = row.failures;
        r["trials"]            = row.trials;
        r["runtime_s"]         = row.runtime_s;
        rows.push_back(r);
    }

    nlohmann::json doc;
    doc["spec"] = spec;
    doc["rows"] = rows;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_json: cannot open " + path);
    out << doc.dump(2) << '\n';
}

}  // namespace sospulse
