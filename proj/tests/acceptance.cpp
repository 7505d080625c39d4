// Acceptance suite: one pass/fail line per criterion, exit code equals the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "sospulse/burst.hpp"
#include "sospulse/experiment.hpp"
#include "sospulse/pulse_stream.hpp"
#include "sospulse/recovery.hpp"
#include "sospulse/sampling.hpp"
#include "sospulse/ultrasound.hpp"
#include "sospulse/waterfilling.hpp"
#include "test_util.hpp"
#include "waterfilling_oracle.hpp"

using namespace sospulse;
using namespace sospulse::testing;

namespace {

int g_failures = 0;

std::string fmt(Real v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}


void criterion(int number, const std::string& name, const std::function<bool(std::string&)>& fn) {
    std::string detail;
    bool ok = false;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        ok = fn(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const Real seconds =
        std::chrono::duration<Real>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %2d [%6.2fs] %s%s%s\n", ok ? "PASS" : "FAIL", number, seconds,
                name.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++g_failures;
}

struct ExactRun {
    Real delay_err = 0.0;
    Real amp_err = 0.0;
};

ExactRun run_periodic_gaussian_demo() {
    GaussianSampler rng(2024);
    const Real tau = 1.0, sigma = 7e-3;
    const auto delays = random_separated_delays(rng, 5, tau, 0.02);
    const auto amps   = random_amplitudes(rng, 5, false);
    const auto stream = PulseStream::periodic(PulseShape::gaussian(sigma), tau, delays, amps);
    const auto kernel = SosKernel::hamming(tau, IndexSet::symmetric(5));

    const SampleSet samples = acquire(stream, AcquisitionConfig(kernel, 11));
    const auto system =
        CoefficientSystem::build(kernel, PulseShape::gaussian(sigma), tau, samples.instants);
    const auto result = recover(samples, system, 5);

    Real max_amp = 0.0;
    for (const auto& a : amps) max_amp = std::max(max_amp, std::abs(a));
    return {max_delay_error(delays, result.delays) / tau,
            max_amplitude_error(delays, amps, result.delays, result.amplitudes) / max_amp};
}

ExactRun run_finite_dirac_demo(Index order, GaussianSampler& rng) {
    const Real tau = 1.0;
    const auto delays = random_separated_delays(rng, order, tau,
                                                tau / (4.0 * static_cast<Real>(order)));
    const auto amps   = random_amplitudes(rng, order, false);
    const auto stream = PulseStream::finite(PulseShape::dirac(), tau, delays, amps);
    const auto g3p =
        make_periodic_extension(SosKernel::dirichlet(tau, IndexSet::symmetric(order)), 0.0);

    const SampleSet samples = acquire(stream, AcquisitionConfig(g3p, 2 * order + 1));
    const auto system = CoefficientSystem::build(g3p, PulseShape::dirac(), tau, samples.instants);
    const auto result = recover(samples, system, order);

    Real max_amp = 0.0;
    for (const auto& a : amps) max_amp = std::max(max_amp, std::abs(a));
    return {max_delay_error(delays, result.delays) / tau,
            max_amplitude_error(delays, amps, result.delays, result.amplitudes) / max_amp};
}

}  // namespace

int main() {
    criterion(1, "noiseless periodic exactness (L=5 Gaussian, Hamming, N=M=11)", [](std::string& d) {
        const auto t0 = std::chrono::steady_clock::now();
        const ExactRun r = run_periodic_gaussian_demo();
        const Real secs =
            std::chrono::duration<Real>(std::chrono::steady_clock::now() - t0).count();
        d = "delay err " + fmt(r.delay_err) + ", amp err " + fmt(r.amp_err);
        return r.delay_err < 1e-7 && r.amp_err < 1e-7 && secs < 1.0;
    });

    criterion(2, "noiseless finite exactness (L=5 and L=20 Dirac, g_3p, b=1)", [](std::string& d) {
        const auto t0 = std::chrono::steady_clock::now();
        GaussianSampler rng(77);
        const ExactRun r5  = run_finite_dirac_demo(5, rng);
        const ExactRun r20 = run_finite_dirac_demo(20, rng);
        const Real secs =
            std::chrono::duration<Real>(std::chrono::steady_clock::now() - t0).count();
        d = "L=5 err " + fmt(r5.delay_err) + ", L=20 err " +
            fmt(r20.delay_err);
        return r5.delay_err < 1e-7 && r5.amp_err < 1e-7 && r20.delay_err < 1e-7 &&
               r20.amp_err < 1e-7 && secs < 5.0;
    });

    criterion(3, "high-order stability (L=100 Dirac finite, N=201)", [](std::string& d) {
        const auto t0  = std::chrono::steady_clock::now();
        const Real tau = 1.0;
        const Index order = 100;
        std::vector<Real> delays;
        std::vector<Complex> amps;
        for (Index l = 0; l < order; ++l) {
            delays.push_back((2.0 * static_cast<Real>(l) + 1.0) * tau /
                             (2.0 * static_cast<Real>(order)));
            amps.emplace_back(1.0, 0.0);
        }
        const auto stream = PulseStream::finite(PulseShape::dirac(), tau, delays, amps);
        const auto g3p =
            make_periodic_extension(SosKernel::dirichlet(tau, IndexSet::symmetric(order)), 0.0);
        const SampleSet samples = acquire(stream, AcquisitionConfig(g3p, 201));
        const auto system =
            CoefficientSystem::build(g3p, PulseShape::dirac(), tau, samples.instants);
        const auto result = recover(samples, system, order);
        const Real err    = max_delay_error(delays, result.delays);
        const Real secs =
            std::chrono::duration<Real>(std::chrono::steady_clock::now() - t0).count();
        d = "delay err " + fmt(err) + " tau, " + fmt(secs) + "s";
        return err < 1e-6 * tau && secs < 60.0;
    });

    criterion(4, "waterfilling correctness vs convex oracle (100 instances)", [](std::string& d) {
        GaussianSampler rng(4242);
        Real worst_gap = 0.0, worst_sum = 0.0, worst_kkt = 0.0;
        for (int rep = 0; rep < 100; ++rep) {
            const Index m = 2 + static_cast<Index>(rng.uniform(0.0, 18.0));
            RealVector h(m);
            for (Index i = 0; i < m; ++i) h[i] = std::pow(10.0, rng.uniform(-1.0, 0.6));
            const Real noise_var = std::pow(10.0, rng.uniform(-3.0, 0.0));
            const Index n        = 1 + static_cast<Index>(rng.uniform(0.0, 63.0));

            const auto result = waterfilling(h, noise_var, n);
            if (result.beta.minCoeff() < 0.0) return false;
            worst_sum = std::max(worst_sum, std::abs(result.beta.sum() - 1.0));
            worst_kkt = std::max(worst_kkt, result.kkt_residual);
            const RealVector oracle = pg_waterfilling_oracle(h, noise_var, n, 20000);
            worst_gap = std::max(worst_gap, (result.beta - oracle).cwiseAbs().maxCoeff());
        }
        // Flat spectrum returns exactly 1/M.
        const auto flat = waterfilling(RealVector::Constant(11, 0.5), 1e-2, 11);
        bool exact_flat = true;
        for (Index i = 0; i < 11; ++i) exact_flat = exact_flat && flat.beta[i] == 1.0 / 11.0;
        d = "max oracle gap " + fmt(worst_gap) + ", max |sum-1| " +
            fmt(worst_sum) + ", max KKT " + fmt(worst_kkt);
        return worst_gap < 1e-6 && worst_sum < 1e-10 && worst_kkt < 1e-8 && exact_flat;
    });

    criterion(5, "finite g_r samples equal periodized g samples (100 streams)", [](std::string& d) {
        GaussianSampler rng(555);
        Real worst = 0.0;
        for (int rep = 0; rep < 100; ++rep) {
            const Real tau    = 0.5 + rng.uniform(0.0, 2.0);
            const Index order = 1 + static_cast<Index>(rng.uniform(0.0, 5.0));
            const Index k_half = order + 1;
            const Index n      = 2 * k_half + 1;
            const bool dirac   = rep % 2 == 0;
            const auto shape =
                dirac ? PulseShape::dirac() : PulseShape::gaussian(tau * (0.01 + 0.01 * rng.uniform(0.0, 1.0)));
            const auto delays = random_separated_delays(rng, order, tau, tau / 50.0);
            const auto amps   = random_amplitudes(rng, order, false);

            const auto finite   = PulseStream::finite(shape, tau, delays, amps);
            const auto periodic = PulseStream::periodic(shape, tau, delays, amps);
            const auto base = SosKernel::hamming(tau, IndexSet::symmetric(k_half));
            const auto gr   = make_periodic_extension(base, shape.support());

            AcquisitionConfig via_gr(gr, n);
            AcquisitionConfig via_g(base, n);
            if (!dirac) {
                // Matched fine grids (dt divides tau) make the periodization
                // identity hold term by term in the quadrature sums.
                via_gr.path = AcquisitionPath::Quadrature;
                via_g.path  = AcquisitionPath::Quadrature;
                via_gr.grid_factor = 1000;
                via_g.grid_factor  = 1000;
            }
            const SampleSet a = acquire(finite, via_gr);
            const SampleSet b = acquire(periodic, via_g);
            worst = std::max(worst,
                             (a.clean_values - b.clean_values).norm() / b.clean_values.norm());
        }
        d = "worst relative gap " + fmt(worst);
        return worst < 1e-9;
    });

    criterion(6, "DFT fast path equals the pseudo-inverse path", [](std::string& d) {
        GaussianSampler rng(66);
        Real worst = 0.0;
        for (int rep = 0; rep < 50; ++rep) {
            const Real tau    = 0.5 + rng.uniform(0.0, 2.0);
            const Index order = 1 + static_cast<Index>(rng.uniform(0.0, 4.0));
            const Index m     = 2 * (order + static_cast<Index>(rng.uniform(0.0, 3.0))) + 1;
            const auto delays = random_separated_delays(rng, order, tau, tau / 40.0);
            const auto amps   = random_amplitudes(rng, order, rep % 3 == 0);
            const auto stream = PulseStream::periodic(PulseShape::dirac(), tau, delays, amps);
            const auto kernel = SosKernel::hamming(tau, IndexSet::symmetric((m - 1) / 2));

            SampleSet samples = acquire(stream, AcquisitionConfig(kernel, m));
            samples = add_noise(samples, 20.0, 1000 + rep);  // both paths see the same data
            const auto system =
                CoefficientSystem::build(kernel, PulseShape::dirac(), tau, samples.instants);
            const auto a = extract_coefficients(samples.values, system, ExtractionPath::General);
            const auto b = extract_coefficients(samples.values, system, ExtractionPath::Dft);
            worst = std::max(worst, (a.x - b.x).norm() / a.x.norm());
        }
        d = "worst relative gap " + fmt(worst);
        return worst < 1e-10;
    });

    criterion(7, "burst isolation and spacing validation", [](std::string& d) {
        const Real tau = 1.0;
        const auto g3p =
            make_periodic_extension(SosKernel::dirichlet(tau, IndexSet::symmetric(5)), 0.0);

        const Real second = tau + 1.5 * tau + 1e-6;
        const auto both = PulseStream::bursty(PulseShape::dirac(), tau,
                                              {0.13, 0.71, second + 0.5},
                                              {{1.0, 0.0}, {2.0, 0.0}, {-3.0, 0.0}},
                                              {0.0, second});
        const auto alone =
            PulseStream::finite(PulseShape::dirac(), tau, {0.13, 0.71}, {{1.0, 0.0}, {2.0, 0.0}});
        const SampleSet with_neighbor = acquire(both, AcquisitionConfig(g3p, 11));
        const SampleSet isolated      = acquire(alone, AcquisitionConfig(g3p, 11));
        const Real gap = (with_neighbor.clean_values - isolated.clean_values).cwiseAbs().maxCoeff();

        bool rejected = false;
        try {
            const auto bad = PulseStream::bursty(PulseShape::dirac(), tau, {0.13, 2.5},
                                                 {{1.0, 0.0}, {1.0, 0.0}}, {0.0, 2.4});
            acquire(bad, AcquisitionConfig(g3p, 11));
        } catch (const std::invalid_argument&) {
            rejected = true;
        }
        const auto bad_plan = PulseStream::bursty(PulseShape::dirac(), tau, {0.13, 2.5},
                                                  {{1.0, 0.0}, {1.0, 0.0}}, {0.0, 2.4});
        const bool validator_fails = !validate_plan(bad_plan, g3p).pass;

        d = "max in-burst change " + fmt(gap);
        return gap < 1e-12 && rejected && validator_fails;
    });

    criterion(8, "noise trends: SNR sweep decreasing, oversampling non-increasing",
              [](std::string& d) {
        ExperimentSpec sweep;
        sweep.scenario    = Scenario::PeriodicNoisy;
        sweep.snr_db_grid = {5, 10, 15, 20, 25, 30};
        sweep.trials      = 1000;
        sweep.seed        = 0x5eed0001;
        const auto sweep_result = run(sweep);
        bool decreasing = true;
        for (std::size_t i = 1; i < sweep_result.rows.size(); ++i)
            decreasing = decreasing && sweep_result.rows[i].mean_delay_sq_err <
                                           sweep_result.rows[i - 1].mean_delay_sq_err;

        ExperimentSpec over;
        over.scenario             = Scenario::Oversampling;
        over.snr_db_grid          = {5, 10, 15, 20, 25, 30};
        over.trials               = 1000;
        over.seed                 = 0x5eed0002;
        over.oversampling_factors = {1, 2, 4, 8};
        const auto over_result = run(over);
        // Rows are ordered factor-major; compare per SNR across factors.
        const std::size_t n_snr = over.snr_db_grid.size();
        bool non_increasing = true;
        for (std::size_t f = 1; f < 4; ++f)
            for (std::size_t s = 0; s < n_snr; ++s)
                non_increasing = non_increasing &&
                                 over_result.rows[f * n_snr + s].mean_delay_sq_err <=
                                     over_result.rows[(f - 1) * n_snr + s].mean_delay_sq_err;

        d = "sweep err " + fmt(sweep_result.rows.front().mean_delay_sq_err) + " -> " +
            fmt(sweep_result.rows.back().mean_delay_sq_err);
        return decreasing && non_increasing;
    });

    criterion(9, "ultrasound surrogate: 4 scatterers within 0.5 mm at 20 dB", [](std::string& d) {
        const Real f_s = 20e6, f_c = 1.7021e6, sigma = 3e-7, tau = 2.08e-4, c_sound = 1550.0;
        const std::vector<Scatterer> phantom = {
            {0.2 * tau, 1.0}, {0.4 * tau, 0.9}, {0.6 * tau, 1.1}, {0.8 * tau, 0.8}};
        std::vector<Real> truth;
        for (const auto& s : phantom) truth.push_back(s.delay);

        Real worst_mm = 0.0;
        bool rates_ok = true, counts_ok = true;
        int config_index = 0;
        for (const auto& [n_low, threshold] : std::vector<std::pair<Index, Real>>{
                 {17, 0.1}, {33, 0.0}}) {
            const auto record = synthesize_channel(phantom, f_s, f_c, sigma, tau, c_sound, 20.0,
                                                   42 + config_index++);
            counts_ok = counts_ok && record.samples.size() == 4160;
            UltrasoundOptions options;
            options.n_samples          = n_low;
            options.model_order        = 4;
            options.threshold_fraction = threshold;
            const auto result = process_channel(record, options);
            rates_ok = rates_ok && result.rate_reduction >= 100.0;
            if (result.recovery.delays.size() != truth.size()) return false;
            const Real err_mm =
                max_delay_error(truth, result.recovery.delays) * c_sound / 2.0 * 1e3;
            worst_mm = std::max(worst_mm, err_mm);
        }
        d = "worst localization " + fmt(worst_mm) + " mm";
        return worst_mm <= 0.5 && rates_ok && counts_ok;
    });

    criterion(10, "property suites: 500 round trips plus module invariants", [](std::string& d) {
        GaussianSampler rng(101);
        Real worst_delay = 0.0, worst_amp = 0.0, worst_modulus = 0.0;
        for (int rep = 0; rep < 500; ++rep) {
            const Real tau = 0.5 + rng.uniform(0.0, 2.0);
            const Index order = 1 + static_cast<Index>(rng.uniform(0.0, 7.0));
            const Index k_half = order + static_cast<Index>(rng.uniform(0.0, 3.0));
            const Index m      = 2 * k_half + 1;
            const Index n      = m + static_cast<Index>(rng.uniform(0.0, 6.0));
            const auto delays  = random_separated_delays(rng, order, tau,
                                                         tau / (10.0 * static_cast<Real>(m)));
            const auto amps    = random_amplitudes(rng, order, rng.uniform(0.0, 1.0) < 0.3);
            const bool dirac   = rng.uniform(0.0, 1.0) < 0.5;
            const bool finite  = rng.uniform(0.0, 1.0) < 0.5;
            const auto shape   = dirac ? PulseShape::dirac() : PulseShape::gaussian(5e-3 * tau);
            const auto stream  = finite ? PulseStream::finite(shape, tau, delays, amps)
                                        : PulseStream::periodic(shape, tau, delays, amps);
            const auto base = rng.uniform(0.0, 1.0) < 0.5
                                  ? SosKernel::dirichlet(tau, IndexSet::symmetric(k_half))
                                  : SosKernel::hamming(tau, IndexSet::symmetric(k_half));
            const Kernel kernel =
                finite ? Kernel{make_periodic_extension(base, shape.support())} : Kernel{base};

            const SampleSet samples = acquire(stream, AcquisitionConfig(kernel, n));
            const auto system = CoefficientSystem::build(kernel, shape, tau, samples.instants);
            const auto result = recover(samples, system, order);

            Real max_amp = 0.0;
            for (const auto& a : amps) max_amp = std::max(max_amp, std::abs(a));
            worst_delay = std::max(worst_delay, max_delay_error(delays, result.delays) / tau);
            worst_amp   = std::max(worst_amp, max_amplitude_error(delays, amps, result.delays,
                                                                  result.amplitudes) / max_amp);
            for (Index i = 0; i < result.annihilator.root_moduli.size(); ++i)
                worst_modulus =
                    std::max(worst_modulus, std::abs(result.annihilator.root_moduli[i] - 1.0));
        }
        const bool roundtrip_ok = worst_delay < 1e-7 && worst_amp < 1e-7 && worst_modulus < 1e-8;

        // Conjugate symmetry of real streams.
        bool symmetry_ok = true;
        for (int rep = 0; rep < 100; ++rep) {
            const Real tau    = 0.5 + rng.uniform(0.0, 2.0);
            const Index order = 1 + static_cast<Index>(rng.uniform(0.0, 4.0));
            const auto delays = random_separated_delays(rng, order, tau, tau / 60.0);
            const auto amps   = random_amplitudes(rng, order, false);
            const auto shape  = rep % 2 == 0 ? PulseShape::dirac() : PulseShape::gaussian(0.01 * tau);
            const auto stream = PulseStream::periodic(shape, tau, delays, amps);
            const IndexSet indices = IndexSet::symmetric(5);
            const ComplexVector x  = exact_fourier_coeffs(stream, indices);
            for (Index k = 0; k <= 5; ++k)
                symmetry_ok = symmetry_ok &&
                              std::abs(x[indices.position(k)] -
                                       std::conj(x[indices.position(-k)])) < 1e-12 * x.norm();
        }

        // Linearity and shift covariance of the coefficient map.
        bool linear_ok = true, shift_ok = true;
        {
            const Real tau = 1.0;
            const IndexSet indices = IndexSet::symmetric(6);
            const auto d1 = random_separated_delays(rng, 3, tau, 0.02);
            const auto d2 = random_separated_delays(rng, 2, tau, 0.02);
            const auto a1 = random_amplitudes(rng, 3, true);
            const auto a2 = random_amplitudes(rng, 2, true);
            const auto shape = PulseShape::gaussian(7e-3);
            std::vector<Real> d12 = d1;
            d12.insert(d12.end(), d2.begin(), d2.end());
            std::vector<Complex> a12 = a1;
            a12.insert(a12.end(), a2.begin(), a2.end());
            const ComplexVector sum =
                exact_fourier_coeffs(PulseStream::periodic(shape, tau, d1, a1), indices) +
                exact_fourier_coeffs(PulseStream::periodic(shape, tau, d2, a2), indices);
            const ComplexVector joint =
                exact_fourier_coeffs(PulseStream::periodic(shape, tau, d12, a12), indices);
            linear_ok = (sum - joint).norm() < 1e-12 * joint.norm();

            const Real shift = 0.2345;
            std::vector<Real> shifted;
            for (Real t : d1) shifted.push_back(std::fmod(t + shift, tau));
            const ComplexVector xs = exact_fourier_coeffs(
                PulseStream::periodic(shape, tau, shifted, a1), indices);
            const ComplexVector x0 =
                exact_fourier_coeffs(PulseStream::periodic(shape, tau, d1, a1), indices);
            for (Index i = 0; i < indices.size(); ++i) {
                const Complex want =
                    x0[i] * cis(-two_pi * static_cast<Real>(indices.at(i)) * shift / tau);
                shift_ok = shift_ok && std::abs(xs[i] - want) < 1e-11 * x0.norm();
            }
        }

        d = "worst round-trip delay err " + fmt(worst_delay) + " tau, root modulus " +
            fmt(worst_modulus);
        return roundtrip_ok && symmetry_ok && linear_ok && shift_ok;
    });

    std::printf("%d/10 criteria passed\n", 10 - g_failures);
    return g_failures;
}
