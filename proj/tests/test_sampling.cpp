#include <doctest.h>

#include "sospulse/pulse_stream.hpp"
#include "sospulse/sampling.hpp"
#include "test_util.hpp"

using namespace sospulse;
using namespace sospulse::testing;

namespace {

// Eq.-chain oracle: c[n] = sum_k X[k] e^{j 2 pi k t_n / tau} S*(2 pi k/tau),
// built from the exact coefficients and the sifting values S(2 pi k / tau)
// = tau b_k of the SoS response.
ComplexVector fourier_sum_oracle(const PulseStream& periodic, const SosKernel& kernel,
                                 const RealVector& instants) {
    const Real tau = periodic.tau();
    const ComplexVector x = exact_fourier_coeffs(periodic, kernel.indices());
    ComplexVector c = ComplexVector::Zero(instants.size());
    for (Index n = 0; n < instants.size(); ++n)
        for (Index i = 0; i < kernel.indices().size(); ++i) {
            const Index k = kernel.indices().at(i);
            c[n] += x[i] * std::conj(tau * kernel.coefficients()[i]) *
                    cis(two_pi * static_cast<Real>(k) * instants[n] / tau);
        }
    return c;
}

}  // namespace

TEST_CASE("periodic Dirac samples match the Fourier-sum oracle") {
    const Real tau = 1.0;
    const auto stream = PulseStream::periodic(PulseShape::dirac(), tau, {tau / 3.0, 2.0 * tau / 3.0},
                                              {{1.0, 0.0}, {1.0, 0.0}});
    const auto kernel = SosKernel::dirichlet(tau, IndexSet::symmetric(2));

    AcquisitionConfig config(kernel, 5);
    const SampleSet samples = acquire(stream, config);
    CHECK(samples.meta.path == "analytic");
    CHECK(samples.real_valued);

    const ComplexVector oracle = fourier_sum_oracle(stream, kernel, samples.instants);
    CHECK((samples.clean_values - oracle).norm() < 1e-12 * oracle.norm());
}

TEST_CASE("zero-amplitude stream gives zero samples") {
    const auto stream = PulseStream::periodic(PulseShape::dirac(), 1.0, {0.2, 0.7},
                                              {{0.0, 0.0}, {0.0, 0.0}});
    const auto kernel = SosKernel::dirichlet(1.0, IndexSet::symmetric(3));
    const SampleSet samples = acquire(stream, AcquisitionConfig(kernel, 7));
    CHECK(samples.clean_values.norm() == 0.0);
}

TEST_CASE("finite Dirac stream through g_3p equals the periodized stream through g") {
    GaussianSampler rng(7);
    const Real tau = 1.0;
    const auto delays = random_separated_delays(rng, 5, tau, 0.02);
    const auto amps   = random_amplitudes(rng, 5, false);

    const auto finite   = PulseStream::finite(PulseShape::dirac(), tau, delays, amps);
    const auto periodic = PulseStream::periodic(PulseShape::dirac(), tau, delays, amps);

    const auto base = SosKernel::dirichlet(tau, IndexSet::symmetric(5));
    const auto g3p  = make_periodic_extension(base, 0.0);
    CHECK(g3p.replicas() == 1);

    const SampleSet via_g3p = acquire(finite, AcquisitionConfig(g3p, 11));
    const SampleSet via_g   = acquire(periodic, AcquisitionConfig(base, 11));
    CHECK((via_g3p.clean_values - via_g.clean_values).norm() < 1e-12 * via_g.clean_values.norm());
}

TEST_CASE("acquisition is linear in the stream") {
    GaussianSampler rng(19);
    const Real tau = 1.0;
    const auto d1  = random_separated_delays(rng, 3, tau, 0.05);
    const auto d2  = random_separated_delays(rng, 2, tau, 0.05);
    const auto a1  = random_amplitudes(rng, 3, true);
    const auto a2  = random_amplitudes(rng, 2, true);

    std::vector<Real> d12 = d1;
    d12.insert(d12.end(), d2.begin(), d2.end());
    std::vector<Complex> a12 = a1;
    a12.insert(a12.end(), a2.begin(), a2.end());

    const auto kernel = SosKernel::hamming(tau, IndexSet::symmetric(5));
    AcquisitionConfig config(kernel, 11);

    const auto c1 = acquire(PulseStream::periodic(PulseShape::dirac(), tau, d1, a1), config);
    const auto c2 = acquire(PulseStream::periodic(PulseShape::dirac(), tau, d2, a2), config);
    const auto c12 = acquire(PulseStream::periodic(PulseShape::dirac(), tau, d12, a12), config);

    const ComplexVector sum = c1.clean_values + c2.clean_values;
    CHECK((sum - c12.clean_values).norm() < 1e-12 * c12.clean_values.norm());
}

TEST_CASE("shift covariance of periodic acquisition") {
    GaussianSampler rng(23);
    const Real tau = 1.0, shift = 0.137;
    const auto delays = random_separated_delays(rng, 4, tau, 0.03);
    const auto amps   = random_amplitudes(rng, 4, false);

    std::vector<Real> shifted;
    for (Real t : delays) shifted.push_back(std::fmod(t + shift, tau));

    const auto shape  = PulseShape::gaussian(7e-3);
    const auto kernel = SosKernel::hamming(tau, IndexSet::symmetric(5));
    AcquisitionConfig config(kernel, 11);

    const SampleSet direct = acquire(PulseStream::periodic(shape, tau, shifted, amps), config);

    // Same samples predicted by multiplying X[k] by the phase ramp.
    const auto original = PulseStream::periodic(shape, tau, delays, amps);
    const ComplexVector x = exact_fourier_coeffs(original, kernel.indices());
    ComplexVector predicted = ComplexVector::Zero(11);
    for (Index n = 0; n < 11; ++n)
        for (Index i = 0; i < kernel.indices().size(); ++i) {
            const Index k = kernel.indices().at(i);
            predicted[n] += x[i] * cis(-two_pi * static_cast<Real>(k) * shift / tau) *
                            std::conj(tau * kernel.coefficients()[i]) *
                            cis(two_pi * static_cast<Real>(k) * direct.instants[n] / tau);
        }
    CHECK((direct.clean_values - predicted).norm() < 1e-9 * predicted.norm());
}

TEST_CASE("analytic and quadrature paths agree for Gaussian pulses") {
    GaussianSampler rng(31);
    const Real tau = 1.0, sigma = 0.05;
    const auto delays = random_separated_delays(rng, 3, tau, 0.12);
    // Keep pulses clear of the window edges so the kernel-edge cells stay
    // smooth for the trapezoid comparison.
    std::vector<Real> safe;
    for (Real t : delays) safe.push_back(0.25 + 0.5 * t);
    const auto amps = random_amplitudes(rng, 3, false);

    SUBCASE("periodic stream with the base kernel") {
        const auto stream = PulseStream::periodic(PulseShape::gaussian(sigma), tau, safe, amps);
        const auto kernel = SosKernel::hamming(tau, IndexSet::symmetric(5));

        AcquisitionConfig analytic(kernel, 11);
        analytic.path = AcquisitionPath::Analytic;
        AcquisitionConfig quad(kernel, 11);
        quad.path        = AcquisitionPath::Quadrature;
        quad.grid_factor = 1000;

        const SampleSet a = acquire(stream, analytic);
        const SampleSet q = acquire(stream, quad);
        CHECK(q.meta.path == "quadrature");
        CHECK((a.clean_values - q.clean_values).norm() < 1e-6 * a.clean_values.norm());
    }

    SUBCASE("finite stream with g_3p") {
        const auto stream = PulseStream::finite(PulseShape::gaussian(sigma), tau, safe, amps);
        const auto g3p =
            make_periodic_extension(SosKernel::hamming(tau, IndexSet::symmetric(5)), 8.0 * sigma);

        AcquisitionConfig analytic(g3p, 11);
        analytic.path = AcquisitionPath::Analytic;
        AcquisitionConfig quad(g3p, 11);
        quad.path        = AcquisitionPath::Quadrature;
        quad.grid_factor = 1000;

        const SampleSet a = acquire(stream, analytic);
        const SampleSet q = acquire(stream, quad);
        CHECK((a.clean_values - q.clean_values).norm() < 1e-6 * a.clean_values.norm());
    }
}

TEST_CASE("lowpass kernel reproduces the SoS samples on the same index set") {
    // With all values of S on K equal, both kernels produce proportional
    // samples; the Dirichlet SoS and the ideal lowpass coincide exactly.
    const Real tau = 1.0;
    const auto stream = PulseStream::periodic(PulseShape::dirac(), tau, {tau / 3.0, 2.0 * tau / 3.0},
                                              {{1.0, 0.0}, {1.0, 0.0}});
    const auto sos = SosKernel::dirichlet(tau, IndexSet::symmetric(2));
    const LowpassKernel lp(5.0, 30.0 * tau);  // B = M / tau

    const SampleSet c_sos = acquire(stream, AcquisitionConfig(sos, 5));
    const SampleSet c_lp  = acquire(stream, AcquisitionConfig(lp, 5));
    // S values: tau/sqrt(2pi) per index for the SoS, 1/sqrt(2pi) for the
    // lowpass; with tau = 1 the samples match exactly.
    CHECK((c_sos.clean_values - c_lp.clean_values).norm() < 1e-10 * c_sos.clean_values.norm());
}

TEST_CASE("nonuniform instants are accepted and recorded") {
    const auto stream = PulseStream::periodic(PulseShape::dirac(), 1.0, {0.3}, {{1.0, 0.0}});
    const auto kernel = SosKernel::dirichlet(1.0, IndexSet::symmetric(1));
    AcquisitionConfig config(kernel);
    config.instants = {0.0, 0.21, 0.55};
    const SampleSet samples = acquire(stream, config);
    CHECK(samples.instants.size() == 3);
    CHECK(samples.instants[1] == doctest::Approx(0.21));
}

TEST_CASE("burst spacing precondition") {
    const Real tau = 1.0;
    const auto base = SosKernel::dirichlet(tau, IndexSet::symmetric(5));
    const auto g3p  = make_periodic_extension(base, 0.0);

    // Quiet gap of 1.6 tau passes; 1.4 tau violates the 3 tau / 2 bound.
    const auto ok = PulseStream::bursty(PulseShape::dirac(), tau, {0.2, 0.3 + 2.6},
                                        {{1.0, 0.0}, {1.0, 0.0}}, {0.0, 2.6});
    CHECK_NOTHROW(acquire(ok, AcquisitionConfig(g3p, 11)));

    const auto bad = PulseStream::bursty(PulseShape::dirac(), tau, {0.2, 0.3 + 2.4},
                                         {{1.0, 0.0}, {1.0, 0.0}}, {0.0, 2.4});
    CHECK_THROWS(acquire(bad, AcquisitionConfig(g3p, 11)));
}

TEST_CASE("in-burst samples are blind to a deleted compliant neighbor") {
    const Real tau = 1.0;
    const auto base = SosKernel::dirichlet(tau, IndexSet::symmetric(5));
    const auto g3p  = make_periodic_extension(base, 0.0);

    const Real second_start = tau + 1.5 * tau + 1e-3;  // just past the threshold
    const auto both = PulseStream::bursty(PulseShape::dirac(), tau,
                                          {0.21, 0.64, second_start + 0.4},
                                          {{1.0, 0.0}, {-0.5, 0.0}, {2.0, 0.0}},
                                          {0.0, second_start});
    const auto first_only =
        PulseStream::finite(PulseShape::dirac(), tau, {0.21, 0.64}, {{1.0, 0.0}, {-0.5, 0.0}});

    AcquisitionConfig config(g3p, 11);
    const SampleSet with_neighbor = acquire(both, config);
    const SampleSet alone         = acquire(first_only, config);
    CHECK((with_neighbor.clean_values - alone.clean_values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("kernel and stream kinds must match") {
    const Real tau = 1.0;
    const auto base = SosKernel::dirichlet(tau, IndexSet::symmetric(2));
    const auto ext  = make_periodic_extension(base, 0.0);

    const auto periodic = PulseStream::periodic(PulseShape::dirac(), tau, {0.5}, {{1.0, 0.0}});
    CHECK_THROWS(acquire(periodic, AcquisitionConfig(ext, 5)));

    const auto finite = PulseStream::finite(PulseShape::dirac(), tau, {0.5}, {{1.0, 0.0}});
    CHECK_THROWS(acquire(finite, AcquisitionConfig(base, 5)));

    // Too few replicas for a wide pulse (R = 4.8 tau needs r = 3).
    const auto wide = PulseStream::finite(PulseShape::gaussian(0.3), tau, {0.5}, {{1.0, 0.0}});
    CHECK_THROWS(acquire(wide, AcquisitionConfig(ext, 5)));

    // Finite instants outside [0, tau).
    AcquisitionConfig bad(ext, 5);
    bad.window_start = 0.5;
    CHECK_THROWS(acquire(finite, bad));

    // Coarse quadrature grid is rejected.
    const auto gauss = PulseStream::finite(PulseShape::gaussian(0.01), tau, {0.5}, {{1.0, 0.0}});
    AcquisitionConfig coarse(make_periodic_extension(base, 0.08), 5);
    coarse.path        = AcquisitionPath::Quadrature;
    coarse.grid_factor = 10;
    CHECK_THROWS(acquire(gauss, coarse));
}

TEST_CASE("noise calibration") {
    GaussianSampler rng(43);
    const auto stream = PulseStream::periodic(PulseShape::dirac(), 1.0, {1.0 / 3.0, 2.0 / 3.0},
                                              {{1.0, 0.0}, {1.0, 0.0}});
    const auto kernel = SosKernel::dirichlet(1.0, IndexSet::symmetric(2));
    const SampleSet clean = acquire(stream, AcquisitionConfig(kernel, 5));

    SUBCASE("infinite SNR leaves samples untouched") {
        const SampleSet s = add_noise(clean, std::numeric_limits<Real>::infinity(), 99);
        CHECK((s.values - clean.clean_values).norm() == 0.0);
        CHECK(s.noise_sigma == 0.0);
    }

    SUBCASE("0 dB sets the noise variance to the per-sample power") {
        const Real power = clean.clean_values.squaredNorm() / 5.0;
        const SampleSet s = add_noise(clean, 0.0, 99);
        CHECK(s.noise_sigma * s.noise_sigma == doctest::Approx(power).epsilon(1e-12));
    }

    SUBCASE("empirical SNR over many draws within 0.1 dB of target") {
        const Real target_db = 13.0;
        Real noise_power = 0.0;
        const Index draws = 20000;
        for (Index d = 0; d < draws; ++d) {
            const SampleSet s = add_noise(clean, target_db, 1000 + d);
            noise_power += (s.values - s.clean_values).squaredNorm() / 5.0;
        }
        noise_power /= static_cast<Real>(draws);
        const Real power = clean.clean_values.squaredNorm() / 5.0;
        const Real est_db = 10.0 * std::log10(power / noise_power);
        CHECK(std::abs(est_db - target_db) < 0.1);
    }

    SUBCASE("real samples get real noise, complex get complex") {
        const SampleSet s = add_noise(clean, 10.0, 7);
        CHECK(clean.real_valued);
        for (Index i = 0; i < s.values.size(); ++i)
            CHECK((s.values[i] - s.clean_values[i]).imag() == 0.0);

        // Complex-valued kernel makes the samples complex.
        ComplexVector b = ComplexVector::Ones(4);
        const SosKernel asym(1.0, IndexSet(-2, 1), b);
        const SampleSet c2 = acquire(stream, AcquisitionConfig(asym, 5));
        CHECK_FALSE(c2.real_valued);
        const SampleSet s2 = add_noise(c2, 10.0, 7);
        Real max_imag = 0.0;
        for (Index i = 0; i < s2.values.size(); ++i)
            max_imag = std::max(max_imag, std::abs((s2.values[i] - s2.clean_values[i]).imag()));
        CHECK(max_imag > 0.0);
    }
}
