#include <doctest.h>

#include "sospulse/sos_kernel.hpp"
#include "sospulse/rng.hpp"

using namespace sospulse;

namespace {

// Simpson quadrature of the kernel transform over its support, in the same
// normalized convention as eval_freq (1/sqrt(2 pi) times the plain CTFT).
Complex kernel_ctft_quadrature(const SosKernel& kernel, Real omega, Index cells) {
    const Real half = 0.5 * kernel.tau();
    const Real dt   = 2.0 * half / static_cast<Real>(cells);
    Complex acc{0.0, 0.0};
    for (Index i = 0; i <= cells; ++i) {
        const Real t = -half + static_cast<Real>(i) * dt;
        const Real w = (i == 0 || i == cells) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        acc += w * kernel.exp_sum(t) * cis(-omega * t);
    }
    return acc * dt / 3.0 / std::sqrt(two_pi);
}

}  // namespace

TEST_CASE("Dirichlet kernel peak and support") {
    const auto g = SosKernel::dirichlet(1.0, IndexSet::symmetric(10));
    CHECK(g.eval_time(0.0).real() == doctest::Approx(21.0));  // D_p(0) = 2p+1
    CHECK(g.eval_time(0.7).real() == 0.0);
    CHECK(g.eval_time(0.7).imag() == 0.0);
    CHECK(g.eval_time(-0.5) != Complex{0.0, 0.0});  // left edge inside [-tau/2, tau/2)
    CHECK(g.eval_time(0.5) == Complex{0.0, 0.0});   // right edge outside
    CHECK(g.support() == 1.0);
}

TEST_CASE("Hamming coefficients are symmetric and sum at t=0") {
    const IndexSet indices = IndexSet::symmetric(5);
    const auto g = SosKernel::hamming(1.0, indices);
    for (Index k = 1; k <= 5; ++k)
        CHECK(std::abs(g.coefficient(k) - std::conj(g.coefficient(-k))) < 1e-15);
    CHECK(g.coefficient(-5).real() == doctest::Approx(0.08));
    CHECK(g.coefficient(0).real() == doctest::Approx(1.0));
    CHECK(g.is_real());

    Complex direct{0.0, 0.0};
    for (Index i = 0; i < indices.size(); ++i) direct += g.coefficients()[i];
    CHECK(std::abs(g.eval_time(0.0) - direct) < 1e-12);
}

TEST_CASE("real kernels have negligible imaginary part") {
    GaussianSampler rng(5);
    const auto g = SosKernel::hamming(1.0, IndexSet::symmetric(5));
    Real peak = 0.0;
    for (int i = 0; i < 200; ++i)
        peak = std::max(peak, std::abs(g.eval_time(rng.uniform(-0.5, 0.5))));
    for (int i = 0; i < 200; ++i) {
        const Complex v = g.eval_time(rng.uniform(-0.5, 0.5));
        CHECK(std::abs(v.imag()) < 1e-12 * peak);
    }
}

TEST_CASE("frequency response sifts the coefficients") {
    const IndexSet indices = IndexSet::symmetric(2);
    const auto g = SosKernel::dirichlet(1.0, indices);
    const Real scale = 1.0 / std::sqrt(two_pi);
    CHECK(std::abs(g.eval_freq(two_pi * 1.0) - Complex{scale, 0.0}) < 1e-14);
    CHECK(std::abs(g.eval_freq(two_pi * 7.0)) < 1e-14);

    const auto h = SosKernel::hamming(1.0, IndexSet::symmetric(5));
    for (Index k = -5; k <= 5; ++k)
        CHECK(std::abs(h.eval_freq(two_pi * static_cast<Real>(k)) - scale * h.coefficient(k)) <
              1e-13);
}

TEST_CASE("frequency response between grid points matches quadrature") {
    const auto g = SosKernel::hamming(1.0, IndexSet::symmetric(5));
    for (Real omega : {two_pi * 0.5, two_pi * 2.31, two_pi * 6.7, -two_pi * 1.2}) {
        const Complex want = kernel_ctft_quadrature(g, omega, 20000);
        CHECK(std::abs(g.eval_freq(omega) - want) < 1e-8 * std::abs(want) + 1e-12);
    }
}

TEST_CASE("custom tabulated window") {
    // Triangle window: phi(0)=1, phi(n)=0 at nonzero integers.
    std::vector<Real> tri;
    const Real du = 0.01;
    for (int i = -100; i <= 100; ++i) tri.push_back(std::max(0.0, 1.0 - std::abs(i * du)));
    auto kernel = SosKernel::with_custom_window(1.0, IndexSet::symmetric(2),
                                                ComplexVector::Ones(5), {tri, du});
    const Real scale = 1.0 / std::sqrt(two_pi);
    CHECK(std::abs(kernel.eval_freq(two_pi * 1.0) - Complex{scale, 0.0}) < 1e-12);
    CHECK(std::abs(kernel.eval_freq(two_pi * 4.0)) < 1e-12);
    CHECK_THROWS(kernel.eval_time(0.0));  // frequency-domain only
    CHECK_THROWS(PeriodicExtensionKernel(kernel, 1));

    // With a tabulated inverse transform attached, time evaluation works.
    std::vector<Complex> impulse;
    const Real dt = 0.01;
    for (int i = -150; i <= 150; ++i)
        impulse.emplace_back(std::exp(-0.5 * std::pow(i * dt / 0.4, 2)), 0.0);
    const auto timed = kernel.with_impulse_response({impulse, dt});
    CHECK(timed.eval_time(0.0).real() == doctest::Approx(1.0));
    CHECK(timed.eval_time(0.4).real() == doctest::Approx(std::exp(-0.5)).epsilon(1e-3));
    CHECK(timed.eval_time(5.0) == Complex{0.0, 0.0});

    // A window violating phi(n) = 0 is rejected.
    std::vector<Real> bad(tri);
    for (auto& v : bad) v += 0.2;
    CHECK_THROWS(SosKernel::with_custom_window(1.0, IndexSet::symmetric(2),
                                               ComplexVector::Ones(5), {bad, du}));
}

TEST_CASE("sampling condition verification") {
    const Real tau = 1.0;
    const auto g   = SosKernel::dirichlet(tau, IndexSet::symmetric(5));
    auto s_of      = [&](Real omega) { return g.eval_freq(omega); };

    const auto report = verify_condition(s_of, g.indices(), tau, -20, 20);
    CHECK(report.pass);
    CHECK(report.entries.size() == 41);

    // Ideal lowpass with B = M/tau satisfies the condition on {-5..5}.
    const LowpassKernel lp(11.0, 20.0);
    auto lp_of = [&](Real omega) { return lp.eval_freq(omega); };
    CHECK(verify_condition(lp_of, IndexSet::symmetric(5), tau, -20, 20).pass);

    // Zeroing one coefficient fails at exactly that index.
    auto broken = [&](Real omega) {
        return g.eval_freq(omega) - g.coefficient(3) * sinc(omega / two_pi - 3.0) *
                                        (tau / std::sqrt(two_pi));
    };
    const auto bad = verify_condition(broken, g.indices(), tau, -20, 20);
    CHECK_FALSE(bad.pass);
    for (const auto& e : bad.entries) {
        if (e.k == 3)
            CHECK_FALSE(e.ok);
        else
            CHECK(e.ok);
    }

    // Magnitudes between the two tolerances are inconclusive, not passed.
    auto murky = [&](Real omega) {
        const Real k7 = sinc(omega / two_pi - 7.0);
        return g.eval_freq(omega) + Complex{1e-8, 0.0} * k7 * (tau / std::sqrt(two_pi));
    };
    const auto gray = verify_condition(murky, g.indices(), tau, -20, 20);
    CHECK_FALSE(gray.pass);
    for (const auto& e : gray.entries)
        if (e.k == 7) {
            CHECK(e.status == ConditionEntry::Status::Inconclusive);
            CHECK_FALSE(e.ok);
        }

    CHECK_THROWS(verify_condition(s_of, g.indices(), tau, -3, 3));  // probe must cover K
}

TEST_CASE("replica count formula") {
    const Real tau = 1.0;
    CHECK(required_replicas(0.0, tau) == 1);       // Dirac
    CHECK(required_replicas(0.5 * tau, tau) == 1);
    CHECK(required_replicas(tau, tau) == 1);       // R <= tau gives g_3p
    CHECK(required_replicas(2.5 * tau, tau) == 2);
    CHECK(required_replicas(3.0 * tau, tau) == 2);
    CHECK(required_replicas(3.1 * tau, tau) == 3);

    // Brute-force oracle: largest |m| for which some |nT - t_l - m tau| <
    // (R + tau)/2 with nT, t_l in [0, tau). The offset nT - t_l ranges over
    // (-tau, tau).
    for (Real r_over_tau : {0.0, 0.3, 1.0, 1.7, 2.5, 3.0, 4.2, 7.9}) {
        const Real support = r_over_tau * tau;
        long max_m = 0;
        for (long m = 0; m <= 50; ++m) {
            // min over theta in (-tau, tau) of |theta - m tau|
            const Real closest = std::max(0.0, static_cast<Real>(m) * tau - tau);
            if (closest < (support + tau) / 2.0) max_m = m;
        }
        CHECK(required_replicas(support, tau) == max_m);
    }
}

TEST_CASE("periodic extension equals the replica sum") {
    const auto g  = SosKernel::hamming(1.0, IndexSet::symmetric(4));
    const auto g3 = make_periodic_extension(g, 0.8);
    CHECK(g3.replicas() == 1);
    CHECK(g3.support() == doctest::Approx(3.0));

    GaussianSampler rng(17);
    for (int i = 0; i < 300; ++i) {
        const Real t = rng.uniform(-2.0, 2.0);
        Complex replica_sum{0.0, 0.0};
        for (long m = -1; m <= 1; ++m)
            replica_sum += g.eval_time(t + static_cast<Real>(m));
        CHECK(std::abs(g3.eval_time(t) - replica_sum) < 1e-12);
    }
}

TEST_CASE("kernel construction invariants") {
    CHECK_THROWS(SosKernel(0.0, IndexSet::symmetric(2), ComplexVector::Ones(5)));
    CHECK_THROWS(SosKernel(1.0, IndexSet::symmetric(2), ComplexVector::Ones(4)));
    ComplexVector with_zero = ComplexVector::Ones(5);
    with_zero[2] = Complex{0.0, 0.0};
    CHECK_THROWS(SosKernel(1.0, IndexSet::symmetric(2), with_zero));
    CHECK_THROWS(PeriodicExtensionKernel(SosKernel::dirichlet(1.0, IndexSet::symmetric(2)), -1));
}

TEST_CASE("trace normalization") {
    const auto g = SosKernel::hamming(1.0, IndexSet::symmetric(5)).trace_normalized();
    CHECK(g.coefficients().squaredNorm() == doctest::Approx(1.0).epsilon(1e-14));
}
