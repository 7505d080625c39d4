#include "sospulse/waterfilling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sospulse {

WaterfillingResult waterfilling(const RealVector& h_tilde_abs, Real noise_var, Index n_samples) {
    const Index m_total = h_tilde_abs.size();
    if (m_total < 1) throw std::invalid_argument("waterfilling: empty spectrum");
    if (!(noise_var > 0.0)) throw std::invalid_argument("waterfilling: noise variance must be > 0");
    if (n_samples < 1) throw std::invalid_argument("waterfilling: need N >= 1");
    for (Index i = 0; i < m_total; ++i)
        if (!(h_tilde_abs[i] > 0.0))
            throw std::invalid_argument("waterfilling: |h_tilde| must be positive on K");

    WaterfillingResult result;
    result.h_tilde_abs = h_tilde_abs;
    const Real c       = static_cast<Real>(n_samples) / noise_var;  // N / sigma^2

    // Equal magnitudes: the constraint forces the uniform allocation.
    if (h_tilde_abs.maxCoeff() == h_tilde_abs.minCoeff()) {
        const Real h2 = h_tilde_abs[0] * h_tilde_abs[0];
        result.beta   = RealVector::Constant(m_total, 1.0 / static_cast<Real>(m_total));
        const Real sqrt_lambda =
            static_cast<Real>(m_total) * std::sqrt(c) / (c + static_cast<Real>(m_total) / h2);
        result.lambda         = sqrt_lambda * sqrt_lambda;
        result.inactive_count = 0;
        return result;
    }

    // Stable order of increasing |h_tilde|; ties keep original index order.
    std::vector<Index> order(static_cast<std::size_t>(m_total));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return h_tilde_abs[a] < h_tilde_abs[b]; });

    RealVector beta_sorted = RealVector::Zero(m_total);
    Real lambda            = 0.0;
    Index cut              = -1;
    for (Index m = 0; m < m_total; ++m) {
        Real inv_sum = 0.0;
        for (Index i = m; i < m_total; ++i) {
            const Real h = h_tilde_abs[order[static_cast<std::size_t>(i)]];
            inv_sum += 1.0 / (h * h);
        }
        const Real sqrt_lambda = static_cast<Real>(m_total - m) * std::sqrt(c) / (c + inv_sum);
        const Real cand        = sqrt_lambda * sqrt_lambda;

        const Real h_first = h_tilde_abs[order[static_cast<std::size_t>(m)]];
        const Real h_last  = m > 0 ? h_tilde_abs[order[static_cast<std::size_t>(m - 1)]] : 0.0;
        const Real upper   = std::pow(h_first, 4) * c;
        const Real lower   = std::pow(h_last, 4) * c;
        if (cand <= upper && cand > lower) {
            lambda = cand;
            cut    = m;
            break;
        }
    }
    if (cut < 0)
        throw std::runtime_error("waterfilling: active-set scan failed to bracket lambda");

    const Real level = std::sqrt(c / lambda);  // sqrt(N / (lambda sigma^2))
    for (Index i = cut; i < m_total; ++i) {
        const Real h = h_tilde_abs[order[static_cast<std::size_t>(i)]];
        beta_sorted[i] = std::max(0.0, (level - 1.0 / (h * h)) / c);
    }

    result.beta = RealVector::Zero(m_total);
    for (Index i = 0; i < m_total; ++i)
        result.beta[order[static_cast<std::size_t>(i)]] = beta_sorted[i];
    result.lambda         = lambda;
    result.inactive_count = cut;

    // Stationarity check: active gradients equal lambda, inactive stay below.
    Real residual = 0.0;
    for (Index i = 0; i < m_total; ++i) {
        const Real h    = h_tilde_abs[i];
        const Real grad = std::pow(h, 4) * c / std::pow(1.0 + result.beta[i] * h * h * c, 2);
        if (result.beta[i] > 0.0)
            residual = std::max(residual, std::abs(grad - lambda) / lambda);
        else
            residual = std::max(residual, std::max(0.0, grad - lambda) / lambda);
    }
    result.kkt_residual = residual;
    return result;
}

RealVector prior_weighted_spectrum(const PulseShape& shape, Real tau, const IndexSet& indices,
                                   Index n_pulses, Real amplitude_var) {
    if (!(tau > 0.0)) throw std::invalid_argument("prior_weighted_spectrum: tau must be > 0");
    if (n_pulses < 1) throw std::invalid_argument("prior_weighted_spectrum: L must be >= 1");
    if (!(amplitude_var > 0.0))
        throw std::invalid_argument("prior_weighted_spectrum: amplitude variance must be > 0");

    const Real scale = std::sqrt(static_cast<Real>(n_pulses) * amplitude_var) / tau;
    RealVector h(indices.size());
    for (Index i = 0; i < indices.size(); ++i)
        h[i] = std::abs(shape.ctft(two_pi * static_cast<Real>(indices.at(i)) / tau)) * scale;
    return h;
}

WaterfillingResult optimal_coefficients(const PulseShape& shape, Real tau, const IndexSet& indices,
                                        Index n_pulses, Real amplitude_var, Real noise_var,
                                        Index n_samples) {
    return waterfilling(prior_weighted_spectrum(shape, tau, indices, n_pulses, amplitude_var),
                        noise_var, n_samples);
}

SosKernel kernel_from_beta(Real tau, const IndexSet& indices, const RealVector& beta,
                           const std::vector<Real>& phases) {
    if (beta.size() != indices.size())
        throw std::invalid_argument("kernel_from_beta: beta size must match |K|");
    if (!phases.empty() && static_cast<Index>(phases.size()) != indices.size())
        throw std::invalid_argument("kernel_from_beta: phase count must match |K|");

    // Zeroed allocations shrink the usable index set; only a consecutive
    // active run yields a valid SoS kernel.
    Index first = -1, last = -1;
    for (Index i = 0; i < beta.size(); ++i) {
        if (beta[i] > 0.0) {
            if (first < 0) first = i;
            last = i;
        }
    }
    if (first < 0) throw std::invalid_argument("kernel_from_beta: all-zero allocation");
    for (Index i = first; i <= last; ++i)
        if (!(beta[i] > 0.0))
            throw std::invalid_argument(
                "kernel_from_beta: active indices are not consecutive; shrink K");

    IndexSet active(indices.at(first), indices.at(last));
    ComplexVector b(active.size());
    for (Index i = 0; i < active.size(); ++i) {
        const Real mag = std::sqrt(beta[first + i]);
        b[i] = phases.empty() ? Complex{mag, 0.0} : mag * cis(phases[static_cast<std::size_t>(first + i)]);
    }
    return SosKernel(tau, active, std::move(b));
}

}  // namespace sospulse
