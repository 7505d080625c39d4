#ifndef SOSPULSE_WATERFILLING_HPP
#define SOSPULSE_WATERFILLING_HPP

#include <vector>

#include "sospulse/index_set.hpp"
#include "sospulse/pulse_shape.hpp"
#include "sospulse/sos_kernel.hpp"
#include "sospulse/types.hpp"

namespace sospulse {

/// MSE-optimal squared coefficient magnitudes for the SoS kernel under
/// white noise added to the samples, with the energy constraint
/// sum_i beta_i = 1 (beta_i = |b_i|^2).
struct WaterfillingResult {
    /// beta in the original K order (k_min..k_max).
    RealVector beta;
    /// KKT multiplier of the energy constraint.
    Real lambda = 0.0;
    /// Number of indices driven to zero (smallest |h_tilde| first).
    Index inactive_count = 0;
    /// |h_tilde_k| in the original K order.
    RealVector h_tilde_abs;
    /// max_i |grad_i - lambda| / lambda over the active set (stationarity).
    Real kkt_residual = 0.0;
};

/// Closed-form solution of
///   min sum_i |h_i|^2 / (1 + beta_i |h_i|^2 N / sigma^2)
///   s.t. beta_i >= 0, sum_i beta_i = 1,
/// where h_i = |h_tilde_i| are the prior-weighted pulse spectra samples.
/// The active set is found by scanning the sorted magnitudes: for each
/// candidate cut m the candidate multiplier
///   sqrt(lambda) = (M - m) sqrt(N/sigma^2) / (N/sigma^2 + sum_{i>m} 1/|h_i|^2)
/// is accepted exactly when it satisfies its own defining inequalities
/// |h_m|^4 N/sigma^2 < lambda <= |h_{m+1}|^4 N/sigma^2 (|h_0| = 0); the
/// KKT system guarantees a unique such m.
WaterfillingResult waterfilling(const RealVector& h_tilde_abs, Real noise_var, Index n_samples);

/// h_tilde_k = H(2 pi k / tau) sigma_a sqrt(L) / tau for k in K.
RealVector prior_weighted_spectrum(const PulseShape& shape, Real tau, const IndexSet& indices,
                                   Index n_pulses, Real amplitude_var);

/// Convenience wrapper: waterfilling on the prior-weighted spectrum of a
/// given pulse shape.
WaterfillingResult optimal_coefficients(const PulseShape& shape, Real tau, const IndexSet& indices,
                                        Index n_pulses, Real amplitude_var, Real noise_var,
                                        Index n_samples);

/// SoS kernel with |b_k|^2 = beta_k. By default the coefficients are real
/// positive (zero phase);`phases` optionally assigns b_k = sqrt(beta_k)
/// e^{j phase_k} and must be antisymmetric over a symmetric K to keep the
/// kernel real valued.
SosKernel kernel_from_beta(Real tau, const IndexSet& indices, const RealVector& beta,
                           const std::vector<Real>& phases = {});

}  // namespace sospulse

#endif  // SOSPULSE_WATERFILLING_HPP
