#ifndef SOSPULSE_WATERFILLING_ORACLE_HPP
#define SOSPULSE_WATERFILLING_ORACLE_HPP

#include <algorithm>
#include <functional>
#include <vector>

#include "sospulse/types.hpp"

namespace sospulse::testing {

/// Objective of the coefficient-energy allocation problem,
/// f(beta) = sum_i |h_i|^2 / (1 + beta_i |h_i|^2 N / sigma^2).
inline Real allocation_objective(const RealVector& beta, const RealVector& h, Real c) {
    Real acc = 0.0;
    for (Index i = 0; i < h.size(); ++i) {
        const Real h2 = h[i] * h[i];
        acc += h2 / (1.0 + beta[i] * h2 * c);
    }
    return acc;
}

/// Euclidean projection onto the probability simplex.
inline RealVector project_simplex(const RealVector& v) {
    const Index n = v.size();
    std::vector<Real> u(v.data(), v.data() + n);
    std::sort(u.begin(), u.end(), std::greater<Real>());
    Real cumsum = 0.0, theta = 0.0;
    for (Index j = 0; j < n; ++j) {
        cumsum += u[static_cast<std::size_t>(j)];
        const Real t = (cumsum - 1.0) / static_cast<Real>(j + 1);
        if (u[static_cast<std::size_t>(j)] - t > 0.0) theta = t;
    }
    RealVector out(n);
    for (Index i = 0; i < n; ++i) out[i] = std::max(0.0, v[i] - theta);
    return out;
}

/// Independent projected-gradient minimizer of the allocation objective on
/// the simplex, with proximal backtracking.
inline RealVector pg_waterfilling_oracle(const RealVector& h, Real noise_var, Index n_samples,
                                         Index iterations) {
    const Index n = h.size();
    const Real c  = static_cast<Real>(n_samples) / noise_var;
    RealVector beta = RealVector::Constant(n, 1.0 / static_cast<Real>(n));
    Real step = 1.0;
    for (Index it = 0; it < iterations; ++it) {
        RealVector grad(n);
        for (Index i = 0; i < n; ++i) {
            const Real h2 = h[i] * h[i];
            const Real d  = 1.0 + beta[i] * h2 * c;
            grad[i]       = -h2 * h2 * c / (d * d);
        }
        const Real f0 = allocation_objective(beta, h, c);
        step *= 2.0;
        while (true) {
            const RealVector cand = project_simplex(beta - step * grad);
            const RealVector diff = cand - beta;
            const Real f1         = allocation_objective(cand, h, c);
            if (f1 <= f0 + grad.dot(diff) + diff.squaredNorm() / (2.0 * step) + 1e-18) {
                beta = cand;
                break;
            }
            step *= 0.5;
            if (step < 1e-300) return beta;
        }
    }
    return beta;
}

}  // namespace sospulse::testing

#endif  // SOSPULSE_WATERFILLING_ORACLE_HPP
