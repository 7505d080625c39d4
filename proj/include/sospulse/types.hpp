#ifndef SOSPULSE_TYPES_HPP
#define SOSPULSE_TYPES_HPP

#include <complex>
#include <numbers>

#include <Eigen/Core>

namespace sospulse {

using Index   = Eigen::Index;
using Real    = double;
using Complex = std::complex<Real>;

using RealVector    = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix    = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr Real pi     = std::numbers::pi_v<Real>;
inline constexpr Real two_pi = 2.0 * pi;

/// Normalized sinc: sinc(x) = sin(pi x) / (pi x), sinc(0) = 1.
inline Real sinc(Real x) {
    if (x == 0.0) return 1.0;
    const Real px = pi * x;
    return std::sin(px) / px;
}

/// Unit complex exponential e^{j theta}.
inline Complex cis(Real theta) { return {std::cos(theta), std::sin(theta)}; }

}  // namespace sospulse

#endif  // SOSPULSE_TYPES_HPP
