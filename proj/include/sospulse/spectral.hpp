#ifndef SOSPULSE_SPECTRAL_HPP
#define SOSPULSE_SPECTRAL_HPP

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "sospulse/types.hpp"

namespace sospulse {

/// Toeplitz matrix of a sequence: rows = len - n_cols + 1, entry
/// (i, j) = seq[i + n_cols - 1 - j]; constant along diagonals.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
toeplitz_from_sequence(const Eigen::MatrixBase<Derived>& seq, Index n_cols) {
    const Index len    = seq.size();
    const Index n_rows = len - n_cols + 1;
    if (n_cols < 1 || n_rows < 1)
        throw std::invalid_argument("toeplitz_from_sequence: invalid shape");
    Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> t(n_rows, n_cols);
    for (Index i = 0; i < n_rows; ++i)
        for (Index j = 0; j < n_cols; ++j) t(i, j) = seq[i + n_cols - 1 - j];
    return t;
}

/// Sequence recovered from a Toeplitz-like matrix by averaging along
/// diagonals (the structure-restoring half of a Cadzow step).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>
average_diagonals(const Eigen::MatrixBase<Derived>& mat) {
    const Index n_rows = mat.rows();
    const Index n_cols = mat.cols();
    const Index len    = n_rows + n_cols - 1;
    Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> seq(len);
    for (Index s = 0; s < len; ++s) {
        // entries with i + n_cols - 1 - j == s
        typename Derived::Scalar acc{};
        Index count = 0;
        const Index i_lo = std::max<Index>(0, s - n_cols + 1);
        const Index i_hi = std::min<Index>(n_rows - 1, s);
        for (Index i = i_lo; i <= i_hi; ++i) {
            acc += mat(i, i + n_cols - 1 - s);
            ++count;
        }
        seq[s] = acc / static_cast<typename Derived::Scalar>(static_cast<Real>(count));
    }
    return seq;
}

/// Roots of the monic polynomial x^n + c[0] x^{n-1} + ... + c[n-1] via the
/// companion-matrix eigenvalues.
template <typename Derived>
ComplexVector companion_roots(const Eigen::MatrixBase<Derived>& monic_tail) {
    const Index n = monic_tail.size();
    if (n == 0) return ComplexVector();
    ComplexMatrix companion = ComplexMatrix::Zero(n, n);
    for (Index i = 1; i < n; ++i) companion(i, i - 1) = Complex{1.0, 0.0};
    for (Index i = 0; i < n; ++i) companion(i, n - 1) = -Complex(monic_tail[n - 1 - i]);
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(companion, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("companion_roots: eigensolver failed");
    return solver.eigenvalues();
}

/// Right singular vector paired with the smallest singular value.
/// When several singular values tie at the bottom (relative tolerance on
/// sigma_max), the lowest-index tied column is chosen and `tie` is set.
template <typename Derived>
ComplexVector smallest_right_singular_vector(const Eigen::MatrixBase<Derived>& mat, bool* tie,
                                             Real tie_rel_tol = 1e-12) {
    Eigen::JacobiSVD<ComplexMatrix> svd(mat, Eigen::ComputeFullV);
    const auto& sigma = svd.singularValues();
    const Index last  = sigma.size() - 1;
    Index pick        = last;
    while (pick > 0 && sigma[pick - 1] - sigma[last] <= tie_rel_tol * sigma[0]) --pick;
    if (tie != nullptr) *tie = pick != last;
    return svd.matrixV().col(pick);
}

/// Vandermonde matrix with entries e^{-j 2 pi k_i nodes_j / tau}; rows run
/// over the integer frequencies k, columns over the nodes.
template <typename DerivedK, typename DerivedT>
ComplexMatrix exponential_vandermonde(const Eigen::MatrixBase<DerivedK>& k_values,
                                      const Eigen::MatrixBase<DerivedT>& nodes, Real tau) {
    ComplexMatrix v(k_values.size(), nodes.size());
    for (Index i = 0; i < k_values.size(); ++i)
        for (Index j = 0; j < nodes.size(); ++j)
            v(i, j) = cis(-two_pi * static_cast<Real>(k_values[i]) * nodes[j] / tau);
    return v;
}

}  // namespace sospulse

#endif  // SOSPULSE_SPECTRAL_HPP
