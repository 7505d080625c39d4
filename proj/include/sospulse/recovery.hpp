#ifndef SOSPULSE_RECOVERY_HPP
#define SOSPULSE_RECOVERY_HPP

#include <string>
#include <vector>

#include "sospulse/index_set.hpp"
#include "sospulse/pulse_shape.hpp"
#include "sospulse/sampling.hpp"
#include "sospulse/sos_kernel.hpp"
#include "sospulse/types.hpp"

namespace sospulse {

/// Linear system tying the samples to the Fourier coefficient vector:
///   c = V(-t_s) S x,   x = H V(t) a,
/// with S the diagonal of S*(2 pi k / tau), H the diagonal of
/// (1/tau) H(2 pi k / tau), and V(-t_s) the N x M matrix of
/// e^{j 2 pi k t_n / tau}.
class CoefficientSystem {
public:
    static CoefficientSystem build(const Kernel& kernel, const PulseShape& shape, Real tau,
                                   const RealVector& instants);

    const IndexSet& indices() const { return indices_; }
    Real tau() const { return tau_; }
    const RealVector& instants() const { return instants_; }
    const ComplexVector& s_conj() const { return s_conj_; }
    const ComplexVector& h_diag() const { return h_diag_; }
    const ComplexMatrix& vandermonde() const { return v_; }

    /// True when the samples are the length-M uniform grid t_n = n tau / N,
    /// enabling the DFT-and-correct fast path.
    bool dft_applicable() const;

private:
    CoefficientSystem(IndexSet indices, Real tau, RealVector instants, ComplexVector s_conj,
                      ComplexVector h_diag, ComplexMatrix v)
        : indices_(indices),
          tau_(tau),
          instants_(std::move(instants)),
          s_conj_(std::move(s_conj)),
          h_diag_(std::move(h_diag)),
          v_(std::move(v)) {}

    IndexSet indices_;
    Real tau_;
    RealVector instants_;
    ComplexVector s_conj_;
    ComplexVector h_diag_;
    ComplexMatrix v_;
};

/// Estimated Fourier coefficients X[k], k in K, together with the diagonal
/// corrections used to obtain them.
struct FourierCoeffVector {
    IndexSet indices{0, 0};
    ComplexVector x;
    ComplexVector s_conj;
    ComplexVector h_diag;
};

enum class ExtractionPath { Auto, General, Dft };

/// Solves c = V(-t_s) S x for x. The general path is a least-squares solve;
/// on the critical uniform grid (N = M, T = tau/N) the DFT path applies the
/// length-N DFT and the S^{-1} correction instead. Both agree to machine
/// precision where both apply.
FourierCoeffVector extract_coefficients(const ComplexVector& samples,
                                        const CoefficientSystem& system,
                                        ExtractionPath path = ExtractionPath::Auto);

/// y = H^{-1} x, the pure exponential sum y_k = sum_l a_l e^{-j2pi k t_l/tau}.
/// Appends a conditioning warning per index whose |H| falls below
/// `condition_tol` times the largest entry.
ComplexVector deconvolve_pulse(const FourierCoeffVector& coeffs,
                               std::vector<std::string>* warnings = nullptr,
                               Real condition_tol = 1e-8);

/// Annihilating-filter estimate for a sum of L complex exponentials.
struct AnnihilatorResult {
    ComplexVector filter;        // length L+1
    ComplexVector roots;         // polynomial roots u_l
    RealVector root_moduli;      // |u_l| diagnostics (1 for noiseless data)
    std::vector<Real> delays;    // t_l = -tau arg(u_l) / 2pi, sorted ascending
    std::vector<Complex> amplitudes;
    Real residual = 0.0;         // ||V(t_hat) a_hat - y||
    Index effective_rank = 0;    // numerical rank of the annihilation matrix
    bool degenerate = false;     // effective rank below the model order
    bool tls_tie = false;        // tied smallest singular values in TLS mode
    bool root_collision = false; // near-coincident roots
};

/// Exact annihilating filter: the length-(L+1) filter with unit leading
/// coefficient solving the Toeplitz annihilation equations in least squares,
/// rooted and mapped to delays in [0, tau); amplitudes follow from a
/// Vandermonde least-squares fit to y.
AnnihilatorResult annihilating_filter(const ComplexVector& y, Index model_order,
                                      const IndexSet& indices, Real tau);

/// Total-least-squares variant for oversampled (M > 2L) data: the filter is
/// the right singular vector of the annihilation matrix attached to its
/// smallest singular value.
AnnihilatorResult annihilating_filter_tls(const ComplexVector& y, Index model_order,
                                          const IndexSet& indices, Real tau);

/// Cadzow denoising: alternately project the Toeplitz matrix of y onto
/// rank L and back onto Toeplitz structure (diagonal averaging). Stops
/// early once sigma_{L+1} < 1e-12 sigma_1. iterations = 0 returns y.
ComplexVector cadzow_denoise(const ComplexVector& y, Index model_order, Index iterations);

/// Optional model-order estimate: the position of the largest relative gap
/// in the singular-value profile of the near-square Toeplitz matrix of y.
/// The pipeline takes L as an input; this helper is off the default path.
Index estimate_model_order(const ComplexVector& y);

struct RecoveryOptions {
    bool tls = false;
    Index cadzow_iterations = 0;
    ExtractionPath extraction = ExtractionPath::Auto;
};

/// Full pipeline output with all intermediate stages.
struct RecoveryResult {
    std::vector<Real> delays;         // sorted ascending, in [0, tau)
    std::vector<Complex> amplitudes;  // matched to delays
    FourierCoeffVector coefficients;
    ComplexVector y;           // deconvolved exponential sum
    ComplexVector y_denoised;  // after Cadzow (equals y when disabled)
    AnnihilatorResult annihilator;
    Real residual_y = 0.0;
    Real residual_samples = 0.0;
    std::vector<std::string> warnings;
};

/// extract -> deconvolve -> (Cadzow) -> annihilate -> amplitudes.
RecoveryResult recover(const SampleSet& samples, const CoefficientSystem& system, Index model_order,
                       const RecoveryOptions& options = {});

}  // namespace sospulse

#endif  // SOSPULSE_RECOVERY_HPP
