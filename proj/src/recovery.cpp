#include "sospulse/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sospulse/spectral.hpp"

namespace sospulse {

CoefficientSystem CoefficientSystem::build(const Kernel& kernel, const PulseShape& shape, Real tau,
                                           const RealVector& instants) {
    if (!(tau > 0.0)) throw std::invalid_argument("CoefficientSystem: tau must be > 0");

    IndexSet indices = [&] {
        if (const auto* sos = std::get_if<SosKernel>(&kernel)) return sos->indices();
        if (const auto* ext = std::get_if<PeriodicExtensionKernel>(&kernel))
            return ext->base().indices();
        const auto& lp = std::get<LowpassKernel>(kernel);
        return IndexSet::symmetric(static_cast<Index>(std::floor(lp.bandwidth() * tau / 2.0 + 1e-12)));
    }();

    const Index m = indices.size();
    const Index n = instants.size();
    if (n < m)
        throw std::invalid_argument("CoefficientSystem: need at least |K| samples (N >= M)");

    // Duplicate instants modulo tau make V rank deficient.
    std::vector<Real> wrapped(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        Real w = std::fmod(instants[i], tau);
        if (w < 0.0) w += tau;
        wrapped[static_cast<std::size_t>(i)] = w;
    }
    std::sort(wrapped.begin(), wrapped.end());
    for (std::size_t i = 1; i < wrapped.size(); ++i)
        if (std::abs(wrapped[i] - wrapped[i - 1]) < 1e-12 * tau)
            throw std::invalid_argument(
                "CoefficientSystem: duplicate sample instants modulo tau (rank-deficient V)");

    ComplexVector s_conj(m), h_diag(m);
    for (Index i = 0; i < m; ++i) {
        const Index k = indices.at(i);
        s_conj[i]     = kernel_s_conj(kernel, k, tau);
        h_diag[i]     = shape.ctft(two_pi * static_cast<Real>(k) / tau) / tau;
        if (s_conj[i] == Complex{0.0, 0.0})
            throw std::invalid_argument("CoefficientSystem: kernel response vanishes on K");
        if (h_diag[i] == Complex{0.0, 0.0})
            throw std::invalid_argument("CoefficientSystem: pulse spectrum vanishes on K");
    }

    // V(-t_s): entry (n, k) = e^{j 2 pi k t_n / tau}.
    ComplexMatrix v(n, m);
    for (Index row = 0; row < n; ++row)
        for (Index col = 0; col < m; ++col)
            v(row, col) = cis(two_pi * static_cast<Real>(indices.at(col)) * instants[row] / tau);

    return CoefficientSystem(indices, tau, instants, std::move(s_conj), std::move(h_diag),
                             std::move(v));
}

bool CoefficientSystem::dft_applicable() const {
    const Index n = instants_.size();
    if (n != indices_.size()) return false;
    const Real t_step = tau_ / static_cast<Real>(n);
    for (Index i = 0; i < n; ++i)
        if (std::abs(instants_[i] - static_cast<Real>(i) * t_step) > 1e-12 * tau_) return false;
    return true;
}

FourierCoeffVector extract_coefficients(const ComplexVector& samples,
                                        const CoefficientSystem& system, ExtractionPath path) {
    if (samples.size() != system.instants().size())
        throw std::invalid_argument("extract_coefficients: sample count mismatch");

    if (path == ExtractionPath::Auto)
        path = system.dft_applicable() ? ExtractionPath::Dft : ExtractionPath::General;

    FourierCoeffVector out;
    out.indices = system.indices();
    out.s_conj  = system.s_conj();
    out.h_diag  = system.h_diag();

    const Index m = system.indices().size();
    if (path == ExtractionPath::Dft) {
        if (!system.dft_applicable())
            throw std::invalid_argument(
                "extract_coefficients: DFT path requires N = M and T = tau/N");
        const Index n = samples.size();
        out.x = ComplexVector(m);
        for (Index i = 0; i < m; ++i) {
            const Index k = system.indices().at(i);
            Complex acc{0.0, 0.0};
            for (Index j = 0; j < n; ++j) {
                const Index phase = ((k * j) % n + n) % n;  // angle reduced mod 2 pi
                acc += samples[j] * cis(-two_pi * static_cast<Real>(phase) / static_cast<Real>(n));
            }
            out.x[i] = acc / (static_cast<Real>(n) * system.s_conj()[i]);
        }
    } else {
        // x = S^{-1} V^dagger c via least squares on V w = c, then w / s.
        const ComplexVector w = system.vandermonde().colPivHouseholderQr().solve(samples);
        out.x = w.array() / system.s_conj().array();
    }
    return out;
}

ComplexVector deconvolve_pulse(const FourierCoeffVector& coeffs, std::vector<std::string>* warnings,
                               Real condition_tol) {
    const Index m = coeffs.x.size();
    if (coeffs.h_diag.size() != m)
        throw std::invalid_argument("deconvolve_pulse: H diagonal size mismatch");
    const Real h_max = coeffs.h_diag.cwiseAbs().maxCoeff();
    ComplexVector y(m);
    for (Index i = 0; i < m; ++i) {
        const Complex h = coeffs.h_diag[i];
        if (h == Complex{0.0, 0.0})
            throw std::invalid_argument("deconvolve_pulse: zero H entry");
        if (warnings != nullptr && std::abs(h) < condition_tol * h_max)
            warnings->push_back("ill-conditioned pulse deconvolution at k=" +
                                std::to_string(coeffs.indices.at(i)));
        y[i] = coeffs.x[i] / h;
    }
    return y;
}

namespace {

// Annihilation matrix: rows M-L, columns L+1, entry (r, j) = y[L + r - j].
ComplexMatrix annihilation_matrix(const ComplexVector& y, Index model_order) {
    return toeplitz_from_sequence(y, model_order + 1);
}

Index numerical_rank(const Eigen::JacobiSVD<ComplexMatrix>& svd) {
    const auto& sigma = svd.singularValues();
    if (sigma.size() == 0 || sigma[0] == 0.0) return 0;
    const Real tol = std::max(svd.rows(), svd.cols()) *
                     std::numeric_limits<Real>::epsilon() * sigma[0];
    Index rank = 0;
    for (Index i = 0; i < sigma.size(); ++i)
        if (sigma[i] > tol) ++rank;
    return rank;
}

// Common tail: root the filter, map roots to delays in [0, tau), fit
// amplitudes on the original index grid.
void finish_annihilator(AnnihilatorResult& result, const ComplexVector& y, Index model_order,
                        const IndexSet& indices, Real tau) {
    // Monic normalization; a vanishing leading coefficient signals a
    // degenerate filter (true order below L).
    const Complex lead = result.filter[0];
    if (std::abs(lead) < 1e-12 * result.filter.norm()) {
        result.degenerate = true;
        result.delays.clear();
        result.amplitudes.clear();
        result.residual = y.norm();
        return;
    }
    ComplexVector tail = result.filter.segment(1, model_order) / lead;
    result.roots       = companion_roots(tail);
    result.root_moduli = result.roots.cwiseAbs();

    std::vector<Real> delays(static_cast<std::size_t>(model_order));
    for (Index l = 0; l < model_order; ++l) {
        // u = e^{-j 2 pi t / tau}; the root modulus carries no delay
        // information and is reported separately.
        Real t = -tau * std::arg(result.roots[l]) / two_pi;
        if (t < 0.0) t += tau;
        if (t >= tau) t -= tau;
        delays[static_cast<std::size_t>(l)] = t;
    }
    std::sort(delays.begin(), delays.end());
    for (std::size_t l = 1; l < delays.size(); ++l)
        if (std::abs(delays[l] - delays[l - 1]) < 1e-10 * tau) result.root_collision = true;

    RealVector delay_vec(model_order);
    for (Index l = 0; l < model_order; ++l) delay_vec[l] = delays[static_cast<std::size_t>(l)];

    RealVector k_values(indices.size());
    for (Index i = 0; i < indices.size(); ++i) k_values[i] = static_cast<Real>(indices.at(i));
    const ComplexMatrix v = exponential_vandermonde(k_values, delay_vec, tau);

    const ComplexVector amps = v.colPivHouseholderQr().solve(y);
    result.delays            = std::move(delays);
    result.amplitudes.assign(amps.data(), amps.data() + amps.size());
    result.residual = (v * amps - y).norm();
}

}  // namespace

AnnihilatorResult annihilating_filter(const ComplexVector& y, Index model_order,
                                      const IndexSet& indices, Real tau) {
    const Index m = y.size();
    if (model_order < 1) throw std::invalid_argument("annihilating_filter: L must be >= 1");
    if (m < 2 * model_order)
        throw std::invalid_argument("annihilating_filter: need M >= 2L coefficients");
    if (m != indices.size())
        throw std::invalid_argument("annihilating_filter: y length must match |K|");

    const ComplexMatrix a = annihilation_matrix(y, model_order);
    Eigen::JacobiSVD<ComplexMatrix> svd(a);

    AnnihilatorResult result;
    result.effective_rank = numerical_rank(svd);
    result.degenerate     = result.effective_rank < model_order;

    if (result.degenerate) {
        // Non-unique nullspace; fall back to the smallest singular vector so
        // a deterministic filter is still reported.
        result.filter = smallest_right_singular_vector(a, &result.tls_tie);
    } else {
        // Unit leading coefficient: solve A[:, 1:] h = -A[:, 0].
        const ComplexVector rhs = -a.col(0);
        const ComplexVector h   = a.rightCols(model_order).colPivHouseholderQr().solve(rhs);
        result.filter = ComplexVector(model_order + 1);
        result.filter[0] = Complex{1.0, 0.0};
        result.filter.segment(1, model_order) = h;
    }
    finish_annihilator(result, y, model_order, indices, tau);
    return result;
}

AnnihilatorResult annihilating_filter_tls(const ComplexVector& y, Index model_order,
                                          const IndexSet& indices, Real tau) {
    const Index m = y.size();
    if (model_order < 1) throw std::invalid_argument("annihilating_filter_tls: L must be >= 1");
    if (m <= 2 * model_order)
        throw std::invalid_argument("annihilating_filter_tls: need M > 2L coefficients");
    if (m != indices.size())
        throw std::invalid_argument("annihilating_filter_tls: y length must match |K|");

    const ComplexMatrix a = annihilation_matrix(y, model_order);
    Eigen::JacobiSVD<ComplexMatrix> svd(a);

    AnnihilatorResult result;
    result.effective_rank = numerical_rank(svd);
    result.degenerate     = result.effective_rank < model_order;
    result.filter         = smallest_right_singular_vector(a, &result.tls_tie);
    finish_annihilator(result, y, model_order, indices, tau);
    return result;
}

ComplexVector cadzow_denoise(const ComplexVector& y, Index model_order, Index iterations) {
    const Index m = y.size();
    if (model_order < 1) throw std::invalid_argument("cadzow_denoise: L must be >= 1");
    if (m <= 2 * model_order)
        throw std::invalid_argument("cadzow_denoise: need M > 2L coefficients");
    if (iterations == 0) return y;

    // As square as possible.
    const Index n_cols = (m + 2) / 2;
    ComplexVector current = y;
    for (Index it = 0; it < iterations; ++it) {
        ComplexMatrix t = toeplitz_from_sequence(current, n_cols);
        Eigen::JacobiSVD<ComplexMatrix> svd(t, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& sigma = svd.singularValues();
        if (sigma[model_order] < 1e-12 * sigma[0]) break;  // already (numerically) rank L

        ComplexMatrix truncated = ComplexMatrix::Zero(t.rows(), t.cols());
        for (Index i = 0; i < model_order; ++i)
            truncated += sigma[i] * svd.matrixU().col(i) * svd.matrixV().col(i).adjoint();
        current = average_diagonals(truncated);
    }
    return current;
}

Index estimate_model_order(const ComplexVector& y) {
    const Index m = y.size();
    if (m < 2) throw std::invalid_argument("estimate_model_order: need at least 2 coefficients");
    const ComplexMatrix t = toeplitz_from_sequence(y, (m + 2) / 2);
    Eigen::JacobiSVD<ComplexMatrix> svd(t);
    const auto& sigma = svd.singularValues();
    Index best = 1;
    Real best_gap = 0.0;
    for (Index i = 0; i + 1 < sigma.size(); ++i) {
        const Real gap = sigma[i] / std::max(sigma[i + 1], 1e-300);
        if (gap > best_gap) {
            best_gap = gap;
            best     = i + 1;
        }
    }
    return best;
}

RecoveryResult recover(const SampleSet& samples, const CoefficientSystem& system,
                       Index model_order, const RecoveryOptions& options) {
    const Index m = system.indices().size();
    const Index n = samples.values.size();
    if (n < m || m < 2 * model_order)
        throw std::invalid_argument("recover: need N >= M >= 2L");

    RecoveryResult result;
    result.coefficients = extract_coefficients(samples.values, system, options.extraction);
    result.y            = deconvolve_pulse(result.coefficients, &result.warnings);
    result.y_denoised   = options.cadzow_iterations > 0
                              ? cadzow_denoise(result.y, model_order, options.cadzow_iterations)
                              : result.y;
    result.annihilator =
        options.tls ? annihilating_filter_tls(result.y_denoised, model_order, system.indices(),
                                              system.tau())
                    : annihilating_filter(result.y_denoised, model_order, system.indices(),
                                          system.tau());

    result.delays     = result.annihilator.delays;
    result.amplitudes = result.annihilator.amplitudes;
    result.residual_y = result.annihilator.residual;

    if (!result.delays.empty()) {
        // Sample-domain residual of the fitted model.
        RealVector delay_vec(static_cast<Index>(result.delays.size()));
        for (Index l = 0; l < delay_vec.size(); ++l)
            delay_vec[l] = result.delays[static_cast<std::size_t>(l)];
        RealVector k_values(m);
        for (Index i = 0; i < m; ++i) k_values[i] = static_cast<Real>(system.indices().at(i));
        ComplexVector amps(static_cast<Index>(result.amplitudes.size()));
        for (Index l = 0; l < amps.size(); ++l)
            amps[l] = result.amplitudes[static_cast<std::size_t>(l)];

        const ComplexVector y_model =
            exponential_vandermonde(k_values, delay_vec, system.tau()) * amps;
        const ComplexVector x_model = system.h_diag().array() * y_model.array();
        const ComplexVector c_model =
            system.vandermonde() * (system.s_conj().array() * x_model.array()).matrix();
        result.residual_samples = (c_model - samples.values).norm();
    } else {
        result.residual_samples = samples.values.norm();
    }
    return result;
}

}  // namespace sospulse
