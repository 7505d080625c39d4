#ifndef SOSPULSE_EXPERIMENT_HPP
#define SOSPULSE_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sospulse/pulse_shape.hpp"
#include "sospulse/types.hpp"

namespace sospulse {

enum class Scenario {
    PeriodicDemo,    // noiseless L=5 Gaussian demonstration
    PeriodicNoisy,   // L=2 Dirac SNR sweep, Dirichlet kernel
    FiniteDemo,      // noiseless finite Dirac stream with g_3p
    FiniteNoisy,     // finite Dirac SNR sweep, equally spaced delays
    HighOrder,       // L=100 noiseless stability run
    Oversampling,    // SNR sweep across oversampling factors, TLS + Cadzow
    InfiniteDemo,    // bursty stream, per-burst recovery
    Ultrasound       // synthetic pulse-echo phantom
};

enum class KernelChoice { Dirichlet, Hamming, Optimal };

struct ExperimentSpec {
    Scenario scenario = Scenario::PeriodicNoisy;
    Index model_order = 2;  // L
    Real tau = 0.0;         // <= 0 selects the scenario default
    Index k_half = 0;       // K = {-k_half..k_half}; 0 selects L
    Index n_samples = 0;    // 0 selects M
    KernelChoice kernel = KernelChoice::Dirichlet;
    std::string pulse = "dirac";  // "dirac" | "gaussian"
    Real sigma = 0.0;             // <= 0 selects the scenario default
    std::vector<Real> delays;      // empty selects the scenario default
    std::vector<Real> amplitudes;  // empty selects all-ones
    std::vector<Real> snr_db_grid;
    Index trials = 1000;
    std::uint64_t seed = 0x5eed0001;
    bool tls = false;
    Index cadzow_iterations = 0;
    std::vector<Index> oversampling_factors = {1, 2, 4, 8};
    Real amplitude_var = 1.0;  // prior for the optimal-coefficient design
    // bursty scenario
    Index bursts = 3;
    // ultrasound scenario
    Real sample_rate = 20e6;
    Real carrier = 1.7021e6;
    Real sound_speed = 1550.0;
    Real threshold_fraction = 0.1;
    std::vector<Index> ultrasound_sample_counts = {17, 33};
};

struct ExperimentRow {
    Real snr_db = std::numeric_limits<Real>::infinity();
    Index factor = 1;       // oversampling factor (1 unless swept)
    Index n_samples = 0;
    Real mean_delay_sq_err = 0.0;  // mean ||t - t_hat||^2, sorted matching
    Real mean_amp_sq_err = 0.0;
    Index failures = 0;
    Index trials = 1;
    Real runtime_s = 0.0;
};

struct ExperimentResult {
    ExperimentSpec spec;
    std::vector<ExperimentRow> rows;
};

/// Runs the scenario. Deterministic for a fixed spec and seed: trials
/// execute sequentially with per-trial derived seeds, so repeated runs
/// produce bitwise-identical tables.
ExperimentResult run(const ExperimentSpec& spec);

/// CSV table (one row per ExperimentRow, full double precision) and a JSON
/// summary echoing the full spec.
void write_csv(const ExperimentResult& result, const std::string& path);
void write_json(const ExperimentResult& result, const std::string& path);

struct ComparisonSpec {
    Real tau = 1.0;
    Index k_half = 5;
    Index model_order = 5;
    std::string pulse = "gaussian";
    Real sigma = 7e-3;
    Real amplitude_var = 1.0;
    Real noise_var = 1e-2;  // model noise for the linear-estimate MSE
    std::vector<Real> snr_db_grid = {10.0, 20.0, 30.0};
    Index trials = 1000;
    Index n_samples = 0;  // 0 selects M
    std::uint64_t seed = 0x5eed0002;
    std::vector<KernelChoice> kernels = {KernelChoice::Dirichlet, KernelChoice::Hamming,
                                         KernelChoice::Optimal};
};

struct KernelComparisonRow {
    KernelChoice kernel;
    Real snr_db = 0.0;
    Real mean_delay_sq_err = 0.0;
    /// Empirical MSE of the optimal linear estimate of x at the model noise
    /// level, trace-normalized coefficients, matched noise draws.
    Real mean_x_mse = 0.0;
};

/// Paired kernel comparison: identical pulse parameters and matched
/// standard-normal noise draws across kernels; per-kernel noise scaling
/// follows each kernel's own clean samples (method-dependent sigma_n).
std::vector<KernelComparisonRow> compare_kernels(const ComparisonSpec& spec);

std::string kernel_choice_name(KernelChoice choice);
std::string scenario_name(Scenario scenario);
KernelChoice kernel_choice_from_name(const std::string& name);
Scenario scenario_from_name(const std::string& name);

/// Parses an ExperimentSpec document; absent fields keep their defaults.
ExperimentSpec spec_from_json_text(const std::string& text);

}  // namespace sospulse

#endif  // SOSPULSE_EXPERIMENT_HPP
