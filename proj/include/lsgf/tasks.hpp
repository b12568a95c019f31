#pragma once

#include <optional>
#include <vector>

#include "lsgf/dictionary.hpp"

namespace lsgf {

/// Bands whose kernel is nonzero at 0; these carry the DC content and are never thresholded.
std::vector<bool> scaling_bands(const FilterBank& bank);

/// Exact atom norms when the dictionary has an eigendecomposition, stochastic estimates otherwise.
std::vector<Signal> atom_norms(const Dictionary& d, std::size_t n_probes = 100, std::uint64_t seed = 0);

/// sum_i min(a_i^2, u^2 s^2 n_i^2) + 2 s^2 n_i^2 [|a_i| > u s n_i].
double sure_objective(const Signal& alpha, const Signal& norms, double sigma, double upsilon);

/// Exact minimizer of sure_objective over u >= 0; candidates are 0 and every |a_i| / (s n_i).
/// Ties go to the smaller threshold.
double sure_threshold(const Signal& alpha, const Signal& norms, double sigma);

/// Per-band thresholds; bands flagged in `skip` get 0.
std::vector<double> sure_thresholds(const Coefficients& c, const std::vector<Signal>& norms, double sigma,
                                    const std::vector<bool>& skip);

/// sgn(a) max(0, |a| - u_j s n_ij).
Coefficients soft_threshold(const Coefficients& c, const std::vector<Signal>& norms,
                            const std::vector<double>& upsilon, double sigma);

struct DenoiseConfig {
    double sigma = 1.0;
    /// Replaces the SURE search when set (one value per band; scaling bands still get 0).
    std::optional<std::vector<double>> fixed_thresholds;
    InverseMethod inverse = InverseMethod::cg;
    std::size_t iterations = 10;
    std::size_t norm_probes = 100;
    std::uint64_t seed = 0;
};

struct DenoiseResult {
    Signal f;
    std::vector<double> thresholds;
};

DenoiseResult denoise(const Dictionary& d, const Signal& y, const DenoiseConfig& cfg);

struct OmpResult {
    std::vector<std::size_t> selected; // atom indices in selection order
    Signal coefficients;               // length M, for the unnormalized atoms
    Signal reconstruction;
    std::vector<double> residual_norms; // after each round
};

/// Orthogonal matching pursuit over the (internally normalized) columns of `atoms`.
OmpResult omp(const Matrix& atoms, const Signal& f, std::size_t T0);

struct CompressResult {
    Coefficients coefficients;
    Signal reconstruction;
    std::vector<double> residual_norms;
};

CompressResult compress_omp(const Dictionary& d, const Signal& f, std::size_t T0);

/// Keeps the T0 largest |alpha| / ||phi|| and resynthesizes with `inverse`.
Signal compress_hard_threshold(const Dictionary& d, const Signal& f, std::size_t T0, InverseMethod inverse,
                               const std::vector<Signal>* norms = nullptr);

/// Hard-thresholded coefficients (zeros elsewhere) used by compress_hard_threshold.
Coefficients hard_threshold(const Coefficients& c, const std::vector<Signal>& norms, std::size_t T0);

inline constexpr double kSnrCapDb = 300.0;

struct Metrics {
    double nmse = 0.0;
    std::optional<double> delta_snr_db;
};

Metrics metrics(const Signal& f, const Signal& f_hat, const Signal* noise = nullptr);

} // namespace lsgf
