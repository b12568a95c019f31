#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lsgf/graph.hpp"

namespace lsgf {

/// Cumulative distribution over [0, lambda_bar]. Exact distributions evaluate as a right-continuous
/// step function on their breakpoints; estimated ones use a monotone (Fritsch-Carlson) cubic.
class SpectralCDF {
public:
    enum class Kind { step, monotone_cubic };

    SpectralCDF() = default;
    static SpectralCDF step(std::vector<double> breakpoints, std::vector<double> values, double lambda_bar);
    static SpectralCDF monotone_cubic(std::vector<double> grid, std::vector<double> values);

    Kind kind() const { return kind_; }
    std::span<const double> grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    double lambda_bar() const { return lambda_bar_; }

    double operator()(double z) const;

    /// Smallest z in [0, lambda_bar] with P(z) >= q.
    double inverse(double q) const;

private:
    Kind kind_ = Kind::step;
    std::vector<double> grid_;
    std::vector<double> values_;
    std::vector<double> slopes_;
    double lambda_bar_ = 0.0;
};

/// Eigenvalue counting function from an eigendecomposition; lambda_bar defaults to lambda_max.
SpectralCDF exact_spectral_cdf(const EigenDecomposition& eig, double lambda_bar = 0.0);

struct CdfEstimateOptions {
    std::size_t n_probes = 10;
    std::size_t kpm_degree = 30;
    std::size_t n_grid = 50;
    std::uint64_t seed = 0;
};

/// Kernel polynomial method with Hutchinson trace estimation (Rademacher probes) on
/// n_grid points spanning [0, L.lambda_max_bound].
SpectralCDF estimate_spectral_cdf(const Laplacian& L, const CdfEstimateOptions& opts = {});

/// Ensemble energy distribution of training signals over the non-DC spectrum.
SpectralCDF exact_energy_cdf(const EigenDecomposition& eig, std::span<const Signal> training, double lambda_bar = 0.0);

/// Stochastic counterpart of exact_energy_cdf: each normalized, mean-removed training
/// signal is passed through Jackson-Chebyshev indicator approximants on the estimator grid.
SpectralCDF estimate_energy_cdf(const Laplacian& L, std::span<const Signal> training,
                                const CdfEstimateOptions& opts = {});

/// sup over z in [0, lambda_bar] of |a(z) - b(z)|, checked at the breakpoints of both (left and right
/// limits) and on a fine grid.
double cdf_sup_distance(const SpectralCDF& a, const SpectralCDF& b, std::size_t n_grid = 4000);

} // namespace lsgf
