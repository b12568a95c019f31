#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lsgf/kernel.hpp"

namespace lsgf {

struct FilterBank {
    std::vector<Kernel> kernels;
    double lambda_bar = 1.0;
    std::string design_name;

    std::size_t size() const { return kernels.size(); }
    /// Chebyshev approximants of every kernel on [0, lambda_bar].
    std::vector<ChebyshevApprox> approximate(std::size_t degree, bool jackson = false) const;
};

enum class BandSpacing { uniform, octave };
enum class Prototype { hann, itersine, meyer, dct };

/// Interior band edges for J ideal bands. Without a CDF the edges split [0, lambda_bar]
/// evenly or by halving from the top; with one, each edge inverts the CDF at the target
/// fraction (k/J, or 2^-(J-k) for octave). Step CDFs put the edge halfway into the gap below
/// the first eigenvalue reaching the target.
std::vector<double> ideal_band_edges(double lambda_bar, std::size_t J, BandSpacing spacing,
                                     const SpectralCDF* cdf = nullptr);

/// Moves each edge to the point of lowest CDF slope within +-window*lambda_bar of it,
/// keeping the edges strictly ordered.
std::vector<double> shift_edges_to_low_density(std::span<const double> edges, const SpectralCDF& cdf,
                                               double window);

FilterBank make_ideal_partition_from_edges(double lambda_bar, std::span<const double> edges);
FilterBank make_ideal_partition(double lambda_bar, std::size_t J, BandSpacing spacing = BandSpacing::uniform,
                                const SpectralCDF* cdf = nullptr);

/// J half-overlapping translates with G = 1 on [0, lambda_bar].
FilterBank make_uniform_translates(double lambda_bar, std::size_t J, Prototype prototype);

FilterBank make_log_warped(const FilterBank& base, double nu);

/// wavelet=false warps by lambda_bar * P; wavelet=true by the normalized log(1 + nu lambda_bar P).
FilterBank make_spectrum_adapted(const FilterBank& base, const SpectralCDF& cdf, bool wavelet = false,
                                 double nu = 1.0);

FilterBank make_signal_adapted(const FilterBank& base, const SpectralCDF& energy_cdf);

/// One scaling kernel plus J-1 log-spaced wavelet scales.
FilterBank make_sgwt(double lambda_bar, std::size_t J);

/// G(lambda) = sum_j g_j(lambda)^2.
std::vector<double> evaluate_G(const FilterBank& bank, std::span<const double> points);
std::vector<double> evaluate_G(std::span<const ChebyshevApprox> polys, std::span<const double> points);

std::vector<double> uniform_grid(double lambda_bar, std::size_t n = 1000);

BandSpacing parse_spacing(const std::string& s);
Prototype parse_prototype(const std::string& s);

} // namespace lsgf
