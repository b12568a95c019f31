#pragma once

#include <memory>
#include <string>
#include <vector>

#include "lsgf/chebyshev.hpp"
#include "lsgf/spectrum.hpp"

namespace lsgf {

enum class WarpKind { log, spectrum_cdf, log_spectrum_cdf, energy_cdf };

/// Monotone map of [0, lambda_bar] onto itself with warp(0) = 0 and warp(lambda_bar) = lambda_bar.
/// CDF-based kinds rescale Q(l) = (P(l) - P(0)) / (P(lambda_bar) - P(0)) so both ends are fixed.
struct Warping {
    WarpKind kind = WarpKind::log;
    double nu = 1.0;
    double lambda_bar = 1.0;
    std::shared_ptr<const SpectralCDF> cdf;

    double operator()(double lambda) const;
};

Warping make_log_warp(double lambda_bar, double nu);
Warping make_cdf_warp(WarpKind kind, std::shared_ptr<const SpectralCDF> cdf, double lambda_bar, double nu = 1.0);

enum class KernelFamily {
    ideal_band,
    hann_translate,
    itersine_translate,
    meyer_translate,
    dct_translate,
    sgwt_scaling,
    sgwt_wavelet,
    greens,
    diffusion_heat,
    polynomial_decay_by_index,
    polynomial, // sum_k coeffs[k] lambda^k
};

struct KernelParams {
    double lo = 0.0, hi = 0.0; // ideal band [lo, hi)
    bool closed_right = false;
    double center = 0.0;  // translates
    double spacing = 1.0; // translates: distance between neighbouring centers
    std::size_t index = 0, count = 1; // dct row index and band count
    double scale = 1.0;   // sgwt wavelet scale, heat tau, greens/decay exponent s
    double epsilon = 1.0; // greens
    double gamma = 1.0, lambda_min = 1.0; // sgwt scaling
    std::vector<double> coeffs;      // polynomial
    std::vector<double> eigenvalues; // decay by index, ascending
};

/// Spectral kernel on [0, lambda_bar]. Arguments outside are clamped to the interval, then
/// passed through the warps (outermost first) before the family formula.
struct Kernel {
    KernelFamily family = KernelFamily::polynomial;
    KernelParams params;
    double lambda_bar = 1.0;
    std::vector<Warping> warps;

    double operator()(double lambda) const;
    double unwarped(double x) const;
    SpectralFunction function() const;
};

Kernel ideal_band_kernel(double lo, double hi, bool closed_right, double lambda_bar);
Kernel heat_kernel(double tau, double lambda_bar);
Kernel greens_kernel(double epsilon, double s, double lambda_bar);
/// 1 / (l + 1)^s where l is the index of the first eigenvalue equal to lambda (ties share a value).
Kernel polynomial_decay_kernel(std::vector<double> eigenvalues, double s, double lambda_bar);
Kernel polynomial_kernel(std::vector<double> coeffs, double lambda_bar);
Kernel constant_kernel(double value, double lambda_bar);

/// Hammond's mother wavelet: x^2 below 1, a cubic spline on [1, 2], 4 / x^2 beyond.
double sgwt_mother(double x);

std::string family_name(KernelFamily f);

} // namespace lsgf
