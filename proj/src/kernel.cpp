#include "lsgf/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lsgf {

namespace {

constexpr double kPi = std::numbers::pi;

double meyer_aux(double x) {
    const double x4 = x * x * x * x;
    return x4 * (35.0 - 84.0 * x + 70.0 * x * x - 20.0 * x * x * x);
}

double dct_row(std::size_t k, std::size_t J, double pos) {
    const double a = k == 0 ? std::sqrt(1.0 / static_cast<double>(J)) : std::sqrt(2.0 / static_cast<double>(J));
    return a * std::cos(kPi * static_cast<double>(k) * (pos + 0.5) / static_cast<double>(J));
}

} // namespace

double Warping::operator()(double lambda) const {
    const double x = std::clamp(lambda, 0.0, lambda_bar);
    if (kind == WarpKind::log) return lambda_bar * std::log1p(nu * x) / std::log1p(nu * lambda_bar);
    const double p0 = (*cdf)(0.0);
    const double p1 = (*cdf)(lambda_bar);
    const double q = std::clamp(((*cdf)(x) - p0) / (p1 - p0), 0.0, 1.0);
    if (kind == WarpKind::log_spectrum_cdf) {
        return lambda_bar * std::log1p(nu * lambda_bar * q) / std::log1p(nu * lambda_bar);
    }
    return lambda_bar * q;
}

Warping make_log_warp(double lambda_bar, double nu) {
    if (!(nu > 0.0)) throw Error("log warp needs nu > 0");
    if (!(lambda_bar > 0.0)) throw Error("lambda_bar must be positive");
    return Warping{WarpKind::log, nu, lambda_bar, nullptr};
}

Warping make_cdf_warp(WarpKind kind, std::shared_ptr<const SpectralCDF> cdf, double lambda_bar, double nu) {
    if (kind == WarpKind::log) return make_log_warp(lambda_bar, nu);
    if (!cdf) throw Error("CDF warp needs a CDF");
    if (kind == WarpKind::log_spectrum_cdf && !(nu > 0.0)) throw Error("log warp needs nu > 0");
    if (!((*cdf)(lambda_bar) - (*cdf)(0.0) > 0.0)) throw Error("CDF has no mass above 0; cannot warp");
    return Warping{kind, nu, lambda_bar, std::move(cdf)};
}

double sgwt_mother(double x) {
    if (x < 1.0) return x * x;
    if (x <= 2.0) return -5.0 + x * (11.0 + x * (-6.0 + x));
    return 4.0 / (x * x);
}

double Kernel::unwarped(double x) const {
    const auto& p = params;
    switch (family) {
    case KernelFamily::ideal_band:
        return (x >= p.lo && (x < p.hi || (p.closed_right && x <= p.hi))) ? 1.0 : 0.0;
    case KernelFamily::hann_translate:
    case KernelFamily::itersine_translate:
    case KernelFamily::meyer_translate: {
        const double t = std::abs(x - p.center) / p.spacing;
        if (t >= 1.0) return 0.0;
        if (family == KernelFamily::hann_translate) return std::cos(0.5 * kPi * t);
        if (family == KernelFamily::itersine_translate) {
            const double c = std::cos(0.5 * kPi * t);
            return std::sin(0.5 * kPi * c * c);
        }
        return std::cos(0.5 * kPi * meyer_aux(t));
    }
    case KernelFamily::dct_translate: {
        const double pos = x / lambda_bar * static_cast<double>(p.count - 1);
        double total = 0.0;
        for (std::size_t k = 0; k < p.count; ++k) {
            const double v = dct_row(k, p.count, pos);
            total += v * v;
        }
        return dct_row(p.index, p.count, pos) / std::sqrt(total);
    }
    case KernelFamily::sgwt_scaling: {
        const double r = x / (0.6 * p.lambda_min);
        return p.gamma * std::exp(-r * r * r * r);
    }
    case KernelFamily::sgwt_wavelet:
        return sgwt_mother(p.scale * x);
    case KernelFamily::greens:
        return p.epsilon / std::pow(x + p.epsilon, p.scale);
    case KernelFamily::diffusion_heat:
        return std::exp(-p.scale * x);
    case KernelFamily::polynomial_decay_by_index: {
        const double tol = 1e-9 * std::max(1.0, lambda_bar);
        const auto l = std::lower_bound(p.eigenvalues.begin(), p.eigenvalues.end(), x - tol) - p.eigenvalues.begin();
        return 1.0 / std::pow(static_cast<double>(l) + 1.0, p.scale);
    }
    case KernelFamily::polynomial: {
        double acc = 0.0;
        for (std::size_t k = p.coeffs.size(); k-- > 0;) acc = acc * x + p.coeffs[k];
        return acc;
    }
    }
    return 0.0;
}

double Kernel::operator()(double lambda) const {
    double x = std::clamp(lambda, 0.0, lambda_bar);
    for (const auto& w : warps) x = w(x);
    return unwarped(x);
}

SpectralFunction Kernel::function() const {
    return [k = *this](double lambda) { return k(lambda); };
}

Kernel ideal_band_kernel(double lo, double hi, bool closed_right, double lambda_bar) {
    Kernel k{KernelFamily::ideal_band, {}, lambda_bar, {}};
    k.params.lo = lo;
    k.params.hi = hi;
    k.params.closed_right = closed_right;
    return k;
}

Kernel heat_kernel(double tau, double lambda_bar) {
    Kernel k{KernelFamily::diffusion_heat, {}, lambda_bar, {}};
    k.params.scale = tau;
    return k;
}

Kernel greens_kernel(double epsilon, double s, double lambda_bar) {
    if (!(epsilon > 0.0)) throw Error("greens kernel needs epsilon > 0");
    Kernel k{KernelFamily::greens, {}, lambda_bar, {}};
    k.params.epsilon = epsilon;
    k.params.scale = s;
    return k;
}

Kernel polynomial_decay_kernel(std::vector<double> eigenvalues, double s, double lambda_bar) {
    std::sort(eigenvalues.begin(), eigenvalues.end());
    Kernel k{KernelFamily::polynomial_decay_by_index, {}, lambda_bar, {}};
    k.params.eigenvalues = std::move(eigenvalues);
    k.params.scale = s;
    return k;
}

Kernel polynomial_kernel(std::vector<double> coeffs, double lambda_bar) {
    Kernel k{KernelFamily::polynomial, {}, lambda_bar, {}};
    k.params.coeffs = std::move(coeffs);
    return k;
}

Kernel constant_kernel(double value, double lambda_bar) { return polynomial_kernel({value}, lambda_bar); }

std::string family_name(KernelFamily f) {
    switch (f) {
    case KernelFamily::ideal_band: return "ideal_band";
    case KernelFamily::hann_translate: return "hann_translate";
    case KernelFamily::itersine_translate: return "itersine_translate";
    case KernelFamily::meyer_translate: return "meyer_translate";
    case KernelFamily::dct_translate: return "dct_translate";
    case KernelFamily::sgwt_scaling: return "sgwt_scaling";
    case KernelFamily::sgwt_wavelet: return "sgwt_wavelet";
    case KernelFamily::greens: return "greens";
    case KernelFamily::diffusion_heat: return "diffusion_heat";
    case KernelFamily::polynomial_decay_by_index: return "polynomial_decay_by_index";
    case KernelFamily::polynomial: return "polynomial";
    }
    return "unknown";
}

} // namespace lsgf
