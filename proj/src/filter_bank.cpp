#include "lsgf/filter_bank.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace lsgf {

namespace {

void check_J(std::size_t J) {
    if (J < 2) throw Error("filter bank needs J >= 2");
}

std::vector<double> target_fractions(std::size_t J, BandSpacing spacing) {
    std::vector<double> q(J - 1);
    for (std::size_t k = 1; k < J; ++k) {
        q[k - 1] = spacing == BandSpacing::uniform ? static_cast<double>(k) / static_cast<double>(J)
                                                   : std::ldexp(1.0, -static_cast<int>(J - k));
    }
    return q;
}

FilterBank warp_all(const FilterBank& base, const Warping& w, const std::string& prefix) {
    FilterBank out = base;
    for (auto& k : out.kernels) {
        if (k.lambda_bar != w.lambda_bar) throw Error("warp interval does not match the kernel interval");
        k.warps.insert(k.warps.begin(), w);
    }
    out.design_name = prefix + base.design_name;
    return out;
}

} // namespace

std::vector<ChebyshevApprox> FilterBank::approximate(std::size_t degree, bool jackson) const {
    std::vector<ChebyshevApprox> out;
    out.reserve(kernels.size());
    for (const auto& k : kernels) out.push_back(chebyshev_fit(k.function(), degree, lambda_bar, jackson));
    return out;
}

std::vector<double> ideal_band_edges(double lambda_bar, std::size_t J, BandSpacing spacing, const SpectralCDF* cdf) {
    check_J(J);
    if (!(lambda_bar > 0.0)) throw Error("lambda_bar must be positive");
    const auto q = target_fractions(J, spacing);
    std::vector<double> edges;
    edges.reserve(q.size());
    if (cdf == nullptr) {
        for (double t : q) edges.push_back(lambda_bar * t);
        return edges;
    }
    const auto grid = cdf->grid();
    const auto values = cdf->values();
    if (cdf->kind() == SpectralCDF::Kind::step) {
        for (double t : q) {
            std::size_t k = 0;
            while (k < values.size() && values[k] < t - 1e-12) ++k;
            if (k == 0) throw Error("band edges collapse: the lowest eigenvalue already reaches the target count");
            if (k == values.size()) k = values.size() - 1;
            edges.push_back(0.5 * (grid[k - 1] + grid[k]));
        }
    } else {
        if (J > grid.size() - 1) throw Error("J exceeds the resolution of the spectral CDF grid");
        for (double t : q) edges.push_back(cdf->inverse(t));
    }
    double prev = 0.0;
    for (double e : edges) {
        if (!(e > prev) || !(e < lambda_bar)) throw Error("band edges collapse: J exceeds the resolution of the CDF");
        prev = e;
    }
    return edges;
}

std::vector<double> shift_edges_to_low_density(std::span<const double> edges, const SpectralCDF& cdf, double window) {
    if (!(window >= 0.0)) throw Error("edge-shift window must be nonnegative");
    const double lambda_bar = cdf.lambda_bar();
    const double w = window * lambda_bar;
    const double min_gap = 1e-6 * lambda_bar;
    std::vector<double> out(edges.begin(), edges.end());
    constexpr int kPoints = 401;
    for (std::size_t e = 0; e < out.size(); ++e) {
        const double lo_limit = e == 0 ? min_gap : out[e - 1] + min_gap;
        const double hi_limit = e + 1 < out.size() ? edges[e + 1] - min_gap : lambda_bar - min_gap;
        const double lo = std::max(lo_limit, edges[e] - w);
        const double hi = std::min(hi_limit, edges[e] + w);
        if (!(hi > lo)) continue;
        const double h = std::max((hi - lo) / (kPoints - 1), 1e-9 * lambda_bar);
        double best = edges[e], best_density = std::numeric_limits<double>::infinity();
        for (int i = 0; i < kPoints; ++i) {
            const double z = lo + (hi - lo) * i / (kPoints - 1);
            const double density = cdf(z + h) - cdf(z - h);
            if (density < best_density - 1e-15 ||
                (density <= best_density + 1e-15 && std::abs(z - edges[e]) < std::abs(best - edges[e]))) {
                best = z;
                best_density = density;
            }
        }
        out[e] = best;
    }
    return out;
}

FilterBank make_ideal_partition_from_edges(double lambda_bar, std::span<const double> edges) {
    FilterBank bank;
    bank.lambda_bar = lambda_bar;
    bank.design_name = "ideal";
    double lo = 0.0;
    for (double e : edges) {
        if (!(e > lo) || !(e < lambda_bar)) throw Error("ideal band edges must increase inside (0, lambda_bar)");
        bank.kernels.push_back(ideal_band_kernel(lo, e, false, lambda_bar));
        lo = e;
    }
    bank.kernels.push_back(ideal_band_kernel(lo, lambda_bar, true, lambda_bar));
    return bank;
}

FilterBank make_ideal_partition(double lambda_bar, std::size_t J, BandSpacing spacing, const SpectralCDF* cdf) {
    const auto edges = ideal_band_edges(lambda_bar, J, spacing, cdf);
    auto bank = make_ideal_partition_from_edges(lambda_bar, edges);
    bank.design_name = std::string(cdf ? "spectrum-adapted " : "") +
                       (spacing == BandSpacing::uniform ? "uniform ideal" : "octave ideal");
    return bank;
}

FilterBank make_uniform_translates(double lambda_bar, std::size_t J, Prototype prototype) {
    check_J(J);
    if (!(lambda_bar > 0.0)) throw Error("lambda_bar must be positive");
    FilterBank bank;
    bank.lambda_bar = lambda_bar;
    const double spacing = lambda_bar / static_cast<double>(J - 1);
    for (std::size_t j = 0; j < J; ++j) {
        Kernel k;
        k.lambda_bar = lambda_bar;
        k.params.center = spacing * static_cast<double>(j);
        k.params.spacing = spacing;
        k.params.index = j;
        k.params.count = J;
        switch (prototype) {
        case Prototype::hann: k.family = KernelFamily::hann_translate; break;
        case Prototype::itersine: k.family = KernelFamily::itersine_translate; break;
        case Prototype::meyer: k.family = KernelFamily::meyer_translate; break;
        case Prototype::dct: k.family = KernelFamily::dct_translate; break;
        }
        bank.kernels.push_back(std::move(k));
    }
    static constexpr const char* names[] = {"hann", "itersine", "meyer", "dct"};
    bank.design_name = std::string("uniform ") + names[static_cast<int>(prototype)];
    return bank;
}

FilterBank make_log_warped(const FilterBank& base, double nu) {
    return warp_all(base, make_log_warp(base.lambda_bar, nu), "log-warped ");
}

FilterBank make_spectrum_adapted(const FilterBank& base, const SpectralCDF& cdf, bool wavelet, double nu) {
    auto shared = std::make_shared<const SpectralCDF>(cdf);
    const auto kind = wavelet ? WarpKind::log_spectrum_cdf : WarpKind::spectrum_cdf;
    return warp_all(base, make_cdf_warp(kind, std::move(shared), base.lambda_bar, nu),
                    wavelet ? "spectrum-adapted wavelet " : "spectrum-adapted ");
}

FilterBank make_signal_adapted(const FilterBank& base, const SpectralCDF& energy_cdf) {
    auto shared = std::make_shared<const SpectralCDF>(energy_cdf);
    return warp_all(base, make_cdf_warp(WarpKind::energy_cdf, std::move(shared), base.lambda_bar),
                    "signal-adapted ");
}

FilterBank make_sgwt(double lambda_bar, std::size_t J) {
    check_J(J);
    if (!(lambda_bar > 0.0)) throw Error("lambda_bar must be positive");
    const double lambda_min = lambda_bar / 20.0;
    const double s_max = 2.0 / lambda_min;
    const double s_min = 1.0 / lambda_bar;
    const std::size_t n_scales = J - 1;

    FilterBank bank;
    bank.lambda_bar = lambda_bar;
    bank.design_name = "sgwt";
    std::vector<Kernel> wavelets;
    for (std::size_t j = 0; j < n_scales; ++j) {
        const double t = n_scales == 1 ? 1.0 : static_cast<double>(j) / static_cast<double>(n_scales - 1);
        Kernel k{KernelFamily::sgwt_wavelet, {}, lambda_bar, {}};
        k.params.scale = std::exp(std::log(s_max) + t * (std::log(s_min) - std::log(s_max)));
        wavelets.push_back(std::move(k));
    }
    double gamma = 0.0;
    for (double x : uniform_grid(lambda_bar, 2000)) {
        double sum = 0.0;
        for (const auto& w : wavelets) sum += w(x);
        gamma = std::max(gamma, sum);
    }
    Kernel scaling{KernelFamily::sgwt_scaling, {}, lambda_bar, {}};
    scaling.params.gamma = gamma;
    scaling.params.lambda_min = lambda_min;
    bank.kernels.push_back(std::move(scaling));
    for (auto& w : wavelets) bank.kernels.push_back(std::move(w));
    return bank;
}

std::vector<double> evaluate_G(const FilterBank& bank, std::span<const double> points) {
    std::vector<double> g(points.size(), 0.0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (const auto& k : bank.kernels) {
            const double v = k(points[i]);
            g[i] += v * v;
        }
    }
    return g;
}

std::vector<double> evaluate_G(std::span<const ChebyshevApprox> polys, std::span<const double> points) {
    std::vector<double> g(points.size(), 0.0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (const auto& p : polys) {
            const double v = p(points[i]);
            g[i] += v * v;
        }
    }
    return g;
}

std::vector<double> uniform_grid(double lambda_bar, std::size_t n) {
    if (n < 2) throw Error("grid needs at least 2 points");
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i) grid[i] = lambda_bar * static_cast<double>(i) / static_cast<double>(n - 1);
    return grid;
}

BandSpacing parse_spacing(const std::string& s) {
    if (s == "uniform") return BandSpacing::uniform;
    if (s == "octave") return BandSpacing::octave;
    throw Error("unknown band spacing '" + s + "'");
}

Prototype parse_prototype(const std::string& s) {
    if (s == "hann") return Prototype::hann;
    if (s == "itersine") return Prototype::itersine;
    if (s == "meyer") return Prototype::meyer;
    if (s == "dct") return Prototype::dct;
    throw Error("unknown prototype '" + s + "'");
}

} // namespace lsgf
