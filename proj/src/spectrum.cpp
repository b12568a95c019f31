#include "lsgf/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "lsgf/chebyshev.hpp"
#include "lsgf/parallel.hpp"

namespace lsgf {

namespace {

// Fritsch-Carlson monotone slopes.
std::vector<double> monotone_slopes(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> m(n, 0.0);
    if (n < 2) return m;
    std::vector<double> d(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) d[k] = (y[k + 1] - y[k]) / (x[k + 1] - x[k]);
    m[0] = d[0];
    m[n - 1] = d[n - 2];
    for (std::size_t k = 1; k + 1 < n; ++k) m[k] = d[k - 1] * d[k] <= 0.0 ? 0.0 : 0.5 * (d[k - 1] + d[k]);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (d[k] == 0.0) {
            m[k] = 0.0;
            m[k + 1] = 0.0;
            continue;
        }
        const double a = m[k] / d[k];
        const double b = m[k + 1] / d[k];
        const double s = a * a + b * b;
        if (s > 9.0) {
            const double tau = 3.0 / std::sqrt(s);
            m[k] = tau * a * d[k];
            m[k + 1] = tau * b * d[k];
        }
    }
    return m;
}

std::vector<double> estimator_grid(double lambda_bar, std::size_t n_grid) {
    if (n_grid < 2) throw Error("CDF grid needs at least 2 points");
    std::vector<double> grid(n_grid);
    for (std::size_t i = 0; i < n_grid; ++i) {
        grid[i] = lambda_bar * static_cast<double>(i) / static_cast<double>(n_grid - 1);
    }
    return grid;
}

// Running-max repair, clamped to [0, 1], endpoint pinned to 1.
void repair_monotone(std::vector<double>& values) {
    double running = 0.0;
    for (auto& v : values) {
        v = std::clamp(v, 0.0, 1.0);
        running = std::max(running, v);
        v = running;
    }
    values.back() = 1.0;
}

std::vector<double> kpm_evaluate(const std::vector<double>& mean_moments, const std::vector<double>& grid,
                                 std::size_t degree, double lambda_bar) {
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto p = indicator_approx(grid[i], degree, lambda_bar, true);
        double acc = 0.0;
        for (std::size_t k = 0; k <= degree; ++k) acc += p.coeffs[k] * mean_moments[k];
        out[i] = acc;
    }
    return out;
}

double dc_tolerance(const EigenDecomposition& eig) {
    const double top = eig.size() ? std::abs(eig.eigenvalues[eig.eigenvalues.size() - 1]) : 1.0;
    return 1e-9 * std::max(1.0, top);
}

// Distinct breakpoints (eigenvalues clamped to >= 0 and merged within tolerance) with per-point masses.
void group_eigenvalues(const EigenDecomposition& eig, const std::vector<double>& mass, std::vector<double>& points,
                       std::vector<double>& cumulative) {
    const double tol = dc_tolerance(eig);
    double total = 0.0;
    for (std::size_t l = 0; l < eig.size(); ++l) {
        const double lam = std::max(0.0, eig.eigenvalues[static_cast<Eigen::Index>(l)]);
        total += mass[l];
        if (!points.empty() && lam - points.back() <= tol) {
            cumulative.back() = total;
        } else {
            points.push_back(lam);
            cumulative.push_back(total);
        }
    }
}

} // namespace

SpectralCDF SpectralCDF::step(std::vector<double> breakpoints, std::vector<double> values, double lambda_bar) {
    if (breakpoints.empty() || breakpoints.size() != values.size()) throw Error("malformed step CDF");
    for (std::size_t k = 1; k < breakpoints.size(); ++k) {
        if (!(breakpoints[k] > breakpoints[k - 1])) throw Error("CDF breakpoints must increase");
        if (values[k] < values[k - 1]) throw Error("CDF values must be nondecreasing");
    }
    SpectralCDF c;
    c.kind_ = Kind::step;
    c.grid_ = std::move(breakpoints);
    c.values_ = std::move(values);
    c.lambda_bar_ = std::max(lambda_bar, c.grid_.back());
    return c;
}

SpectralCDF SpectralCDF::monotone_cubic(std::vector<double> grid, std::vector<double> values) {
    if (grid.size() < 2 || grid.size() != values.size()) throw Error("malformed CDF grid");
    for (std::size_t k = 1; k < grid.size(); ++k) {
        if (!(grid[k] > grid[k - 1])) throw Error("CDF grid must increase");
        if (values[k] < values[k - 1]) throw Error("CDF values must be nondecreasing");
    }
    SpectralCDF c;
    c.kind_ = Kind::monotone_cubic;
    c.slopes_ = monotone_slopes(grid, values);
    c.grid_ = std::move(grid);
    c.values_ = std::move(values);
    c.lambda_bar_ = c.grid_.back();
    return c;
}

double SpectralCDF::operator()(double z) const {
    if (grid_.empty()) throw Error("empty CDF");
    if (kind_ == Kind::step) {
        // eigenvalues within rounding of z count as <= z
        const double zz = z + 1e-10 * std::max(1.0, lambda_bar_);
        const auto it = std::upper_bound(grid_.begin(), grid_.end(), zz);
        if (it == grid_.begin()) return 0.0;
        return values_[static_cast<std::size_t>(it - grid_.begin()) - 1];
    }
    if (z <= grid_.front()) return values_.front();
    if (z >= grid_.back()) return values_.back();
    const auto k = static_cast<std::size_t>(std::upper_bound(grid_.begin(), grid_.end(), z) - grid_.begin()) - 1;
    const double h = grid_[k + 1] - grid_[k];
    const double t = (z - grid_[k]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * values_[k] + h10 * h * slopes_[k] + h01 * values_[k + 1] + h11 * h * slopes_[k + 1];
}

double SpectralCDF::inverse(double q) const {
    if (kind_ == Kind::step) {
        for (std::size_t k = 0; k < grid_.size(); ++k) {
            if (values_[k] >= q - 1e-14) return grid_[k];
        }
        return lambda_bar_;
    }
    if ((*this)(grid_.front()) >= q) return grid_.front();
    double lo = grid_.front(), hi = grid_.back();
    for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((*this)(mid) >= q) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

SpectralCDF exact_spectral_cdf(const EigenDecomposition& eig, double lambda_bar) {
    if (eig.size() == 0) throw Error("empty eigendecomposition");
    const std::vector<double> mass(eig.size(), 1.0 / static_cast<double>(eig.size()));
    std::vector<double> points, cumulative;
    group_eigenvalues(eig, mass, points, cumulative);
    for (auto& v : cumulative) v = std::min(v, 1.0);
    cumulative.back() = 1.0;
    return SpectralCDF::step(std::move(points), std::move(cumulative), lambda_bar);
}

SpectralCDF estimate_spectral_cdf(const Laplacian& L, const CdfEstimateOptions& opts) {
    if (opts.n_probes < 1) throw Error("need at least one probe");
    if (opts.kpm_degree < 4) throw Error("kpm_degree must be at least 4");
    if (!(L.lambda_max_bound > 0.0)) throw Error("Laplacian spectral bound not set");
    const double lambda_bar = L.lambda_max_bound;
    const auto n = static_cast<Eigen::Index>(L.size());
    const std::size_t K = opts.kpm_degree;

    std::vector<std::vector<double>> per_probe(opts.n_probes);
    parallel_for(opts.n_probes, [&](std::size_t p) {
        std::seed_seq seq{static_cast<std::uint64_t>(opts.seed), static_cast<std::uint64_t>(p)};
        std::mt19937_64 rng(seq);
        Signal eta(n);
        for (Eigen::Index i = 0; i < n; ++i) eta[i] = (rng() >> 63) ? 1.0 : -1.0;
        per_probe[p] = chebyshev_moments(L, lambda_bar, eta, K);
    });
    std::vector<double> mean(K + 1, 0.0);
    for (const auto& mu : per_probe)
        for (std::size_t k = 0; k <= K; ++k) mean[k] += mu[k];
    for (auto& m : mean) m /= static_cast<double>(opts.n_probes) * static_cast<double>(n);

    auto grid = estimator_grid(lambda_bar, opts.n_grid);
    auto values = kpm_evaluate(mean, grid, K, lambda_bar);
    repair_monotone(values);
    return SpectralCDF::monotone_cubic(std::move(grid), std::move(values));
}

SpectralCDF exact_energy_cdf(const EigenDecomposition& eig, std::span<const Signal> training, double lambda_bar) {
    if (training.empty()) throw Error("need at least one training signal");
    const double tol = dc_tolerance(eig);
    std::vector<double> mass(eig.size(), 0.0);
    for (const auto& y : training) {
        if (static_cast<std::size_t>(y.size()) != eig.size()) throw Error("training signal length mismatch");
        const double norm = y.norm();
        if (norm == 0.0) throw Error("all-zero training signal");
        const Signal c = eig.eigenvectors.transpose() * (y / norm);
        double non_dc = 0.0;
        for (std::size_t l = 0; l < eig.size(); ++l) {
            if (eig.eigenvalues[static_cast<Eigen::Index>(l)] > tol) non_dc += c[static_cast<Eigen::Index>(l)] * c[static_cast<Eigen::Index>(l)];
        }
        if (non_dc <= 1e-24) throw Error("training signal has no energy outside the DC eigenspace");
        for (std::size_t l = 0; l < eig.size(); ++l) {
            if (eig.eigenvalues[static_cast<Eigen::Index>(l)] > tol) mass[l] += c[static_cast<Eigen::Index>(l)] * c[static_cast<Eigen::Index>(l)];
        }
    }
    double total = 0.0;
    for (double m : mass) total += m;
    for (auto& m : mass) m /= total;
    std::vector<double> points, cumulative;
    group_eigenvalues(eig, mass, points, cumulative);
    for (auto& v : cumulative) v = std::min(v, 1.0);
    cumulative.back() = 1.0;
    return SpectralCDF::step(std::move(points), std::move(cumulative), lambda_bar);
}

SpectralCDF estimate_energy_cdf(const Laplacian& L, std::span<const Signal> training, const CdfEstimateOptions& opts) {
    if (training.empty()) throw Error("need at least one training signal");
    if (opts.kpm_degree < 4) throw Error("kpm_degree must be at least 4");
    const double lambda_bar = L.lambda_max_bound;
    const std::size_t K = opts.kpm_degree;
    std::vector<double> sum(K + 1, 0.0);
    for (const auto& y : training) {
        check_signal(L, y, "training signal");
        const double norm = y.norm();
        if (norm == 0.0) throw Error("all-zero training signal");
        const Signal centered = (y.array() - y.mean()).matrix() / norm;
        if (centered.squaredNorm() <= 1e-24) throw Error("training signal has no energy outside the DC eigenspace");
        const auto mu = chebyshev_moments(L, lambda_bar, centered, K);
        for (std::size_t k = 0; k <= K; ++k) sum[k] += mu[k];
    }
    const double total = sum[0];
    for (auto& s : sum) s /= total;

    auto grid = estimator_grid(lambda_bar, opts.n_grid);
    auto values = kpm_evaluate(sum, grid, K, lambda_bar);
    values.front() = 0.0;
    repair_monotone(values);
    return SpectralCDF::monotone_cubic(std::move(grid), std::move(values));
}

double cdf_sup_distance(const SpectralCDF& a, const SpectralCDF& b, std::size_t n_grid) {
    const double top = std::max(a.lambda_bar(), b.lambda_bar());
    const double eps = 1e-9 * std::max(1.0, top);
    double worst = 0.0;
    // both functions live on [0, top]; probes outside it are clamped back in
    auto probe = [&](double z) {
        z = std::clamp(z, 0.0, top);
        worst = std::max(worst, std::abs(a(z) - b(z)));
    };
    for (const auto* c : {&a, &b}) {
        for (double z : c->grid()) {
            probe(z);
            probe(z - eps);
            probe(z + eps);
        }
    }
    for (std::size_t i = 0; i < n_grid; ++i) probe(top * static_cast<double>(i) / static_cast<double>(n_grid - 1));
    return worst;
}

} // namespace lsgf
