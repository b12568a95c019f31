#include "lsgf/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lsgf {

namespace {

constexpr double kPi = std::numbers::pi;

double to_unit(double lambda, double lambda_bar) {
    return std::clamp(2.0 * lambda / lambda_bar - 1.0, -1.0, 1.0);
}

void check_interval(const ChebyshevApprox& p, const Laplacian& L) {
    if (!(p.lambda_bar > 0.0)) throw Error("polynomial interval must be positive");
    if (L.lambda_max_bound > 0.0 && p.lambda_bar < L.lambda_max_bound * (1.0 - 1e-12)) {
        throw Error("polynomial fitted on [0, " + std::to_string(p.lambda_bar) +
                    "] does not cover the Laplacian's spectral bound " + std::to_string(L.lambda_max_bound));
    }
}

} // namespace

double ChebyshevApprox::operator()(double lambda) const {
    if (coeffs.empty()) return 0.0;
    const double x = to_unit(lambda, lambda_bar);
    // Clenshaw
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 1;) {
        const double b0 = coeffs[k] + 2.0 * x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return coeffs[0] + x * b1 - b2;
}

std::vector<double> jackson_factors(std::size_t degree) {
    const double kp1 = static_cast<double>(degree) + 1.0;
    const double a = kPi / kp1;
    std::vector<double> g(degree + 1);
    for (std::size_t k = 0; k <= degree; ++k) {
        const double kk = static_cast<double>(k);
        g[k] = ((kp1 - kk) * std::cos(kk * a) + std::sin(kk * a) * std::cos(a) / std::sin(a)) / kp1;
    }
    if (degree == 0) g[0] = 1.0;
    return g;
}

ChebyshevApprox chebyshev_fit(const SpectralFunction& kernel, std::size_t degree, double lambda_bar, bool jackson) {
    if (!(lambda_bar > 0.0)) throw Error("lambda_bar must be positive");
    const std::size_t m = std::max<std::size_t>(4 * degree, 256);
    std::vector<double> samples(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double theta = kPi * (static_cast<double>(j) + 0.5) / static_cast<double>(m);
        samples[j] = kernel(0.5 * lambda_bar * (std::cos(theta) + 1.0));
    }
    ChebyshevApprox p{std::vector<double>(degree + 1, 0.0), lambda_bar, jackson};
    for (std::size_t k = 0; k <= degree; ++k) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            acc += samples[j] * std::cos(kPi * static_cast<double>(k) * (static_cast<double>(j) + 0.5) /
                                         static_cast<double>(m));
        }
        p.coeffs[k] = 2.0 * acc / static_cast<double>(m);
    }
    p.coeffs[0] *= 0.5;
    if (jackson) {
        const auto g = jackson_factors(degree);
        for (std::size_t k = 0; k <= degree; ++k) p.coeffs[k] *= g[k];
    }
    return p;
}

ChebyshevApprox indicator_approx(double z, std::size_t degree, double lambda_bar, bool jackson) {
    const double theta = std::acos(to_unit(z, lambda_bar));
    ChebyshevApprox p{std::vector<double>(degree + 1, 0.0), lambda_bar, jackson};
    p.coeffs[0] = (kPi - theta) / kPi;
    for (std::size_t k = 1; k <= degree; ++k) {
        const double kk = static_cast<double>(k);
        p.coeffs[k] = -2.0 * std::sin(kk * theta) / (kk * kPi);
    }
    if (jackson) {
        const auto g = jackson_factors(degree);
        for (std::size_t k = 0; k <= degree; ++k) p.coeffs[k] *= g[k];
    }
    return p;
}

std::vector<Signal> apply_poly_filters(std::span<const ChebyshevApprox> ps, const Laplacian& L, const Signal& f) {
    check_signal(L, f);
    std::vector<Signal> out;
    if (ps.empty()) return out;
    const double lambda_bar = ps.front().lambda_bar;
    std::size_t degree = 0;
    for (const auto& p : ps) {
        check_interval(p, L);
        if (p.lambda_bar != lambda_bar) throw Error("fused application needs a common interval");
        degree = std::max(degree, p.degree());
    }
    const double scale = 2.0 / lambda_bar;
    out.reserve(ps.size());
    for (const auto& p : ps) out.push_back(p.coeffs.empty() ? Signal::Zero(f.size()) : Signal(p.coeffs[0] * f));
    if (degree == 0) return out;

    // T_{k+1} = 2 L~ T_k - T_{k-1}, with L~ = scale * L - I
    Signal t_prev = f;
    Signal lt;
    L.matrix.multiply(f, lt);
    Signal t_cur = scale * lt - f;
    Signal t_next;
    for (std::size_t k = 1; k <= degree; ++k) {
        for (std::size_t j = 0; j < ps.size(); ++j) {
            if (k < ps[j].coeffs.size()) out[j] += ps[j].coeffs[k] * t_cur;
        }
        if (k == degree) break;
        L.matrix.multiply(t_cur, lt);
        t_next = 2.0 * (scale * lt - t_cur) - t_prev;
        t_prev.swap(t_cur);
        t_cur.swap(t_next);
    }
    return out;
}

Signal apply_poly_filter(const ChebyshevApprox& p, const Laplacian& L, const Signal& f) {
    return std::move(apply_poly_filters(std::span(&p, 1), L, f).front());
}

std::vector<double> chebyshev_moments(const Laplacian& L, double lambda_bar, const Signal& v, std::size_t degree) {
    check_signal(L, v);
    const double scale = 2.0 / lambda_bar;
    std::vector<double> mu(degree + 1);
    mu[0] = v.squaredNorm();
    if (degree == 0) return mu;
    Signal t_prev = v;
    Signal lt;
    L.matrix.multiply(v, lt);
    Signal t_cur = scale * lt - v;
    Signal t_next;
    for (std::size_t k = 1; k <= degree; ++k) {
        mu[k] = v.dot(t_cur);
        if (k == degree) break;
        L.matrix.multiply(t_cur, lt);
        t_next = 2.0 * (scale * lt - t_cur) - t_prev;
        t_prev.swap(t_cur);
        t_cur.swap(t_next);
    }
    return mu;
}

double sup_error(const ChebyshevApprox& p, const SpectralFunction& kernel, std::size_t n_grid) {
    if (n_grid < 2) throw Error("sup_error needs at least 2 grid points");
    double worst = 0.0;
    for (std::size_t i = 0; i < n_grid; ++i) {
        const double lambda = p.lambda_bar * static_cast<double>(i) / static_cast<double>(n_grid - 1);
        worst = std::max(worst, std::abs(kernel(lambda) - p(lambda)));
    }
    return worst;
}

Signal atom_localization_check(const ChebyshevApprox& p, const Laplacian& L, Vertex i) {
    if (i < 0 || static_cast<std::size_t>(i) >= L.size()) throw Error("vertex out of range");
    Signal delta = Signal::Zero(static_cast<Eigen::Index>(L.size()));
    delta[i] = 1.0;
    return apply_poly_filter(p, L, delta);
}

ChebyshevApprox compose_penalty(const ChebyshevApprox& p) {
    // (1 - p^2)^2 has degree 4K; collocation at that degree reproduces it to rounding.
    return chebyshev_fit(
        [&p](double lambda) {
            const double v = p(lambda);
            const double d = 1.0 - v * v;
            return d * d;
        },
        4 * p.degree(), p.lambda_bar, false);
}

} // namespace lsgf
