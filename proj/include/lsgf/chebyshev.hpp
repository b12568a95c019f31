#pragma once

#include <functional>
#include <span>
#include <vector>

#include "lsgf/graph.hpp"

namespace lsgf {

using SpectralFunction = std::function<double(double)>;

/// Polynomial p(lambda) = sum_k c_k T_k(2 lambda / lambda_bar - 1) on [0, lambda_bar].
/// The c_0 term is stored already halved, so evaluation is a plain sum.
struct ChebyshevApprox {
    std::vector<double> coeffs;
    double lambda_bar = 1.0;
    bool jackson = false;

    std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
    double operator()(double lambda) const;
};

/// Jackson damping factors g_0..g_K for a degree-K expansion.
std::vector<double> jackson_factors(std::size_t degree);

/// Collocation fit at max(4K, 256) Chebyshev nodes.
ChebyshevApprox chebyshev_fit(const SpectralFunction& kernel, std::size_t degree, double lambda_bar,
                              bool jackson = false);

/// Closed-form Chebyshev expansion of the indicator 1{lambda <= z}.
ChebyshevApprox indicator_approx(double z, std::size_t degree, double lambda_bar, bool jackson = true);

/// p(L) f via the three-term recurrence (K sparse products).
Signal apply_poly_filter(const ChebyshevApprox& p, const Laplacian& L, const Signal& f);

/// Several polynomials on one signal sharing a single recurrence. Output j is bitwise
/// identical to apply_poly_filter(ps[j], L, f).
std::vector<Signal> apply_poly_filters(std::span<const ChebyshevApprox> ps, const Laplacian& L, const Signal& f);

/// mu_k = v^T T_k(L~) v for k = 0..degree, L~ the Laplacian mapped onto [-1, 1] via lambda_bar.
std::vector<double> chebyshev_moments(const Laplacian& L, double lambda_bar, const Signal& v, std::size_t degree);

/// max |kernel - p| over a uniform grid of n_grid points on [0, lambda_bar].
double sup_error(const ChebyshevApprox& p, const SpectralFunction& kernel, std::size_t n_grid = 1000);

/// Materializes p(L) delta_i; entries beyond degree hops from i vanish.
Signal atom_localization_check(const ChebyshevApprox& p, const Laplacian& L, Vertex i);

/// Band penalty (1 - p^2)^2, fitted at degree 4K so it is reproduced exactly.
ChebyshevApprox compose_penalty(const ChebyshevApprox& p);

} // namespace lsgf
