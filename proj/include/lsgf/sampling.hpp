#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "lsgf/dictionary.hpp"

namespace lsgf {

/// Per-band probability vectors over the vertices.
struct SamplingWeights {
    std::vector<Signal> bands;
};

/// Per-band center sets with the selection weight (Omega_j) of each chosen vertex.
struct CenterSets {
    CenterList centers;
    std::vector<Signal> weights;
};

SamplingWeights uniform_weights(std::size_t n, std::size_t J);

/// weight_j(i) proportional to the mean over Rademacher probes of (p_j(L) eta)(i)^2.
SamplingWeights nonuniform_weights(const Laplacian& L, std::span<const ChebyshevApprox> polys, std::size_t n_probes,
                                   std::uint64_t seed);

/// Exact counterpart: weight_j(i) proportional to sum_l g_j(lambda_l)^2 U(i, l)^2.
SamplingWeights exact_band_weights(const EigenDecomposition& eig, const FilterBank& bank);

/// base_j(i) * log(1 + |filtered_j(i)|), renormalized; bands where that vanishes keep base.
SamplingWeights signal_adapted_weights(const SamplingWeights& base, std::span<const Signal> filtered);

/// Sequential weighted draws per band. Without replacement each draw removes the vertex;
/// with replacement repeated draws collapse, so a band may get fewer vertices than asked.
CenterSets draw_centers(const SamplingWeights& w, std::span<const std::size_t> counts, bool replacement,
                        std::uint64_t seed);

/// Greedy selection by atom l1 norm with overlap suppression. Returns vertices in selection order.
std::vector<Vertex> ed_free_greedy(const Laplacian& L, const ChebyshevApprox& p, std::size_t count);

/// Splits `total` samples across bands in proportion to the estimated eigenvalue count in each
/// band's half-max support, optionally boosted by (1 + e_j / sum e). Every band gets at least one.
std::vector<std::size_t> allocate_samples(const SpectralCDF& cdf, const FilterBank& bank, std::size_t total,
                                          std::span<const double> energy = {});

struct ReconstructResult {
    Signal z;
    std::size_t iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

using LinearOperator = std::function<Signal(const Signal&)>;

/// Preconditioned CG on (kappa M^T Omega^-1 M + phi(L)) z = kappa M^T Omega^-1 alpha.
ReconstructResult band_reconstruct(const Laplacian& L, std::span<const Vertex> centers, const Signal& omega,
                                   const Signal& alpha, const ChebyshevApprox& penalty, double kappa = 1e4,
                                   double tol = 1e-10, std::size_t max_iter = 5000);

/// Same system with the penalty given as an operator; `penalty_diag` is its diagonal estimate
/// for the preconditioner.
ReconstructResult band_reconstruct(std::size_t n, std::span<const Vertex> centers, const Signal& omega,
                                   const Signal& alpha, const LinearOperator& penalty, double penalty_diag,
                                   double kappa = 1e4, double tol = 1e-10, std::size_t max_iter = 5000);

/// Partition of V into uniqueness sets, one per ideal band, sized by the band's eigenvalue count.
CenterSets uniqueness_partition(const EigenDecomposition& eig, const FilterBank& bank);

} // namespace lsgf
