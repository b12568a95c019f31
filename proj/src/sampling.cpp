#include "lsgf/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "lsgf/parallel.hpp"

namespace lsgf {

namespace {

void normalize_or_uniform(Signal& w) {
    const double s = w.sum();
    if (s > 0.0) {
        w /= s;
    } else {
        w.setConstant(1.0 / static_cast<double>(w.size()));
    }
}

Signal rademacher(Eigen::Index n, std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{seed, stream};
    std::mt19937_64 rng(seq);
    Signal eta(n);
    for (Eigen::Index i = 0; i < n; ++i) eta[i] = (rng() >> 63) ? 1.0 : -1.0;
    return eta;
}

} // namespace

SamplingWeights uniform_weights(std::size_t n, std::size_t J) {
    if (n == 0) throw Error("empty graph");
    SamplingWeights w;
    w.bands.assign(J, Signal::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n)));
    return w;
}

SamplingWeights nonuniform_weights(const Laplacian& L, std::span<const ChebyshevApprox> polys, std::size_t n_probes,
                                   std::uint64_t seed) {
    if (n_probes < 1) throw Error("need at least one probe");
    const auto n = static_cast<Eigen::Index>(L.size());
    const std::size_t J = polys.size();
    SamplingWeights w;
    w.bands.assign(J, Signal::Zero(n));
    constexpr std::size_t kChunk = 64;
    for (std::size_t start = 0; start < n_probes; start += kChunk) {
        const std::size_t len = std::min(kChunk, n_probes - start);
        std::vector<std::vector<Signal>> slots(len);
        parallel_for(len, [&](std::size_t k) {
            slots[k] = apply_poly_filters(polys, L, rademacher(n, seed, start + k));
        });
        for (const auto& slot : slots)
            for (std::size_t j = 0; j < J; ++j) w.bands[j] += slot[j].cwiseAbs2();
    }
    for (auto& b : w.bands) normalize_or_uniform(b);
    return w;
}

SamplingWeights exact_band_weights(const EigenDecomposition& eig, const FilterBank& bank) {
    const Matrix u2 = eig.eigenvectors.cwiseAbs2();
    SamplingWeights w;
    for (const auto& k : bank.kernels) {
        Signal r2(static_cast<Eigen::Index>(eig.size()));
        for (Eigen::Index l = 0; l < r2.size(); ++l) {
            const double v = k(std::max(0.0, eig.eigenvalues[l]));
            r2[l] = v * v;
        }
        Signal b = u2 * r2;
        normalize_or_uniform(b);
        w.bands.push_back(std::move(b));
    }
    return w;
}

SamplingWeights signal_adapted_weights(const SamplingWeights& base, std::span<const Signal> filtered) {
    if (filtered.size() != base.bands.size()) throw Error("need one filtered signal per band");
    SamplingWeights out;
    for (std::size_t j = 0; j < base.bands.size(); ++j) {
        if (filtered[j].size() != base.bands[j].size()) throw Error("filtered signal length mismatch");
        Signal w = base.bands[j].cwiseProduct(filtered[j].cwiseAbs().unaryExpr([](double x) { return std::log1p(x); }));
        const double s = w.sum();
        if (s > 0.0) {
            out.bands.push_back(w / s);
        } else {
            out.bands.push_back(base.bands[j]);
        }
    }
    return out;
}

CenterSets draw_centers(const SamplingWeights& w, std::span<const std::size_t> counts, bool replacement,
                        std::uint64_t seed) {
    if (counts.size() != w.bands.size()) throw Error("need one count per band");
    CenterSets out;
    for (std::size_t j = 0; j < counts.size(); ++j) {
        const Signal& weights = w.bands[j];
        const auto positive = static_cast<std::size_t>((weights.array() > 0.0).count());
        if (!replacement && counts[j] > positive) {
            throw Error("band " + std::to_string(j) + " asks for " + std::to_string(counts[j]) +
                        " centers but only " + std::to_string(positive) + " vertices have positive weight");
        }
        if (counts[j] > 0 && positive == 0) throw Error("band has no positively weighted vertex");
        std::seed_seq seq{seed, static_cast<std::uint64_t>(j)};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::vector<double> remaining(weights.data(), weights.data() + weights.size());
        std::vector<Vertex> chosen;
        for (std::size_t t = 0; t < counts[j]; ++t) {
            const double total = std::accumulate(remaining.begin(), remaining.end(), 0.0);
            const double u = unif(rng) * total;
            double acc = 0.0;
            std::size_t pick = remaining.size();
            std::size_t last_positive = 0;
            for (std::size_t i = 0; i < remaining.size(); ++i) {
                if (remaining[i] <= 0.0) continue;
                last_positive = i;
                acc += remaining[i];
                if (u < acc) {
                    pick = i;
                    break;
                }
            }
            if (pick == remaining.size()) pick = last_positive;
            chosen.push_back(static_cast<Vertex>(pick));
            if (!replacement) remaining[pick] = 0.0;
        }
        std::sort(chosen.begin(), chosen.end());
        chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
        Signal omega(static_cast<Eigen::Index>(chosen.size()));
        for (std::size_t k = 0; k < chosen.size(); ++k) omega[static_cast<Eigen::Index>(k)] = weights[chosen[k]];
        out.centers.push_back(std::move(chosen));
        out.weights.push_back(std::move(omega));
    }
    return out;
}

std::vector<Vertex> ed_free_greedy(const Laplacian& L, const ChebyshevApprox& p, std::size_t count) {
    const std::size_t n = L.size();
    if (count > n) throw Error("cannot select more centers than vertices");
    Matrix atoms(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    parallel_for(n, [&](std::size_t i) {
        atoms.col(static_cast<Eigen::Index>(i)) = atom_localization_check(p, L, static_cast<Vertex>(i));
    });
    std::vector<double> score(n);
    for (std::size_t i = 0; i < n; ++i) score[i] = atoms.col(static_cast<Eigen::Index>(i)).lpNorm<1>();
    std::vector<bool> taken(n, false);
    std::vector<Vertex> selected;
    for (std::size_t t = 0; t < count; ++t) {
        std::size_t best = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (!taken[i] && (best == n || score[i] > score[best])) best = i;
        }
        taken[best] = true;
        selected.push_back(static_cast<Vertex>(best));
        const auto col = atoms.col(static_cast<Eigen::Index>(best));
        const double peak = col.cwiseAbs().maxCoeff();
        if (peak <= 0.0) continue;
        for (std::size_t m = 0; m < n; ++m) {
            const double a = std::abs(col[static_cast<Eigen::Index>(m)]);
            if (!taken[m] && a > 0.01 * peak) score[m] *= 1.0 - a / peak;
        }
    }
    return selected;
}

std::vector<std::size_t> allocate_samples(const SpectralCDF& cdf, const FilterBank& bank, std::size_t total,
                                          std::span<const double> energy) {
    const std::size_t J = bank.size();
    if (total < J) throw Error("total sample budget is smaller than the number of bands");
    if (!energy.empty() && energy.size() != J) throw Error("need one energy value per band");
    const auto grid = uniform_grid(bank.lambda_bar, 4001);
    std::vector<double> cdf_at(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) cdf_at[i] = cdf(grid[i]);

    std::vector<double> share(J, 0.0);
    for (std::size_t j = 0; j < J; ++j) {
        std::vector<double> g2(grid.size());
        double peak = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double v = bank.kernels[j](grid[i]);
            g2[i] = v * v;
            peak = std::max(peak, g2[i]);
        }
        if (peak <= 0.0) continue;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (g2[i] >= 0.5 * peak) share[j] += i == 0 ? cdf_at[0] : cdf_at[i] - cdf_at[i - 1];
        }
    }
    if (!energy.empty()) {
        const double esum = std::accumulate(energy.begin(), energy.end(), 0.0);
        if (esum > 0.0)
            for (std::size_t j = 0; j < J; ++j) share[j] *= 1.0 + energy[j] / esum;
    }
    double ssum = std::accumulate(share.begin(), share.end(), 0.0);
    if (!(ssum > 0.0)) {
        share.assign(J, 1.0);
        ssum = static_cast<double>(J);
    }

    std::vector<std::size_t> counts(J);
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t j = 0; j < J; ++j) {
        const double target = static_cast<double>(total) * share[j] / ssum;
        counts[j] = static_cast<std::size_t>(std::floor(target));
        assigned += counts[j];
        remainders.emplace_back(target - std::floor(target), j);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; assigned < total; ++k, ++assigned) counts[remainders[k % J].second] += 1;
    for (std::size_t j = 0; j < J; ++j) {
        if (counts[j] > 0) continue;
        const auto donor = static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
        counts[donor] -= 1;
        counts[j] = 1;
    }
    return counts;
}

ReconstructResult band_reconstruct(std::size_t n, std::span<const Vertex> centers, const Signal& omega,
                                   const Signal& alpha, const LinearOperator& penalty, double penalty_diag,
                                   double kappa, double tol, std::size_t max_iter) {
    if (!(kappa > 0.0)) throw Error("kappa must be positive");
    if (static_cast<std::size_t>(omega.size()) != centers.size() ||
        static_cast<std::size_t>(alpha.size()) != centers.size()) {
        throw Error("centers, weights and samples must have equal length");
    }
    const auto nn = static_cast<Eigen::Index>(n);
    Signal data_diag = Signal::Zero(nn);
    Signal rhs = Signal::Zero(nn);
    for (std::size_t k = 0; k < centers.size(); ++k) {
        const auto i = centers[k];
        if (i < 0 || static_cast<std::size_t>(i) >= n) throw Error("center vertex out of range");
        const double w = omega[static_cast<Eigen::Index>(k)];
        if (!(w > 0.0)) throw Error("sampling weights must be positive");
        data_diag[i] += kappa / w;
        rhs[i] += kappa / w * alpha[static_cast<Eigen::Index>(k)];
    }
    const Signal precond = (data_diag.array() + std::max(penalty_diag, 1e-12)).inverse().matrix();
    auto apply = [&](const Signal& z) -> Signal { return data_diag.cwiseProduct(z) + penalty(z); };

    ReconstructResult res;
    res.z = Signal::Zero(nn);
    const double bnorm = rhs.norm();
    if (bnorm == 0.0) {
        res.converged = true;
        return res;
    }
    // Convergence is measured in the preconditioned norm: the data rows are scaled by kappa, so the
    // plain residual would stop before the penalty rows are resolved.
    Signal r = rhs;
    Signal y = precond.cwiseProduct(r);
    Signal p = y;
    double ry = r.dot(y);
    const double ry0 = ry;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        const Signal ap = apply(p);
        const double denom = p.dot(ap);
        if (!(denom > 0.0)) break;
        const double a = ry / denom;
        res.z += a * p;
        r -= a * ap;
        res.iterations = it;
        y = precond.cwiseProduct(r);
        const double ry_new = r.dot(y);
        res.relative_residual = std::sqrt(std::max(ry_new, 0.0) / ry0);
        if (res.relative_residual <= tol) {
            res.converged = true;
            break;
        }
        p = y + (ry_new / ry) * p;
        ry = ry_new;
    }
    return res;
}

ReconstructResult band_reconstruct(const Laplacian& L, std::span<const Vertex> centers, const Signal& omega,
                                   const Signal& alpha, const ChebyshevApprox& penalty, double kappa, double tol,
                                   std::size_t max_iter) {
    double mean = 0.0;
    const auto grid = uniform_grid(penalty.lambda_bar, 200);
    for (double x : grid) mean += penalty(x);
    mean /= static_cast<double>(grid.size());
    return band_reconstruct(
        L.size(), centers, omega, alpha, [&](const Signal& z) { return apply_poly_filter(penalty, L, z); }, mean,
        kappa, tol, max_iter);
}

namespace {

struct Attempt {
    CenterList centers;
    double score = -1.0;
};

Attempt partition_in_order(const EigenDecomposition& eig, const std::vector<std::vector<Eigen::Index>>& bands,
                           const std::vector<std::size_t>& order) {
    const std::size_t n = eig.size();
    std::vector<Vertex> available(n);
    std::iota(available.begin(), available.end(), 0);
    Attempt out;
    out.centers.assign(bands.size(), {});
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const auto& cols = bands[order[pos]];
        const auto d = static_cast<Eigen::Index>(cols.size());
        if (d == 0) continue;
        const auto avail = static_cast<Eigen::Index>(available.size());
        Matrix sub(avail, d);
        for (Eigen::Index r = 0; r < avail; ++r)
            for (Eigen::Index c = 0; c < d; ++c) sub(r, c) = eig.eigenvectors(available[static_cast<std::size_t>(r)], cols[static_cast<std::size_t>(c)]);
        std::vector<Vertex> chosen;
        if (avail == d) {
            chosen = available;
        } else {
            Eigen::ColPivHouseholderQR<Matrix> qr(sub.transpose());
            const auto& perm = qr.colsPermutation().indices();
            for (Eigen::Index k = 0; k < d; ++k) chosen.push_back(available[static_cast<std::size_t>(perm[k])]);
        }
        Matrix square(d, d);
        for (Eigen::Index r = 0; r < d; ++r)
            for (Eigen::Index c = 0; c < d; ++c) square(r, c) = eig.eigenvectors(chosen[static_cast<std::size_t>(r)], cols[static_cast<std::size_t>(c)]);
        Eigen::JacobiSVD<Matrix> svd(square);
        const double smin = svd.singularValues()[d - 1];
        if (!(smin > 1e-10)) return Attempt{};
        worst = std::min(worst, smin);
        std::sort(chosen.begin(), chosen.end());
        std::vector<Vertex> rest;
        std::set_difference(available.begin(), available.end(), chosen.begin(), chosen.end(), std::back_inserter(rest));
        available = std::move(rest);
        out.centers[order[pos]] = std::move(chosen);
    }
    out.score = worst;
    return out;
}

} // namespace

CenterSets uniqueness_partition(const EigenDecomposition& eig, const FilterBank& bank) {
    const std::size_t n = eig.size();
    const std::size_t J = bank.size();
    if (J == 0) throw Error("filter bank is empty");
    std::vector<std::vector<Eigen::Index>> bands(J);
    for (std::size_t l = 0; l < n; ++l) {
        const double lam = std::max(0.0, eig.eigenvalues[static_cast<Eigen::Index>(l)]);
        std::size_t owner = J;
        for (std::size_t j = 0; j < J; ++j) {
            const double v = bank.kernels[j](lam);
            if (std::abs(v - 1.0) <= 1e-12) {
                if (owner != J) throw Error("bank is not an ideal partition: bands overlap");
                owner = j;
            } else if (std::abs(v) > 1e-12) {
                throw Error("bank is not an ideal partition: response is neither 0 nor 1");
            }
        }
        if (owner == J) throw Error("bank is not an ideal partition: an eigenvalue is not covered");
        bands[owner].push_back(static_cast<Eigen::Index>(l));
    }

    std::vector<std::size_t> order(J);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return bands[a].size() > bands[b].size(); });
    Attempt best = partition_in_order(eig, bands, order);
    if (J <= 6) {
        std::vector<std::size_t> perm(J);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            Attempt a = partition_in_order(eig, bands, perm);
            if (a.score > best.score) best = std::move(a);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    if (best.score < 0.0) throw Error("no partition found");
    CenterSets out;
    out.centers = std::move(best.centers);
    for (const auto& c : out.centers) out.weights.push_back(Signal::Ones(static_cast<Eigen::Index>(c.size())));
    return out;
}

} // namespace lsgf
