#include "lsgf/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lsgf {

namespace {

constexpr double kTinyNorm = 1e-14;

} // namespace

std::vector<bool> scaling_bands(const FilterBank& bank) {
    std::vector<bool> out;
    for (const auto& k : bank.kernels) out.push_back(std::abs(k(0.0)) > 1e-12);
    return out;
}

std::vector<Signal> atom_norms(const Dictionary& d, std::size_t n_probes, std::uint64_t seed) {
    if (d.eig()) return exact_atom_norms(d);
    std::vector<Signal> out;
    for (std::size_t j = 0; j < d.num_bands(); ++j) out.push_back(atom_norm_estimate(d, j, n_probes, seed));
    return out;
}

double sure_objective(const Signal& alpha, const Signal& norms, double sigma, double upsilon) {
    if (alpha.size() != norms.size()) throw Error("coefficients and norms differ in length");
    const double s2 = sigma * sigma;
    double total = 0.0;
    for (Eigen::Index i = 0; i < alpha.size(); ++i) {
        const double a = std::abs(alpha[i]);
        const double t = upsilon * sigma * norms[i];
        total += std::min(a * a, t * t);
        // compared as a ratio so a breakpoint returned by sure_threshold lands on the kept side
        if (a / (sigma * norms[i]) > upsilon) total += 2.0 * s2 * norms[i] * norms[i];
    }
    return total;
}

double sure_threshold(const Signal& alpha, const Signal& norms, double sigma) {
    if (alpha.size() == 0) throw Error("empty band");
    if (alpha.size() != norms.size()) throw Error("coefficients and norms differ in length");
    if (!(sigma > 0.0)) throw Error("sigma must be positive");
    struct Term {
        double breakpoint, a2, n2;
    };
    std::vector<Term> terms;
    for (Eigen::Index i = 0; i < alpha.size(); ++i) {
        if (!(norms[i] > kTinyNorm)) continue; // contributes 0 for every threshold
        const double a = std::abs(alpha[i]);
        terms.push_back({a / (sigma * norms[i]), a * a, norms[i] * norms[i]});
    }
    if (terms.empty()) return 0.0;
    std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.breakpoint < y.breakpoint; });
    const double s2 = sigma * sigma;
    double below_a2 = 0.0; // sum of a^2 over breakpoints <= u
    double above_n2 = 0.0; // sum of n^2 over breakpoints > u
    for (const auto& t : terms) above_n2 += t.n2;

    double best_u = 0.0;
    double best = std::numeric_limits<double>::infinity();
    std::size_t k = 0;
    auto consume_upto = [&](double u) {
        while (k < terms.size() && terms[k].breakpoint <= u) {
            below_a2 += terms[k].a2;
            above_n2 -= terms[k].n2;
            ++k;
        }
    };
    auto consider = [&](double u) {
        consume_upto(u);
        const double value = below_a2 + (u * u + 2.0) * s2 * std::max(above_n2, 0.0);
        if (value < best) {
            best = value;
            best_u = u;
        }
    };
    consider(0.0);
    for (const auto& t : terms) {
        if (t.breakpoint > 0.0) consider(t.breakpoint);
    }
    return best_u;
}

std::vector<double> sure_thresholds(const Coefficients& c, const std::vector<Signal>& norms, double sigma,
                                    const std::vector<bool>& skip) {
    if (norms.size() != c.num_bands() || skip.size() != c.num_bands()) throw Error("band count mismatch");
    std::vector<double> out(c.num_bands(), 0.0);
    for (std::size_t j = 0; j < c.num_bands(); ++j) {
        if (!skip[j]) out[j] = sure_threshold(c.values[j], norms[j], sigma);
    }
    return out;
}

Coefficients soft_threshold(const Coefficients& c, const std::vector<Signal>& norms,
                            const std::vector<double>& upsilon, double sigma) {
    if (norms.size() != c.num_bands() || upsilon.size() != c.num_bands()) throw Error("band count mismatch");
    Coefficients out = c;
    for (std::size_t j = 0; j < c.num_bands(); ++j) {
        if (norms[j].size() != c.values[j].size()) throw Error("coefficients and norms differ in length");
        for (Eigen::Index i = 0; i < c.values[j].size(); ++i) {
            const double a = c.values[j][i];
            const double t = upsilon[j] * sigma * norms[j][i];
            const double mag = std::max(0.0, std::abs(a) - t);
            out.values[j][i] = a < 0.0 ? -mag : mag;
        }
    }
    return out;
}

DenoiseResult denoise(const Dictionary& d, const Signal& y, const DenoiseConfig& cfg) {
    if (!(cfg.sigma > 0.0)) throw Error("sigma must be positive");
    const Coefficients alpha = analysis(d, y);
    const auto norms = atom_norms(d, cfg.norm_probes, cfg.seed);
    const auto skip = scaling_bands(d.bank());
    DenoiseResult res;
    if (cfg.fixed_thresholds) {
        if (cfg.fixed_thresholds->size() != d.num_bands()) throw Error("need one fixed threshold per band");
        res.thresholds = *cfg.fixed_thresholds;
        for (std::size_t j = 0; j < skip.size(); ++j)
            if (skip[j]) res.thresholds[j] = 0.0;
    } else {
        res.thresholds = sure_thresholds(alpha, norms, cfg.sigma, skip);
    }
    const Coefficients shrunk = soft_threshold(alpha, norms, res.thresholds, cfg.sigma);
    res.f = invert(d, shrunk, cfg.inverse, cfg.iterations);
    return res;
}

OmpResult omp(const Matrix& atoms, const Signal& f, std::size_t T0) {
    const auto n = atoms.rows();
    const auto m = static_cast<std::size_t>(atoms.cols());
    if (f.size() != n) throw Error("signal length does not match the atoms");
    if (T0 > m) throw Error("T0 exceeds the number of atoms");
    Signal norms(static_cast<Eigen::Index>(m));
    Matrix unit = atoms;
    std::vector<bool> usable(m, true);
    for (std::size_t a = 0; a < m; ++a) {
        norms[static_cast<Eigen::Index>(a)] = atoms.col(static_cast<Eigen::Index>(a)).norm();
        if (norms[static_cast<Eigen::Index>(a)] > kTinyNorm) {
            unit.col(static_cast<Eigen::Index>(a)) /= norms[static_cast<Eigen::Index>(a)];
        } else {
            usable[a] = false;
        }
    }

    OmpResult res;
    res.coefficients = Signal::Zero(static_cast<Eigen::Index>(m));
    Matrix Q(n, 0);
    Signal r = f;
    const double fnorm = f.norm();
    while (res.selected.size() < T0) {
        if (r.norm() <= 1e-15 * std::max(fnorm, 1.0)) break;
        const Signal corr = unit.transpose() * r;
        std::size_t best = m;
        for (std::size_t a = 0; a < m; ++a) {
            if (usable[a] && (best == m || std::abs(corr[static_cast<Eigen::Index>(a)]) > std::abs(corr[static_cast<Eigen::Index>(best)]))) best = a;
        }
        if (best == m) break;
        usable[best] = false;
        Signal q = unit.col(static_cast<Eigen::Index>(best));
        for (int pass = 0; pass < 2; ++pass) q -= Q * (Q.transpose() * q);
        const double qn = q.norm();
        if (qn < 1e-10) continue; // already in the span of the selected atoms
        q /= qn;
        Q.conservativeResize(Eigen::NoChange, Q.cols() + 1);
        Q.col(Q.cols() - 1) = q;
        r -= q * q.dot(r);
        res.selected.push_back(best);
        res.residual_norms.push_back(r.norm());
    }
    res.reconstruction = f - r;
    if (!res.selected.empty()) {
        Matrix sub(n, static_cast<Eigen::Index>(res.selected.size()));
        for (std::size_t k = 0; k < res.selected.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = unit.col(static_cast<Eigen::Index>(res.selected[k]));
        const Signal c = sub.colPivHouseholderQr().solve(f);
        for (std::size_t k = 0; k < res.selected.size(); ++k) {
            const auto a = static_cast<Eigen::Index>(res.selected[k]);
            res.coefficients[a] = c[static_cast<Eigen::Index>(k)] / norms[a];
        }
        res.reconstruction = sub * c;
    }
    return res;
}

CompressResult compress_omp(const Dictionary& d, const Signal& f, std::size_t T0) {
    check_signal(d.laplacian(), f);
    const Matrix phi = atom_matrix(d);
    auto o = omp(phi, f, T0);
    CompressResult res;
    res.coefficients = d.zero_coefficients().with_values(o.coefficients);
    res.reconstruction = std::move(o.reconstruction);
    res.residual_norms = std::move(o.residual_norms);
    return res;
}

Coefficients hard_threshold(const Coefficients& c, const std::vector<Signal>& norms, std::size_t T0) {
    if (norms.size() != c.num_bands()) throw Error("band count mismatch");
    const Signal flat = c.flatten();
    Signal flat_norms(flat.size());
    Eigen::Index pos = 0;
    for (const auto& nj : norms) {
        flat_norms.segment(pos, nj.size()) = nj;
        pos += nj.size();
    }
    if (pos != flat.size()) throw Error("coefficients and norms differ in length");
    std::vector<std::size_t> idx(static_cast<std::size_t>(flat.size()));
    std::iota(idx.begin(), idx.end(), 0);
    auto score = [&](std::size_t i) {
        const double nrm = flat_norms[static_cast<Eigen::Index>(i)];
        return nrm > kTinyNorm ? std::abs(flat[static_cast<Eigen::Index>(i)]) / nrm : 0.0;
    };
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return score(a) > score(b); });
    Signal kept = Signal::Zero(flat.size());
    for (std::size_t k = 0; k < std::min<std::size_t>(T0, idx.size()); ++k) {
        kept[static_cast<Eigen::Index>(idx[k])] = flat[static_cast<Eigen::Index>(idx[k])];
    }
    return c.with_values(kept);
}

Signal compress_hard_threshold(const Dictionary& d, const Signal& f, std::size_t T0, InverseMethod inverse,
                               const std::vector<Signal>* norms) {
    const Coefficients alpha = analysis(d, f);
    const auto own = norms ? std::vector<Signal>{} : atom_norms(d);
    return invert(d, hard_threshold(alpha, norms ? *norms : own, T0), inverse);
}

Metrics metrics(const Signal& f, const Signal& f_hat, const Signal* noise) {
    if (f.size() != f_hat.size() || (noise && noise->size() != f.size())) throw Error("signal lengths differ");
    const double ref = f.squaredNorm();
    if (ref == 0.0) throw Error("zero reference signal");
    Metrics m;
    const double err = (f_hat - f).squaredNorm();
    m.nmse = err / ref;
    if (noise) {
        const double xi = noise->squaredNorm();
        m.delta_snr_db = err == 0.0 ? kSnrCapDb : std::min(kSnrCapDb, 10.0 * std::log10(xi / err));
    }
    return m;
}

} // namespace lsgf
