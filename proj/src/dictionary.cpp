#include "lsgf/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>

#include "lsgf/parallel.hpp"

namespace lsgf {

namespace {

class Fnv1a {
public:
    template <typename T>
    void add(const T& v) {
        unsigned char bytes[sizeof(T)];
        std::memcpy(bytes, &v, sizeof(T));
        for (unsigned char b : bytes) {
            h_ ^= b;
            h_ *= 0x100000001b3ULL;
        }
    }
    std::uint64_t value() const { return h_; }

private:
    std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

Signal upsample(std::size_t n, const std::vector<Vertex>& centers, const Signal& values) {
    Signal out = Signal::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < centers.size(); ++k) out[centers[k]] = values[static_cast<Eigen::Index>(k)];
    return out;
}

} // namespace

std::size_t Coefficients::total() const {
    std::size_t n = 0;
    for (const auto& v : values) n += static_cast<std::size_t>(v.size());
    return n;
}

double Coefficients::squared_norm() const {
    double s = 0.0;
    for (const auto& v : values) s += v.squaredNorm();
    return s;
}

double Coefficients::dot(const Coefficients& other) const {
    if (other.values.size() != values.size()) throw Error("coefficient layouts differ");
    double s = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) {
        if (other.values[j].size() != values[j].size()) throw Error("coefficient layouts differ");
        s += values[j].dot(other.values[j]);
    }
    return s;
}

Signal Coefficients::flatten() const {
    Signal out(static_cast<Eigen::Index>(total()));
    Eigen::Index pos = 0;
    for (const auto& v : values) {
        out.segment(pos, v.size()) = v;
        pos += v.size();
    }
    return out;
}

Coefficients Coefficients::with_values(const Signal& flat) const {
    if (static_cast<std::size_t>(flat.size()) != total()) throw Error("flat coefficient vector has the wrong length");
    Coefficients out = *this;
    Eigen::Index pos = 0;
    for (auto& v : out.values) {
        v = flat.segment(pos, v.size());
        pos += v.size();
    }
    return out;
}

Dictionary Dictionary::exact(const Laplacian& L, std::shared_ptr<const EigenDecomposition> eig, FilterBank bank,
                             CenterList centers) {
    if (!eig) throw Error("exact mode requires an eigendecomposition");
    if (eig->size() != L.size()) throw Error("eigendecomposition does not match the Laplacian");
    if (bank.size() == 0) throw Error("filter bank is empty");
    Dictionary d;
    d.mode_ = DictionaryMode::exact;
    d.L_ = L;
    d.bank_ = std::move(bank);
    d.eig_ = std::move(eig);
    d.finalize(std::move(centers));
    return d;
}

Dictionary Dictionary::poly(const Laplacian& L, FilterBank bank, std::size_t degree, bool jackson, CenterList centers) {
    auto polys = bank.approximate(degree, jackson);
    return poly(L, std::move(bank), std::move(polys), std::move(centers));
}

Dictionary Dictionary::poly(const Laplacian& L, FilterBank bank, std::vector<ChebyshevApprox> polys,
                            CenterList centers) {
    if (polys.empty()) throw Error("filter bank is empty");
    if (bank.size() != polys.size()) throw Error("one approximant per kernel required");
    for (const auto& p : polys) {
        if (p.lambda_bar != polys.front().lambda_bar) throw Error("approximants must share one interval");
        if (L.lambda_max_bound > 0.0 && p.lambda_bar < L.lambda_max_bound * (1.0 - 1e-12)) {
            throw Error("approximation interval does not cover the Laplacian's spectral bound");
        }
    }
    Dictionary d;
    d.mode_ = DictionaryMode::poly;
    d.L_ = L;
    d.bank_ = std::move(bank);
    d.polys_ = std::move(polys);
    d.finalize(std::move(centers));
    return d;
}

void Dictionary::finalize(CenterList centers) {
    const std::size_t n = L_.size();
    const std::size_t J = bank_.size();
    if (centers.empty()) {
        std::vector<Vertex> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<Vertex>(i);
        centers.assign(J, all);
    }
    if (centers.size() != J) throw Error("need one center set per band");
    std::size_t total = 0;
    for (auto& set : centers) {
        std::sort(set.begin(), set.end());
        if (std::adjacent_find(set.begin(), set.end()) != set.end()) throw Error("duplicate center vertex");
        if (!set.empty() && (set.front() < 0 || static_cast<std::size_t>(set.back()) >= n)) {
            throw Error("center vertex out of range");
        }
        total += set.size();
    }
    if (total == 0) throw Error("dictionary has no atoms");
    centers_ = std::move(centers);

    if (eig_) {
        responses_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(J));
        for (std::size_t l = 0; l < n; ++l) {
            const double lam = std::max(0.0, eig_->eigenvalues[static_cast<Eigen::Index>(l)]);
            for (std::size_t j = 0; j < J; ++j) {
                responses_(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j)) = response(j, lam);
            }
        }
    }

    Fnv1a h;
    h.add(static_cast<int>(mode_));
    h.add(n);
    h.add(J);
    h.add(L_.lambda_max_bound);
    double lsum = 0.0;
    for (double v : L_.matrix.values()) lsum += std::abs(v);
    h.add(lsum);
    h.add(bank_.lambda_bar);
    for (const auto& set : centers_) {
        h.add(set.size());
        for (Vertex v : set) h.add(v);
    }
    for (std::size_t j = 0; j < J; ++j) {
        for (int k = 0; k <= 32; ++k) h.add(response(j, bank_.lambda_bar * k / 32.0));
    }
    hash_ = h.value();
}

Dictionary Dictionary::with_eigendecomposition(std::shared_ptr<const EigenDecomposition> eig) const {
    if (!eig || eig->size() != L_.size()) throw Error("eigendecomposition does not match the Laplacian");
    Dictionary d = *this;
    d.eig_ = std::move(eig);
    d.finalize(centers_);
    return d;
}

std::size_t Dictionary::num_atoms() const {
    std::size_t m = 0;
    for (const auto& s : centers_) m += s.size();
    return m;
}

bool Dictionary::complete_sampling() const {
    for (const auto& s : centers_) {
        if (s.size() != L_.size()) return false;
    }
    return true;
}

double Dictionary::response(std::size_t j, double lambda) const {
    if (j >= bank_.size()) throw Error("band index out of range");
    return mode_ == DictionaryMode::exact ? bank_.kernels[j](lambda) : polys_[j](lambda);
}

std::vector<Signal> Dictionary::filter(const Signal& f) const {
    check_signal(L_, f);
    if (mode_ == DictionaryMode::poly) return apply_poly_filters(polys_, L_, f);
    const Signal fhat = eig_->eigenvectors.transpose() * f;
    std::vector<Signal> out(bank_.size());
    for (std::size_t j = 0; j < bank_.size(); ++j) {
        out[j] = eig_->eigenvectors * responses_.col(static_cast<Eigen::Index>(j)).cwiseProduct(fhat);
    }
    return out;
}

Signal Dictionary::filter_band(std::size_t j, const Signal& f) const {
    check_signal(L_, f);
    if (j >= bank_.size()) throw Error("band index out of range");
    if (mode_ == DictionaryMode::poly) return apply_poly_filter(polys_[j], L_, f);
    const Signal fhat = eig_->eigenvectors.transpose() * f;
    return eig_->eigenvectors * responses_.col(static_cast<Eigen::Index>(j)).cwiseProduct(fhat);
}

Coefficients Dictionary::zero_coefficients() const {
    Coefficients c;
    c.centers = centers_;
    for (const auto& s : centers_) c.values.push_back(Signal::Zero(static_cast<Eigen::Index>(s.size())));
    c.provenance = hash_;
    return c;
}

Coefficients Dictionary::rebind(Coefficients c) const {
    if (c.centers.size() != centers_.size() || c.values.size() != centers_.size()) {
        throw Error("coefficients do not match the dictionary's band count");
    }
    for (std::size_t j = 0; j < centers_.size(); ++j) {
        if (c.centers[j] != centers_[j] || static_cast<std::size_t>(c.values[j].size()) != centers_[j].size()) {
            throw Error("coefficients do not match the dictionary's center sets");
        }
    }
    c.provenance = hash_;
    return c;
}

Coefficients analysis(const Dictionary& d, const Signal& f) {
    const auto filtered = d.filter(f);
    Coefficients c = d.zero_coefficients();
    for (std::size_t j = 0; j < filtered.size(); ++j) {
        const auto& set = d.centers()[j];
        for (std::size_t k = 0; k < set.size(); ++k) c.values[j][static_cast<Eigen::Index>(k)] = filtered[j][set[k]];
    }
    return c;
}

Signal synthesis(const Dictionary& d, const Coefficients& c) {
    if (c.provenance != d.hash()) throw Error("coefficients were produced by a different dictionary");
    const std::size_t n = d.size();
    const std::size_t J = d.num_bands();
    if (c.values.size() != J) throw Error("coefficients do not match the dictionary's band count");
    for (std::size_t j = 0; j < J; ++j) {
        if (static_cast<std::size_t>(c.values[j].size()) != d.centers()[j].size()) {
            throw Error("coefficients do not match the dictionary's center sets");
        }
    }
    if (d.mode() == DictionaryMode::exact) {
        const auto& eig = *d.eig();
        Signal acc = Signal::Zero(static_cast<Eigen::Index>(n));
        for (std::size_t j = 0; j < J; ++j) {
            const Signal up = upsample(n, d.centers()[j], c.values[j]);
            const Signal uhat = eig.eigenvectors.transpose() * up;
            for (std::size_t l = 0; l < n; ++l) {
                acc[static_cast<Eigen::Index>(l)] += d.response(j, std::max(0.0, eig.eigenvalues[static_cast<Eigen::Index>(l)])) * uhat[static_cast<Eigen::Index>(l)];
            }
        }
        return eig.eigenvectors * acc;
    }
    std::vector<Signal> parts(J);
    parallel_for(J, [&](std::size_t j) {
        parts[j] = apply_poly_filter(d.polys()[j], d.laplacian(), upsample(n, d.centers()[j], c.values[j]));
    });
    Signal out = Signal::Zero(static_cast<Eigen::Index>(n));
    for (const auto& p : parts) out += p;
    return out;
}

FrameBounds frame_bounds(const Dictionary& d) {
    std::vector<double> points;
    FrameBounds fb;
    if (d.eig()) {
        const auto& ev = d.eig()->eigenvalues;
        for (Eigen::Index l = 0; l < ev.size(); ++l) points.push_back(std::max(0.0, ev[l]));
        fb.basis = BoundsBasis::exact_sigma;
    } else {
        points = uniform_grid(d.bank().lambda_bar, 1000);
        fb.basis = BoundsBasis::grid;
    }
    fb.A = std::numeric_limits<double>::infinity();
    fb.B = 0.0;
    for (double lam : points) {
        double g = 0.0;
        for (std::size_t j = 0; j < d.num_bands(); ++j) {
            const double v = d.response(j, lam);
            g += v * v;
        }
        fb.A = std::min(fb.A, g);
        fb.B = std::max(fb.B, g);
    }
    fb.heuristic = !d.complete_sampling();
    return fb;
}

Signal materialize_atom(const Dictionary& d, Vertex i, std::size_t j) {
    if (j >= d.num_bands()) throw Error("band index out of range");
    const auto& set = d.centers()[j];
    if (!std::binary_search(set.begin(), set.end(), i)) throw Error("vertex is not a center of this band");
    Signal delta = Signal::Zero(static_cast<Eigen::Index>(d.size()));
    delta[i] = 1.0;
    return d.filter_band(j, delta);
}

Matrix atom_matrix(const Dictionary& d, std::size_t max_n) {
    const std::size_t n = d.size();
    if (n > max_n) throw Error("graph too large to materialize the dictionary");
    Matrix phi(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d.num_atoms()));
    Eigen::Index col = 0;
    for (std::size_t j = 0; j < d.num_bands(); ++j) {
        const auto& set = d.centers()[j];
        if (d.eig()) {
            const auto& U = d.eig()->eigenvectors;
            Signal r(static_cast<Eigen::Index>(n));
            for (std::size_t l = 0; l < n; ++l) {
                r[static_cast<Eigen::Index>(l)] = d.response(j, std::max(0.0, d.eig()->eigenvalues[static_cast<Eigen::Index>(l)]));
            }
            const Matrix scaled = U * r.asDiagonal();
            for (Vertex i : set) phi.col(col++) = scaled * U.row(i).transpose();
        } else {
            std::vector<Signal> cols(set.size());
            parallel_for(set.size(), [&](std::size_t k) { cols[k] = materialize_atom(d, set[k], j); });
            for (auto& c : cols) phi.col(col++) = c;
        }
    }
    return phi;
}

std::vector<Signal> exact_atom_norms(const Dictionary& d) {
    if (!d.eig()) throw Error("exact atom norms need an eigendecomposition");
    const auto& U = d.eig()->eigenvectors;
    const std::size_t n = d.size();
    const Matrix u2 = U.cwiseAbs2();
    std::vector<Signal> out;
    for (std::size_t j = 0; j < d.num_bands(); ++j) {
        Signal r2(static_cast<Eigen::Index>(n));
        for (std::size_t l = 0; l < n; ++l) {
            const double v = d.response(j, std::max(0.0, d.eig()->eigenvalues[static_cast<Eigen::Index>(l)]));
            r2[static_cast<Eigen::Index>(l)] = v * v;
        }
        const Signal norms2 = u2 * r2;
        const auto& set = d.centers()[j];
        Signal nj(static_cast<Eigen::Index>(set.size()));
        for (std::size_t k = 0; k < set.size(); ++k) nj[static_cast<Eigen::Index>(k)] = std::sqrt(std::max(0.0, norms2[set[k]]));
        out.push_back(std::move(nj));
    }
    return out;
}

Signal atom_norm_estimate(const Dictionary& d, std::size_t j, std::size_t n_probes, std::uint64_t seed) {
    if (n_probes < 2) throw Error("atom norm estimation needs at least 2 probes");
    if (j >= d.num_bands()) throw Error("band index out of range");
    const auto n = static_cast<Eigen::Index>(d.size());
    Matrix filtered(n, static_cast<Eigen::Index>(n_probes));
    parallel_for(n_probes, [&](std::size_t p) {
        std::seed_seq seq{static_cast<std::uint64_t>(seed), static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(p)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> normal;
        Signal eta(n);
        for (Eigen::Index i = 0; i < n; ++i) eta[i] = normal(rng);
        filtered.col(static_cast<Eigen::Index>(p)) = d.filter_band(j, eta);
    });
    const auto& set = d.centers()[j];
    Signal out(static_cast<Eigen::Index>(set.size()));
    for (std::size_t k = 0; k < set.size(); ++k) {
        const auto row = filtered.row(set[k]);
        const double mean = row.mean();
        out[static_cast<Eigen::Index>(k)] = std::sqrt((row.array() - mean).square().sum() / static_cast<double>(n_probes - 1));
    }
    return out;
}

double cumulative_coherence(const Dictionary& d, std::size_t k, std::size_t max_n) {
    Matrix phi = atom_matrix(d, max_n);
    const auto m = static_cast<std::size_t>(phi.cols());
    if (k == 0 || k >= m) throw Error("cumulative coherence needs 0 < k < number of atoms");
    for (Eigen::Index c = 0; c < phi.cols(); ++c) {
        const double norm = phi.col(c).norm();
        if (norm > 1e-14) {
            phi.col(c) /= norm;
        } else {
            phi.col(c).setZero();
        }
    }
    const Matrix gram = (phi.transpose() * phi).cwiseAbs();
    double best = 0.0;
    std::vector<double> row;
    for (std::size_t a = 0; a < m; ++a) {
        row.clear();
        for (std::size_t b = 0; b < m; ++b) {
            if (b != a) row.push_back(gram(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)));
        }
        std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k), row.end(), std::greater<>());
        double s = 0.0;
        for (std::size_t t = 0; t < k; ++t) s += row[t];
        best = std::max(best, s);
    }
    return best;
}

} // namespace lsgf
