#include "lsgf/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <iostream>
#include <map>
#include <random>

namespace lsgf {

CsrMatrix::CsrMatrix(std::size_t n, std::vector<std::size_t> row_offsets, std::vector<Vertex> cols,
                     std::vector<double> values)
    : n_(n), offsets_(std::move(row_offsets)), cols_(std::move(cols)), values_(std::move(values)) {
    if (offsets_.size() != n_ + 1 || offsets_.back() != cols_.size() || cols_.size() != values_.size()) {
        throw Error("malformed CSR arrays");
    }
}

void CsrMatrix::multiply(const Signal& x, Signal& y) const {
    y.resize(static_cast<Eigen::Index>(n_));
    for (std::size_t r = 0; r < n_; ++r) {
        double acc = 0.0;
        for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k) {
            acc += values_[k] * x[cols_[k]];
        }
        y[static_cast<Eigen::Index>(r)] = acc;
    }
}

Signal CsrMatrix::multiply(const Signal& x) const {
    Signal y;
    multiply(x, y);
    return y;
}

double CsrMatrix::diagonal(std::size_t row) const {
    for (std::size_t k = offsets_[row]; k < offsets_[row + 1]; ++k) {
        if (static_cast<std::size_t>(cols_[k]) == row) return values_[k];
    }
    return 0.0;
}

Matrix CsrMatrix::to_dense() const {
    const auto n = static_cast<Eigen::Index>(n_);
    Matrix dense = Matrix::Zero(n, n);
    for (std::size_t r = 0; r < n_; ++r) {
        for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k) {
            dense(static_cast<Eigen::Index>(r), cols_[k]) += values_[k];
        }
    }
    return dense;
}

SparseGraph SparseGraph::from_edges(std::size_t n_vertices, std::span<const Edge> edges) {
    if (n_vertices == 0) throw Error("empty graph");
    std::map<std::pair<Vertex, Vertex>, double> sym;
    for (const auto& e : edges) {
        if (e.src < 0 || e.dst < 0 || static_cast<std::size_t>(e.src) >= n_vertices ||
            static_cast<std::size_t>(e.dst) >= n_vertices) {
            throw Error("edge endpoint out of range");
        }
        if (e.src == e.dst) throw Error("self-loops are not allowed");
        if (!(e.weight > 0.0) || !std::isfinite(e.weight)) throw Error("edge weights must be positive and finite");
        const auto key = std::minmax(e.src, e.dst);
        auto [it, inserted] = sym.emplace(std::pair{key.first, key.second}, e.weight);
        if (!inserted && it->second != e.weight) throw Error("adjacency is not symmetric");
    }

    std::vector<std::vector<std::pair<Vertex, double>>> rows(n_vertices);
    for (const auto& [key, w] : sym) {
        rows[static_cast<std::size_t>(key.first)].emplace_back(key.second, w);
        rows[static_cast<std::size_t>(key.second)].emplace_back(key.first, w);
    }
    std::vector<std::size_t> offsets{0};
    std::vector<Vertex> cols;
    std::vector<double> vals;
    SparseGraph g;
    g.degrees_.assign(n_vertices, 0.0);
    for (std::size_t r = 0; r < n_vertices; ++r) {
        auto& row = rows[r];
        std::sort(row.begin(), row.end());
        for (const auto& [c, w] : row) {
            cols.push_back(c);
            vals.push_back(w);
            g.degrees_[r] += w;
        }
        offsets.push_back(cols.size());
    }
    g.adjacency_ = CsrMatrix(n_vertices, std::move(offsets), std::move(cols), std::move(vals));

    const auto dist = g.hop_distances(0);
    g.connected_ = std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
    if (!g.connected_) {
        std::clog << "warning: graph is not connected; lambda_0 has multiplicity > 1\n";
    }
    return g;
}

std::vector<Edge> SparseGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(num_edges());
    const auto off = adjacency_.row_offsets();
    const auto cols = adjacency_.columns();
    const auto vals = adjacency_.values();
    for (std::size_t r = 0; r < size(); ++r) {
        for (std::size_t k = off[r]; k < off[r + 1]; ++k) {
            if (static_cast<std::size_t>(cols[k]) > r) out.push_back({static_cast<Vertex>(r), cols[k], vals[k]});
        }
    }
    return out;
}

std::vector<int> SparseGraph::hop_distances(Vertex source) const {
    std::vector<int> dist(size(), -1);
    std::deque<Vertex> queue{source};
    dist[static_cast<std::size_t>(source)] = 0;
    const auto off = adjacency_.row_offsets();
    const auto cols = adjacency_.columns();
    while (!queue.empty()) {
        const auto v = queue.front();
        queue.pop_front();
        for (std::size_t k = off[static_cast<std::size_t>(v)]; k < off[static_cast<std::size_t>(v) + 1]; ++k) {
            auto& d = dist[static_cast<std::size_t>(cols[k])];
            if (d < 0) {
                d = dist[static_cast<std::size_t>(v)] + 1;
                queue.push_back(cols[k]);
            }
        }
    }
    return dist;
}

Laplacian Laplacian::with_bound(double bound) const {
    if (!(bound > 0.0)) throw Error("spectral bound must be positive");
    Laplacian copy = *this;
    copy.lambda_max_bound = bound;
    return copy;
}

Laplacian build_laplacian(const SparseGraph& g, LaplacianKind kind) {
    const std::size_t n = g.size();
    if (n == 0) throw Error("empty graph");
    const auto& adj = g.adjacency();
    const auto off = adj.row_offsets();
    const auto cols = adj.columns();
    const auto vals = adj.values();
    const auto deg = g.degrees();

    std::vector<double> inv_sqrt(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) inv_sqrt[i] = deg[i] > 0.0 ? 1.0 / std::sqrt(deg[i]) : 0.0;

    std::vector<std::size_t> offsets{0};
    std::vector<Vertex> lc;
    std::vector<double> lv;
    lc.reserve(adj.nnz() + n);
    lv.reserve(adj.nnz() + n);
    for (std::size_t r = 0; r < n; ++r) {
        bool diag_done = false;
        auto emit_diag = [&] {
            lc.push_back(static_cast<Vertex>(r));
            if (kind == LaplacianKind::combinatorial) {
                lv.push_back(deg[r]);
            } else {
                lv.push_back(deg[r] > 0.0 ? 1.0 : 0.0);
            }
            diag_done = true;
        };
        for (std::size_t k = off[r]; k < off[r + 1]; ++k) {
            if (!diag_done && static_cast<std::size_t>(cols[k]) > r) emit_diag();
            lc.push_back(cols[k]);
            if (kind == LaplacianKind::combinatorial) {
                lv.push_back(-vals[k]);
            } else {
                lv.push_back(-vals[k] * inv_sqrt[r] * inv_sqrt[static_cast<std::size_t>(cols[k])]);
            }
        }
        if (!diag_done) emit_diag();
        offsets.push_back(lc.size());
    }

    Laplacian L;
    L.kind = kind;
    L.matrix = CsrMatrix(n, std::move(offsets), std::move(lc), std::move(lv));
    L.lambda_max_bound = kind == LaplacianKind::normalized ? 2.0 : 0.0;
    if (kind == LaplacianKind::combinatorial) {
        double bound = 0.0;
        for (const auto& e : g.edges()) {
            bound = std::max(bound, deg[static_cast<std::size_t>(e.src)] + deg[static_cast<std::size_t>(e.dst)]);
        }
        // an edgeless graph has spectrum {0}; keep the interval non-degenerate
        L.lambda_max_bound = bound > 0.0 ? bound : 1.0;
    }
    return L;
}

double lambda_max_upper_bound(const Laplacian& L) {
    if (L.kind == LaplacianKind::normalized) return 2.0;
    const auto& m = L.matrix;
    const auto off = m.row_offsets();
    const auto cols = m.columns();
    const auto vals = m.values();
    double bound = 0.0;
    for (std::size_t r = 0; r < m.size(); ++r) {
        for (std::size_t k = off[r]; k < off[r + 1]; ++k) {
            const auto c = static_cast<std::size_t>(cols[k]);
            if (c != r && vals[k] != 0.0) bound = std::max(bound, m.diagonal(r) + m.diagonal(c));
        }
    }
    return bound;
}

double lanczos_lambda_max(const Laplacian& L, std::size_t steps, std::uint64_t seed) {
    if (steps < 2) throw Error("lanczos needs at least 2 steps");
    const auto n = static_cast<Eigen::Index>(L.size());
    steps = std::min<std::size_t>(steps, static_cast<std::size_t>(n));

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Signal v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
    v.normalize();

    Matrix basis(n, static_cast<Eigen::Index>(steps));
    std::vector<double> alpha;
    std::vector<double> beta;
    Signal w;
    auto ritz_max = [&]() {
        const auto m = static_cast<Eigen::Index>(alpha.size());
        Matrix t = Matrix::Zero(m, m);
        for (Eigen::Index i = 0; i < m; ++i) {
            t(i, i) = alpha[static_cast<std::size_t>(i)];
            if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
        }
        return Eigen::SelfAdjointEigenSolver<Matrix>(t, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
    };

    const double breakdown_tol = 1e-12 * std::max(1.0, L.lambda_max_bound);
    for (std::size_t j = 0; j < steps; ++j) {
        basis.col(static_cast<Eigen::Index>(j)) = v;
        L.matrix.multiply(v, w);
        alpha.push_back(v.dot(w));
        // full reorthogonalization, twice
        for (int pass = 0; pass < 2; ++pass) {
            const auto q = basis.leftCols(static_cast<Eigen::Index>(j + 1));
            w -= q * (q.transpose() * w);
        }
        const double b = w.norm();
        if (j + 1 == steps) break;
        if (b <= breakdown_tol) break;
        beta.push_back(b);
        v = w / b;
    }
    return 1.01 * ritz_max();
}

double quadratic_form(const Laplacian& L, const Signal& f) {
    check_signal(L, f);
    return f.dot(L.matrix.multiply(f));
}

EigenDecomposition eigendecompose(const Laplacian& L, std::size_t max_n) {
    if (L.size() > max_n) {
        throw Error("graph has " + std::to_string(L.size()) + " vertices, above the eigendecomposition cap of " +
                    std::to_string(max_n) + "; use polynomial mode instead");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(L.matrix.to_dense());
    if (solver.info() != Eigen::Success) throw Error("eigendecomposition failed");
    EigenDecomposition eig{solver.eigenvalues(), solver.eigenvectors()};
    for (Eigen::Index c = 0; c < eig.eigenvectors.cols(); ++c) {
        auto col = eig.eigenvectors.col(c);
        Eigen::Index arg = 0;
        col.cwiseAbs().maxCoeff(&arg);
        if (col[arg] < 0) col = -col;
    }
    return eig;
}

void check_signal(const Laplacian& L, const Signal& f, const char* what) {
    if (static_cast<std::size_t>(f.size()) != L.size()) {
        throw Error(std::string(what) + " length " + std::to_string(f.size()) + " does not match graph size " +
                    std::to_string(L.size()));
    }
}

} // namespace lsgf
