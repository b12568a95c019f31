#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lsgf {

/// Error raised for invalid inputs and failed preconditions across the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Signal = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Vertex = std::int32_t;

struct Edge {
    Vertex src;
    Vertex dst;
    double weight;
};

/// Symmetric sparse matrix in compressed sparse row form, both triangles stored.
class CsrMatrix {
public:
    CsrMatrix() = default;
    CsrMatrix(std::size_t n, std::vector<std::size_t> row_offsets, std::vector<Vertex> cols,
              std::vector<double> values);

    std::size_t size() const { return n_; }
    std::size_t nnz() const { return values_.size(); }

    std::span<const std::size_t> row_offsets() const { return offsets_; }
    std::span<const Vertex> columns() const { return cols_; }
    std::span<const double> values() const { return values_; }

    /// y = A x
    void multiply(const Signal& x, Signal& y) const;
    Signal multiply(const Signal& x) const;

    double diagonal(std::size_t row) const;
    Matrix to_dense() const;

private:
    std::size_t n_ = 0;
    std::vector<std::size_t> offsets_{0};
    std::vector<Vertex> cols_;
    std::vector<double> values_;
};

/// Undirected weighted graph. Adjacency is stored as a symmetric CSR matrix
/// without self-loops; all stored weights are strictly positive.
class SparseGraph {
public:
    SparseGraph() = default;

    /// Builds a graph from an undirected edge list. Each edge may be listed once
    /// or in both directions; repeated listings must agree on the weight.
    static SparseGraph from_edges(std::size_t n_vertices, std::span<const Edge> edges);

    std::size_t size() const { return adjacency_.size(); }
    std::size_t num_edges() const { return adjacency_.nnz() / 2; }
    const CsrMatrix& adjacency() const { return adjacency_; }

    std::span<const double> degrees() const { return degrees_; }
    bool connected() const { return connected_; }

    /// Each undirected edge once, with src < dst.
    std::vector<Edge> edges() const;

    /// Hop distances from `source`; unreachable vertices get -1.
    std::vector<int> hop_distances(Vertex source) const;

private:
    CsrMatrix adjacency_;
    std::vector<double> degrees_;
    bool connected_ = true;
};

enum class LaplacianKind { combinatorial, normalized };

struct Laplacian {
    LaplacianKind kind = LaplacianKind::combinatorial;
    CsrMatrix matrix;
    /// Upper end of the spectral interval used by polynomial methods; always >= lambda_max.
    double lambda_max_bound = 0.0;

    std::size_t size() const { return matrix.size(); }

    /// Copy with a different spectral upper end (e.g. a Lanczos estimate).
    Laplacian with_bound(double bound) const;
};

Laplacian build_laplacian(const SparseGraph& g, LaplacianKind kind = LaplacianKind::combinatorial);

/// Anderson-Morley bound: max over edges of d(m) + d(n). Returns 2 for normalized Laplacians.
double lambda_max_upper_bound(const Laplacian& L);

/// Largest Ritz value after `steps` Lanczos iterations (full reorthogonalization),
/// inflated by 1.01.
double lanczos_lambda_max(const Laplacian& L, std::size_t steps, std::uint64_t seed);

/// f^T L f
double quadratic_form(const Laplacian& L, const Signal& f);

struct EigenDecomposition {
    Signal eigenvalues;  // ascending
    Matrix eigenvectors; // orthonormal columns

    std::size_t size() const { return static_cast<std::size_t>(eigenvalues.size()); }
};

inline constexpr std::size_t kDefaultEigenCap = 10000;

/// Dense symmetric eigendecomposition. Each eigenvector is sign-fixed so that its
/// largest-magnitude entry is positive.
EigenDecomposition eigendecompose(const Laplacian& L, std::size_t max_n = kDefaultEigenCap);

void check_signal(const Laplacian& L, const Signal& f, const char* what = "signal");

} // namespace lsgf
