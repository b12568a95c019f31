#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "lsgf/filter_bank.hpp"

namespace lsgf {

enum class DictionaryMode { exact, poly };

using CenterList = std::vector<std::vector<Vertex>>;

/// Analysis coefficients alpha_{i,j}, one vector per band aligned with that band's centers.
struct Coefficients {
    CenterList centers;
    std::vector<Signal> values;
    std::uint64_t provenance = 0;

    std::size_t num_bands() const { return values.size(); }
    std::size_t total() const;
    double squared_norm() const;
    double dot(const Coefficients& other) const;
    Signal flatten() const;
    /// Same layout as this, values taken from a flat vector in (band, center) order.
    Coefficients with_values(const Signal& flat) const;
};

/// A filter bank localized at per-band center sets, evaluated exactly through an
/// eigendecomposition or through Chebyshev approximants.
class Dictionary {
public:
    /// Empty `centers` means complete sampling (V_j = V for all j).
    static Dictionary exact(const Laplacian& L, std::shared_ptr<const EigenDecomposition> eig, FilterBank bank,
                            CenterList centers = {});
    static Dictionary poly(const Laplacian& L, FilterBank bank, std::size_t degree, bool jackson = false,
                           CenterList centers = {});
    /// Polynomial dictionary from given approximants; the bank is used for metadata (scaling bands) only.
    static Dictionary poly(const Laplacian& L, FilterBank bank, std::vector<ChebyshevApprox> polys,
                           CenterList centers = {});

    DictionaryMode mode() const { return mode_; }
    std::size_t size() const { return L_.size(); }
    std::size_t num_bands() const { return bank_.size(); }
    std::size_t num_atoms() const;
    bool complete_sampling() const;

    const Laplacian& laplacian() const { return L_; }
    const FilterBank& bank() const { return bank_; }
    const CenterList& centers() const { return centers_; }
    const std::vector<ChebyshevApprox>& polys() const { return polys_; }
    /// May be null in poly mode.
    const std::shared_ptr<const EigenDecomposition>& eig() const { return eig_; }
    std::uint64_t hash() const { return hash_; }

    /// Attach an eigendecomposition to a poly-mode dictionary so exact frame bounds and atom
    /// norms of the approximants become available.
    Dictionary with_eigendecomposition(std::shared_ptr<const EigenDecomposition> eig) const;

    /// Response of band j at lambda in this dictionary's mode (kernel or approximant).
    double response(std::size_t j, double lambda) const;

    /// g_j(L) f for every band.
    std::vector<Signal> filter(const Signal& f) const;
    Signal filter_band(std::size_t j, const Signal& f) const;

    /// Coefficients of zeros laid out for this dictionary.
    Coefficients zero_coefficients() const;
    /// Re-stamps loaded coefficients with this dictionary's hash after checking their layout.
    Coefficients rebind(Coefficients c) const;

private:
    Dictionary() = default;
    void finalize(CenterList centers);

    DictionaryMode mode_ = DictionaryMode::exact;
    Laplacian L_;
    FilterBank bank_;
    CenterList centers_;
    std::vector<ChebyshevApprox> polys_;
    std::shared_ptr<const EigenDecomposition> eig_;
    Matrix responses_; // N x J responses at eigenvalues (when eig_ is set)
    std::uint64_t hash_ = 0;
};

Coefficients analysis(const Dictionary& d, const Signal& f);
Signal synthesis(const Dictionary& d, const Coefficients& c);

enum class BoundsBasis { exact_sigma, grid };

struct FrameBounds {
    double A = 0.0;
    double B = 0.0;
    BoundsBasis basis = BoundsBasis::grid;
    /// Set when sampling is incomplete: G-based bounds are then only indicative.
    bool heuristic = false;
};

/// Min and max of G over the eigenvalues when known, else over a 1000-point grid.
FrameBounds frame_bounds(const Dictionary& d);

Signal materialize_atom(const Dictionary& d, Vertex i, std::size_t j);

/// N x M matrix of atoms in (band, center) order.
Matrix atom_matrix(const Dictionary& d, std::size_t max_n = kDefaultEigenCap);

/// ||phi_{i,j}||_2 for every atom, computed from the eigendecomposition.
std::vector<Signal> exact_atom_norms(const Dictionary& d);

/// Per-center sample standard deviation of (g_j(L) eta)(i) over n_probes N(0, 1) probes.
Signal atom_norm_estimate(const Dictionary& d, std::size_t j, std::size_t n_probes, std::uint64_t seed);

/// max over atoms of the sum of its k largest absolute correlations with other normalized atoms.
double cumulative_coherence(const Dictionary& d, std::size_t k, std::size_t max_n = 4000);

struct InverseResult {
    Signal f;
    std::size_t iterations = 0;
    double relative_residual = 0.0;
    bool converged = true;
    bool rank_deficient = false;
};

/// Conjugate gradient on Phi Phi^* f = Phi alpha.
InverseResult inverse_cg(const Dictionary& d, const Coefficients& c, double tol = 1e-10, std::size_t max_iter = 500);

/// T steps of the frame algorithm started from 2/(A+B) Phi alpha.
Signal inverse_frame_iteration(const Dictionary& d, const Coefficients& c, double A, double B, std::size_t T);

/// 2/(A+B) Phi alpha.
Signal inverse_single_pass(const Dictionary& d, const Coefficients& c, double A, double B);

enum class InverseMethod { cg, frame_iter, single_pass };
InverseMethod parse_inverse(const std::string& s);

/// Dispatches to one of the inverses; frame bounds come from frame_bounds(d).
Signal invert(const Dictionary& d, const Coefficients& c, InverseMethod method, std::size_t iterations = 10);

} // namespace lsgf
