#pragma once

#include <iosfwd>
#include <string>

#include "lsgf/filter_bank.hpp"
#include "lsgf/sampling.hpp"

namespace lsgf {

/// Matrix Market coordinate file, symmetric real, lower triangle, 1-based, weights at %.17g.
void write_matrix_market(std::ostream& os, const SparseGraph& g);
void write_matrix_market(const std::string& path, const SparseGraph& g);
/// Accepts real/integer/pattern fields with symmetric or general storage.
SparseGraph read_matrix_market(std::istream& is);
SparseGraph read_matrix_market(const std::string& path);

/// src,dst,weight rows with 0-based vertices; header optional. n_vertices = 0 infers max index + 1.
SparseGraph read_edge_list_csv(std::istream& is, std::size_t n_vertices = 0);
/// Picks the reader by extension (.mtx or .csv).
SparseGraph read_graph(const std::string& path);
void write_edge_list_csv(const std::string& path, const SparseGraph& g);

void write_signal_csv(const std::string& path, const Signal& f);
Signal read_signal_csv(const std::string& path);
Signal read_signal_csv(std::istream& is);

void write_cdf_csv(const std::string& path, const SpectralCDF& cdf, std::size_t n_points = 200);
/// Loaded CDFs are treated as estimates (monotone cubic through the rows).
SpectralCDF read_cdf_csv(const std::string& path);

void write_center_sets_csv(const std::string& path, const CenterSets& sets);
CenterSets read_center_sets_csv(const std::string& path, std::size_t J);

void write_coefficients(std::ostream& os, const Coefficients& c);
void write_coefficients(const std::string& path, const Coefficients& c);
/// Provenance is not stored; pass the result through Dictionary::rebind before synthesis.
Coefficients read_coefficients(std::istream& is);
Coefficients read_coefficients(const std::string& path);
void write_coefficients_csv(const std::string& path, const Coefficients& c);

/// lambda, one column per kernel, then G.
void write_bank_csv(const std::string& path, const FilterBank& bank, std::size_t n_points = 500);

} // namespace lsgf
