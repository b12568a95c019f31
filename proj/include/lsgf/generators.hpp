#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lsgf/graph.hpp"

namespace lsgf {

/// A generated graph, with planar vertex coordinates when the generator has them.
struct GeneratedGraph {
    SparseGraph graph;
    std::vector<std::array<double, 2>> coords;
    /// Cluster label per vertex for clustered generators, empty otherwise.
    std::vector<int> clusters;
};

GeneratedGraph make_path(std::size_t n);
GeneratedGraph make_cycle(std::size_t n);
GeneratedGraph make_star(std::size_t n);
GeneratedGraph make_complete(std::size_t n);
GeneratedGraph make_grid(std::size_t rows, std::size_t cols);

/// G(n, p). Not forced to be connected.
GeneratedGraph make_erdos_renyi(std::size_t n, double p, std::uint64_t seed);

/// Random geometric sensor network: uniform points in the unit square, symmetrized
/// k-nearest-neighbour edges with Gaussian weights. Components are bridged by their
/// closest vertex pairs, so the result is always connected.
GeneratedGraph make_sensor(std::size_t n, std::size_t k, std::uint64_t seed);

/// Disjoint unit-weight cliques joined in a ring by single edges of weight `link_weight`.
/// Spectrum clusters near 0 and near each clique size.
GeneratedGraph make_clique_ring(const std::vector<std::size_t>& clique_sizes, double link_weight);

/// Two sensor-style clusters joined by a few weak edges.
GeneratedGraph make_two_clusters(std::size_t n_per_cluster, std::size_t k, double bridge_weight,
                                 std::uint64_t seed);

/// Piecewise-smooth test signal: a smooth function of the coordinates plus a jump across
/// a line. Graphs without coordinates get smooth per-cluster ramps with offsets instead.
Signal piecewise_smooth_signal(const GeneratedGraph& g);

/// Piecewise-constant test signal: the cluster label (or a half-plane indicator).
Signal piecewise_constant_signal(const GeneratedGraph& g);

GeneratedGraph generate_graph(const std::string& kind, std::size_t n, std::size_t k, double p,
                              std::uint64_t seed);

} // namespace lsgf
