#include "lsgf/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <set>

namespace lsgf {

namespace {

GeneratedGraph finish(std::size_t n, const std::vector<Edge>& edges) {
    return GeneratedGraph{SparseGraph::from_edges(n, edges), {}, {}};
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

// kNN edges over a point set, with Gaussian weights exp(-d^2 / (2 theta^2)), theta the mean kNN distance.
std::vector<Edge> knn_edges(const std::vector<std::array<double, 2>>& pts, std::size_t k, Vertex offset) {
    const std::size_t n = pts.size();
    auto dist2 = [&](std::size_t a, std::size_t b) {
        const double dx = pts[a][0] - pts[b][0];
        const double dy = pts[a][1] - pts[b][1];
        return dx * dx + dy * dy;
    };
    std::set<std::pair<std::size_t, std::size_t>> pairs;
    double mean_d = 0.0;
    std::size_t count = 0;
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::iota(order.begin(), order.end(), 0);
        const std::size_t kk = std::min(k + 1, n);
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(kk), order.end(),
                          [&](std::size_t a, std::size_t b) {
                              const double da = dist2(i, a), db = dist2(i, b);
                              return da < db || (da == db && a < b);
                          });
        for (std::size_t t = 0; t < kk; ++t) {
            const auto j = order[t];
            if (j == i) continue;
            pairs.emplace(std::min(i, j), std::max(i, j));
        }
    }
    for (const auto& [a, b] : pairs) {
        mean_d += std::sqrt(dist2(a, b));
        ++count;
    }
    const double theta = count ? mean_d / static_cast<double>(count) : 1.0;

    UnionFind uf(n);
    std::vector<Edge> edges;
    for (const auto& [a, b] : pairs) {
        const double w = std::exp(-dist2(a, b) / (2.0 * theta * theta));
        edges.push_back({static_cast<Vertex>(a) + offset, static_cast<Vertex>(b) + offset, w});
        uf.unite(a, b);
    }
    // bridge components through their closest pair until connected
    for (;;) {
        std::vector<std::size_t> roots;
        for (std::size_t i = 0; i < n; ++i) roots.push_back(uf.find(i));
        const auto root0 = roots[0];
        if (std::all_of(roots.begin(), roots.end(), [&](std::size_t r) { return r == root0; })) break;
        double best = INFINITY;
        std::size_t ba = 0, bb = 0;
        for (std::size_t a = 0; a < n; ++a) {
            if (roots[a] != root0) continue;
            for (std::size_t b = 0; b < n; ++b) {
                if (roots[b] == root0) continue;
                const double d = dist2(a, b);
                if (d < best) {
                    best = d;
                    ba = a;
                    bb = b;
                }
            }
        }
        edges.push_back({static_cast<Vertex>(std::min(ba, bb)) + offset, static_cast<Vertex>(std::max(ba, bb)) + offset,
                         std::exp(-best / (2.0 * theta * theta))});
        uf.unite(ba, bb);
    }
    return edges;
}

std::vector<std::array<double, 2>> random_points(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<std::array<double, 2>> pts(n);
    for (auto& p : pts) {
        p[0] = unif(rng);
        p[1] = unif(rng);
    }
    return pts;
}

} // namespace

GeneratedGraph make_path(std::size_t n) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>(i + 1), 1.0});
    auto g = finish(n, edges);
    for (std::size_t i = 0; i < n; ++i) g.coords.push_back({static_cast<double>(i) / std::max<std::size_t>(n - 1, 1), 0.0});
    return g;
}

GeneratedGraph make_cycle(std::size_t n) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
        const auto j = (i + 1) % n;
        if (j != i) edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>(j), 1.0});
    }
    if (n == 2) edges.resize(1);
    auto g = finish(n, edges);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        g.coords.push_back({0.5 + 0.5 * std::cos(t), 0.5 + 0.5 * std::sin(t)});
    }
    return g;
}

GeneratedGraph make_star(std::size_t n) {
    std::vector<Edge> edges;
    for (std::size_t i = 1; i < n; ++i) edges.push_back({0, static_cast<Vertex>(i), 1.0});
    return finish(n, edges);
}

GeneratedGraph make_complete(std::size_t n) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>(j), 1.0});
    return finish(n, edges);
}

GeneratedGraph make_grid(std::size_t rows, std::size_t cols) {
    std::vector<Edge> edges;
    auto id = [&](std::size_t r, std::size_t c) { return static_cast<Vertex>(r * cols + c); };
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            if (c + 1 < cols) edges.push_back({id(r, c), id(r, c + 1), 1.0});
            if (r + 1 < rows) edges.push_back({id(r, c), id(r + 1, c), 1.0});
        }
    }
    auto g = finish(rows * cols, edges);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            g.coords.push_back({static_cast<double>(c) / std::max<std::size_t>(cols - 1, 1),
                                static_cast<double>(r) / std::max<std::size_t>(rows - 1, 1)});
    return g;
}

GeneratedGraph make_erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error("edge probability must lie in [0, 1]");
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(p);
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (coin(rng)) edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>(j), 1.0});
    return finish(n, edges);
}

GeneratedGraph make_sensor(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (n < 2) throw Error("sensor graph needs at least 2 vertices");
    if (k == 0) throw Error("sensor graph needs k >= 1");
    std::mt19937_64 rng(seed);
    auto pts = random_points(n, rng);
    auto g = finish(n, knn_edges(pts, k, 0));
    g.coords = std::move(pts);
    return g;
}

GeneratedGraph make_clique_ring(const std::vector<std::size_t>& clique_sizes, double link_weight) {
    if (clique_sizes.empty()) throw Error("need at least one clique");
    std::vector<Edge> edges;
    std::vector<int> labels;
    std::vector<Vertex> first;
    Vertex base = 0;
    for (std::size_t c = 0; c < clique_sizes.size(); ++c) {
        const auto m = clique_sizes[c];
        if (m == 0) throw Error("clique size must be positive");
        first.push_back(base);
        for (std::size_t i = 0; i < m; ++i) {
            labels.push_back(static_cast<int>(c));
            for (std::size_t j = i + 1; j < m; ++j)
                edges.push_back({base + static_cast<Vertex>(i), base + static_cast<Vertex>(j), 1.0});
        }
        base += static_cast<Vertex>(m);
    }
    const auto nc = clique_sizes.size();
    if (nc > 1) {
        for (std::size_t c = 0; c < nc; ++c) {
            const auto next = (c + 1) % nc;
            if (nc == 2 && c == 1) break;
            // last vertex of clique c to first vertex of the next clique
            const Vertex a = first[c] + static_cast<Vertex>(clique_sizes[c]) - 1;
            edges.push_back({std::min(a, first[next]), std::max(a, first[next]), link_weight});
        }
    }
    auto g = finish(static_cast<std::size_t>(base), edges);
    g.clusters = std::move(labels);
    return g;
}

GeneratedGraph make_two_clusters(std::size_t n_per_cluster, std::size_t k, double bridge_weight,
                                 std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto a = random_points(n_per_cluster, rng);
    auto b = random_points(n_per_cluster, rng);
    auto edges = knn_edges(a, k, 0);
    auto eb = knn_edges(b, k, static_cast<Vertex>(n_per_cluster));
    edges.insert(edges.end(), eb.begin(), eb.end());
    const std::size_t n_bridges = std::max<std::size_t>(1, n_per_cluster / 50);
    for (std::size_t t = 0; t < n_bridges; ++t) {
        edges.push_back({static_cast<Vertex>(t), static_cast<Vertex>(n_per_cluster + t), bridge_weight});
    }
    GeneratedGraph g{SparseGraph::from_edges(2 * n_per_cluster, edges), {}, {}};
    for (auto& p : a) g.coords.push_back({0.45 * p[0], p[1]});
    for (auto& p : b) g.coords.push_back({0.55 + 0.45 * p[0], p[1]});
    g.clusters.assign(n_per_cluster, 0);
    g.clusters.resize(2 * n_per_cluster, 1);
    return g;
}

Signal piecewise_smooth_signal(const GeneratedGraph& g) {
    const auto n = static_cast<Eigen::Index>(g.graph.size());
    Signal f(n);
    if (!g.coords.empty()) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double x = g.coords[static_cast<std::size_t>(i)][0];
            const double y = g.coords[static_cast<std::size_t>(i)][1];
            const double smooth = x * x + y * y + std::sin(std::numbers::pi * x);
            f[i] = x + y > 1.0 ? smooth - 2.0 : smooth + 0.5 * x - y;
        }
        return f;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        const int c = g.clusters.empty() ? 0 : g.clusters[static_cast<std::size_t>(i)];
        f[i] = static_cast<double>(c % 3) - 1.0 + 0.3 * std::sin(0.7 * static_cast<double>(i));
    }
    return f;
}

Signal piecewise_constant_signal(const GeneratedGraph& g) {
    const auto n = static_cast<Eigen::Index>(g.graph.size());
    Signal f(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!g.clusters.empty()) {
            f[i] = static_cast<double>(g.clusters[static_cast<std::size_t>(i)]);
        } else if (!g.coords.empty()) {
            f[i] = g.coords[static_cast<std::size_t>(i)][0] < 0.5 ? 1.0 : -1.0;
        } else {
            f[i] = i < n / 2 ? 1.0 : -1.0;
        }
    }
    return f;
}

GeneratedGraph generate_graph(const std::string& kind, std::size_t n, std::size_t k, double p,
                              std::uint64_t seed) {
    if (kind == "path") return make_path(n);
    if (kind == "cycle") return make_cycle(n);
    if (kind == "star") return make_star(n);
    if (kind == "complete") return make_complete(n);
    if (kind == "grid") {
        const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
        return make_grid(side, (n + side - 1) / side);
    }
    if (kind == "gnp" || kind == "erdos_renyi") return make_erdos_renyi(n, p, seed);
    if (kind == "sensor") return make_sensor(n, k, seed);
    if (kind == "two_clusters") return make_two_clusters(n / 2, k, 0.01, seed);
    if (kind == "cliques") {
        std::vector<std::size_t> sizes;
        std::size_t remaining = n;
        std::size_t m = std::max<std::size_t>(k, 2);
        while (remaining > 0) {
            const auto s = std::min(m, remaining);
            sizes.push_back(s);
            remaining -= s;
            m += 2;
        }
        return make_clique_ring(sizes, 0.05);
    }
    throw Error("unknown graph kind '" + kind + "'");
}

} // namespace lsgf
