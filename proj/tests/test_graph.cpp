#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "lsgf/graph.hpp"
#include "oracles.hpp"

using namespace lsgf;

namespace {

SparseGraph single_edge(double w) {
    const std::vector<Edge> e{{0, 1, w}};
    return SparseGraph::from_edges(2, e);
}

} // namespace

TEST_SUITE("graph-core") {

TEST_CASE("path P3 combinatorial Laplacian rows") {
    const auto L = build_laplacian(make_path(3).graph).matrix.to_dense();
    Matrix expected(3, 3);
    expected << 1, -1, 0, -1, 2, -1, 0, -1, 1;
    CHECK((L - expected).norm() == 0.0);
}

TEST_CASE("single edge of weight 2") {
    const auto L = build_laplacian(single_edge(2.0)).matrix.to_dense();
    Matrix expected(2, 2);
    expected << 2, -2, -2, 2;
    CHECK((L - expected).norm() == 0.0);
}

TEST_CASE("C4 normalized Laplacian matches the dense D^-1/2 L D^-1/2") {
    const auto g = make_cycle(4).graph;
    const Matrix L = build_laplacian(g, LaplacianKind::normalized).matrix.to_dense();
    CHECK((L - oracle::normalized_laplacian(g)).norm() <= 1e-15);
    for (int i = 0; i < 4; ++i) CHECK(L(i, i) == doctest::Approx(1.0));
    CHECK(L(0, 1) == doctest::Approx(-0.5));
    CHECK(L(0, 2) == 0.0);
}

TEST_CASE("combinatorial rows sum to zero") {
    for (const auto& [name, gg] : fixtures::small_graphs()) {
        const Matrix L = build_laplacian(gg.graph).matrix.to_dense();
        CHECK_MESSAGE(L.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-12 * L.diagonal().maxCoeff(), name);
    }
}

TEST_CASE("invalid graphs are rejected") {
    CHECK_THROWS_WITH_AS(build_laplacian(SparseGraph::from_edges(0, {})), "empty graph", Error);
    const std::vector<Edge> loop{{0, 0, 1.0}};
    CHECK_THROWS_AS(SparseGraph::from_edges(2, loop), Error);
    const std::vector<Edge> negative{{0, 1, -1.0}};
    CHECK_THROWS_AS(SparseGraph::from_edges(2, negative), Error);
    const std::vector<Edge> asym{{0, 1, 1.0}, {1, 0, 2.0}};
    CHECK_THROWS_AS(SparseGraph::from_edges(2, asym), Error);
    const std::vector<Edge> out_of_range{{0, 5, 1.0}};
    CHECK_THROWS_AS(SparseGraph::from_edges(2, out_of_range), Error);
}

TEST_CASE("disconnected graphs load with connected() false") {
    const std::vector<Edge> e{{0, 1, 1.0}, {2, 3, 1.0}};
    const auto g = SparseGraph::from_edges(4, e);
    CHECK_FALSE(g.connected());
    const auto eig = eigendecompose(build_laplacian(g));
    CHECK(std::abs(eig.eigenvalues[1]) <= 1e-12);
}

TEST_CASE("lambda_max_upper_bound examples against dense eigenvalues") {
    struct Case {
        GeneratedGraph g;
        double bound, exact;
    };
    const std::vector<Case> cases{{make_path(3), 3.0, 3.0}, {make_cycle(4), 4.0, 4.0}, {make_complete(3), 4.0, 3.0}};
    for (const auto& c : cases) {
        const auto L = build_laplacian(c.g.graph);
        CHECK(lambda_max_upper_bound(L) == doctest::Approx(c.bound));
        CHECK(L.lambda_max_bound == doctest::Approx(c.bound));
        CHECK(oracle::eig(oracle::laplacian(c.g.graph)).values.maxCoeff() == doctest::Approx(c.exact));
    }
    CHECK(lambda_max_upper_bound(build_laplacian(make_cycle(4).graph, LaplacianKind::normalized)) == 2.0);
}

TEST_CASE("upper bound dominates lambda_max on generated graphs") {
    for (const auto& [name, gg] : fixtures::small_graphs()) {
        if (gg.graph.size() > 200) continue;
        const auto L = build_laplacian(gg.graph);
        CHECK_MESSAGE(L.lambda_max_bound >= oracle::eig(oracle::laplacian(gg.graph)).values.maxCoeff() - 1e-12, name);
    }
}

TEST_CASE("Lanczos estimates") {
    const auto P3 = build_laplacian(make_path(3).graph);
    CHECK(lanczos_lambda_max(P3, 3, 1) == doctest::Approx(3.03).epsilon(1e-12));

    const auto g = make_sensor(40, 5, 2).graph;
    const auto L = build_laplacian(g);
    const double exact = oracle::eig(oracle::laplacian(g)).values.maxCoeff();
    CHECK(std::abs(lanczos_lambda_max(L, 40, 7) - 1.01 * exact) <= 1e-8 * exact);

    const auto K3 = build_laplacian(make_complete(3).graph);
    for (std::uint64_t seed = 0; seed < 10; ++seed) CHECK(lanczos_lambda_max(K3, 2, seed) >= 3.0);

    CHECK(lanczos_lambda_max(L, 10, 4) == lanczos_lambda_max(L, 10, 4));
}

TEST_CASE("quadratic form") {
    const auto L = build_laplacian(make_path(3).graph);
    CHECK(quadratic_form(L, Signal::Constant(3, 2.5)) == doctest::Approx(0.0));
    CHECK(quadratic_form(L, Signal::Unit(3, 0)) == doctest::Approx(1.0));
    CHECK_THROWS_AS(quadratic_form(L, Signal::Zero(4)), Error);

    const auto g = make_grid(5, 6).graph;
    const auto Lg = build_laplacian(g);
    const auto s = oracle::eig(oracle::laplacian(g));
    for (Eigen::Index l = 0; l < s.values.size(); l += 7)
        CHECK(quadratic_form(Lg, s.vectors.col(l)) == doctest::Approx(s.values[l]).epsilon(1e-10));
}

TEST_CASE("quadratic form matches the edge sum and is nonnegative") {
    std::mt19937_64 rng(3);
    for (const auto& [name, gg] : fixtures::small_graphs()) {
        const auto L = build_laplacian(gg.graph);
        const auto edges = gg.graph.edges();
        for (int t = 0; t < 1000; ++t) {
            const Signal f = oracle::random_signal(static_cast<Eigen::Index>(L.size()), rng);
            const double q = quadratic_form(L, f);
            REQUIRE(q >= 0.0);
            if (t < 5) {
                double sum = 0.0;
                for (const auto& e : edges) sum += e.weight * (f[e.src] - f[e.dst]) * (f[e.src] - f[e.dst]);
                CHECK(q == doctest::Approx(sum).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("eigendecompose examples") {
    const auto e1 = eigendecompose(build_laplacian(single_edge(1.0)));
    CHECK(e1.eigenvalues[0] == doctest::Approx(0.0));
    CHECK(e1.eigenvalues[1] == doctest::Approx(2.0));

    const auto e3 = eigendecompose(build_laplacian(make_path(3).graph));
    CHECK(e3.eigenvalues[0] == doctest::Approx(0.0));
    CHECK(e3.eigenvalues[1] == doctest::Approx(1.0));
    CHECK(e3.eigenvalues[2] == doctest::Approx(3.0));

    const auto e4 = eigendecompose(build_laplacian(make_cycle(4).graph));
    for (int k = 0; k < 4; ++k) {
        // circulant eigenvalues 2 - 2 cos(2 pi k / 4), sorted: 0, 2, 2, 4
        const double expected[] = {0.0, 2.0, 2.0, 4.0};
        CHECK(e4.eigenvalues[k] == doctest::Approx(expected[k]));
    }
}

TEST_CASE("eigendecomposition residual, orthonormality and sign convention") {
    for (const auto& [name, gg] : fixtures::small_graphs()) {
        const auto L = build_laplacian(gg.graph);
        const auto e = eigendecompose(L);
        const Matrix Ld = oracle::laplacian(gg.graph);
        const Matrix& U = e.eigenvectors;
        const auto n = static_cast<Eigen::Index>(e.size());
        CHECK_MESSAGE((Ld * U - U * e.eigenvalues.asDiagonal()).norm() / Ld.norm() <= 1e-8, name);
        CHECK_MESSAGE((U.transpose() * U - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10, name);
        CHECK(std::abs(e.eigenvalues[0]) <= 1e-10);
        for (Eigen::Index i = 1; i < n; ++i) CHECK(e.eigenvalues[i] >= e.eigenvalues[i - 1]);
        for (Eigen::Index l = 0; l < n; ++l) {
            Eigen::Index arg = 0;
            U.col(l).cwiseAbs().maxCoeff(&arg);
            CHECK(U(arg, l) > 0.0);
        }
    }
}

TEST_CASE("eigendecompose refuses graphs above the cap") {
    CHECK_THROWS_AS(eigendecompose(build_laplacian(make_path(50).graph), 20), Error);
}

TEST_CASE("normalized Laplacian spectrum lies in [0, 2]") {
    for (const auto& [name, gg] : fixtures::small_graphs()) {
        const auto e = eigendecompose(build_laplacian(gg.graph, LaplacianKind::normalized));
        CHECK_MESSAGE(e.eigenvalues.minCoeff() >= -1e-10, name);
        CHECK_MESSAGE(e.eigenvalues.maxCoeff() <= 2.0 + 1e-10, name);
    }
}

TEST_CASE("CSR products match the dense Laplacian") {
    std::mt19937_64 rng(1);
    for (const auto& [name, gg] : fixtures::small_graphs()) {
        const auto L = build_laplacian(gg.graph);
        const Signal f = oracle::random_signal(static_cast<Eigen::Index>(L.size()), rng);
        CHECK((L.matrix.multiply(f) - oracle::laplacian(gg.graph) * f).norm() <= 1e-12 * f.norm() * L.lambda_max_bound);
    }
}

TEST_CASE("hop distances agree with a dense BFS") {
    const auto g = make_sensor(80, 4, 9).graph;
    for (Vertex v : {0, 17, 79}) CHECK(g.hop_distances(v) == oracle::bfs(g, v));
}

TEST_CASE("generators") {
    CHECK(make_path(5).graph.num_edges() == 4);
    CHECK(make_cycle(6).graph.num_edges() == 6);
    CHECK(make_star(7).graph.num_edges() == 6);
    CHECK(make_complete(5).graph.num_edges() == 10);
    CHECK(make_grid(3, 4).graph.num_edges() == 17);
    const auto s = make_sensor(500, 6, 1);
    CHECK(s.graph.connected());
    const auto d = oracle::bfs(s.graph, 0);
    CHECK(std::none_of(d.begin(), d.end(), [](int x) { return x < 0; }));
    CHECK(make_sensor(100, 6, 4).graph.edges().size() == make_sensor(100, 6, 4).graph.num_edges());
    CHECK_THROWS_AS(generate_graph("hypercube", 10, 2, 0.1, 0), Error);
}

} // TEST_SUITE
