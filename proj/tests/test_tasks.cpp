#include <doctest.h>

#include <numeric>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "lsgf/tasks.hpp"
#include "oracles.hpp"

using namespace lsgf;

namespace {

struct Setup {
    GeneratedGraph g;
    Laplacian L;
    std::shared_ptr<const EigenDecomposition> eig;
};

Setup setup(GeneratedGraph g) {
    Setup out{std::move(g), {}, nullptr};
    out.L = build_laplacian(out.g.graph);
    out.eig = std::make_shared<const EigenDecomposition>(eigendecompose(out.L));
    return out;
}

/// Brute-force minimum of the SURE objective on a fine grid plus every breakpoint.
double brute_force_min(const Signal& a, const Signal& n, double sigma) {
    double best = sure_objective(a, n, sigma, 0.0);
    double top = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) top = std::max(top, std::abs(a[i]) / (sigma * n[i]));
    for (int k = 0; k <= 20000; ++k) best = std::min(best, sure_objective(a, n, sigma, 1.2 * top * k / 20000.0));
    for (Eigen::Index i = 0; i < a.size(); ++i) best = std::min(best, sure_objective(a, n, sigma, std::abs(a[i]) / (sigma * n[i])));
    return best;
}

} // namespace

TEST_SUITE("tasks") {

TEST_CASE("SURE threshold: zero coefficients pick 0") {
    CHECK(sure_threshold(Signal::Zero(10), Signal::Ones(10), 0.5) == 0.0);
    CHECK_THROWS_AS(sure_threshold(Signal(0), Signal(0), 1.0), Error);
}

TEST_CASE("SURE threshold: single coefficient two-candidate enumeration") {
    const Signal n = Signal::Constant(1, 1.0);
    // |a|^2 > 2 s^2 |phi|^2: keeping the coefficient (threshold 0) costs 2 s^2 < a^2
    const Signal big = Signal::Constant(1, 3.0);
    CHECK(sure_objective(big, n, 1.0, 0.0) == doctest::Approx(2.0));
    CHECK(sure_objective(big, n, 1.0, 3.0) == doctest::Approx(9.0));
    CHECK(sure_threshold(big, n, 1.0) == 0.0);
    // |a|^2 < 2 s^2 |phi|^2: killing it costs a^2 < 2 s^2
    const Signal small = Signal::Constant(1, 1.2);
    CHECK(sure_threshold(small, n, 1.0) == doctest::Approx(1.2));
    CHECK(sure_objective(small, n, 1.0, 1.2) == doctest::Approx(1.44));
}

TEST_CASE("SURE threshold equals the brute-force minimum") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.2, 2.0);
    for (int t = 0; t < 100; ++t) {
        const Eigen::Index m = 1 + t % 40;
        Signal a = oracle::random_signal(m, rng) * 2.0;
        Signal n(m);
        for (auto& v : n) v = u(rng);
        const double sigma = 0.3 + 0.01 * t;
        const double ups = sure_threshold(a, n, sigma);
        REQUIRE(sure_objective(a, n, sigma, ups) <= brute_force_min(a, n, sigma) + 1e-12);
    }
}

TEST_CASE("SURE is an unbiased risk estimate") {
    // soft thresholding of y = x + noise with per-atom noise level s n_i; SURE estimates sum (x_hat - x)^2
    const Eigen::Index m = 40;
    std::mt19937_64 rng(7);
    Signal x = Signal::Zero(m);
    for (Eigen::Index i = 0; i < m; i += 4) x[i] = 3.0 * (i % 8 == 0 ? 1.0 : -1.0);
    Signal n(m);
    for (Eigen::Index i = 0; i < m; ++i) n[i] = 0.5 + 0.02 * static_cast<double>(i);
    const double sigma = 0.7, ups = 1.3;
    std::normal_distribution<double> normal;
    std::vector<double> diff;
    for (int t = 0; t < 2000; ++t) {
        Signal y(m);
        for (Eigen::Index i = 0; i < m; ++i) y[i] = x[i] + sigma * n[i] * normal(rng);
        double risk = 0.0;
        for (Eigen::Index i = 0; i < m; ++i) {
            const double thr = ups * sigma * n[i];
            const double xh = std::copysign(std::max(0.0, std::abs(y[i]) - thr), y[i]);
            risk += (xh - x[i]) * (xh - x[i]);
        }
        // the objective omits the constant -sum s^2 n_i^2 term
        diff.push_back(sure_objective(y, n, sigma, ups) - sigma * sigma * n.squaredNorm() - risk);
    }
    const double mean = std::accumulate(diff.begin(), diff.end(), 0.0) / 2000.0;
    double var = 0.0;
    for (double d : diff) var += (d - mean) * (d - mean);
    const double se = std::sqrt(var / 1999.0 / 2000.0);
    MESSAGE("mean(SURE - risk) = " << mean << " (standard error " << se << ")");
    CHECK(std::abs(mean) <= 3.0 * se);
}

TEST_CASE("soft thresholding shrinks and keeps signs") {
    auto S = setup(make_sensor(60, 5, 3));
    const auto d = Dictionary::exact(S.L, S.eig, make_sgwt(S.L.lambda_max_bound, 4));
    std::mt19937_64 rng(1);
    const auto c = analysis(d, oracle::random_signal(60, rng));
    const auto norms = atom_norms(d);
    const auto out = soft_threshold(c, norms, {0.0, 0.5, 1.0, 2.0}, 0.3);
    for (std::size_t j = 0; j < 4; ++j) {
        CHECK(out.values[j].lpNorm<1>() <= c.values[j].lpNorm<1>());
        for (Eigen::Index i = 0; i < out.values[j].size(); ++i)
            if (out.values[j][i] != 0.0) REQUIRE(std::signbit(out.values[j][i]) == std::signbit(c.values[j][i]));
    }
    CHECK((out.values[0] - c.values[0]).norm() == 0.0);
}

TEST_CASE("scaling bands are exempt from thresholding") {
    const auto sg = make_sgwt(10.0, 5);
    const auto skip = scaling_bands(sg);
    CHECK(skip == std::vector<bool>{true, false, false, false, false});
    const auto it = make_uniform_translates(10.0, 4, Prototype::itersine);
    CHECK(scaling_bands(it) == std::vector<bool>{true, false, false, false});
}

TEST_CASE("denoise: zero thresholds return y, huge thresholds on a scaling-free bank return 0") {
    auto S = setup(make_sensor(80, 6, 5));
    std::mt19937_64 rng(3);
    const Signal y = oracle::random_signal(80, rng);
    const auto d = Dictionary::exact(S.L, S.eig, make_uniform_translates(S.L.lambda_max_bound, 5, Prototype::meyer));
    DenoiseConfig cfg;
    cfg.sigma = 0.5;
    cfg.fixed_thresholds = std::vector<double>(5, 0.0);
    const auto r0 = denoise(d, y, cfg);
    CHECK((r0.f - y).norm() <= 1e-9 * y.norm());
    const Metrics m0 = metrics(y, r0.f);
    CHECK(m0.nmse <= 1e-18);

    const double lb = S.L.lambda_max_bound;
    FilterBank bp{{ideal_band_kernel(0.1 * lb, 0.5 * lb, false, lb), ideal_band_kernel(0.5 * lb, lb, true, lb)}, lb, "bp"};
    const auto db = Dictionary::exact(S.L, S.eig, bp);
    cfg.fixed_thresholds = std::vector<double>(2, 1e12);
    CHECK(denoise(db, y, cfg).f.norm() <= 1e-12);
}

TEST_CASE("denoising preserves the mean through the scaling band") {
    auto S = setup(make_sensor(120, 6, 9));
    const auto gen = S.g;
    Signal f = piecewise_smooth_signal(gen);
    std::mt19937_64 rng(4);
    const Signal y = f + 0.3 * oracle::random_signal(120, rng);
    const auto d = Dictionary::exact(S.L, S.eig, make_uniform_translates(S.L.lambda_max_bound, 6, Prototype::itersine));
    DenoiseConfig cfg;
    cfg.sigma = 0.3;
    const auto r = denoise(d, y, cfg);
    CHECK(std::abs(r.f.mean() - y.mean()) <= 1e-9);
    CHECK(r.thresholds[0] == 0.0);
}

TEST_CASE("denoising a piecewise-smooth sensor signal improves SNR") {
    auto S = setup(make_sensor(500, 6, 1));
    Signal f = piecewise_smooth_signal(S.g);
    f.array() -= f.mean();
    const double sf = std::sqrt(f.squaredNorm() / 500.0);
    const auto d = Dictionary::exact(S.L, S.eig, make_uniform_translates(S.L.lambda_max_bound, 6, Prototype::itersine));
    DenoiseConfig cfg;
    cfg.sigma = sf / 4.0;
    double total = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::mt19937_64 rng(seed);
        const Signal xi = cfg.sigma * oracle::random_signal(500, rng);
        const auto r = denoise(d, f + xi, cfg);
        total += *metrics(f, r.f, &xi).delta_snr_db;
    }
    MESSAGE("mean delta SNR " << total / 20.0 << " dB");
    CHECK(total / 20.0 > 0.0);
}

TEST_CASE("denoise in poly mode with each inverse") {
    auto S = setup(make_sensor(150, 6, 2));
    Signal f = piecewise_smooth_signal(S.g);
    f.array() -= f.mean();
    const double sigma = 0.25 * std::sqrt(f.squaredNorm() / 150.0);
    std::mt19937_64 rng(6);
    const Signal xi = sigma * oracle::random_signal(150, rng);
    const auto d = Dictionary::poly(S.L, make_uniform_translates(S.L.lambda_max_bound, 6, Prototype::itersine), 40);
    for (auto inv : {InverseMethod::cg, InverseMethod::frame_iter, InverseMethod::single_pass}) {
        DenoiseConfig cfg;
        cfg.sigma = sigma;
        cfg.inverse = inv;
        const auto r = denoise(d, f + xi, cfg);
        CHECK(*metrics(f, r.f, &xi).delta_snr_db > 0.0);
    }
}

TEST_CASE("OMP basics") {
    auto S = setup(make_sensor(60, 5, 8));
    const auto d = Dictionary::exact(S.L, S.eig, make_sgwt(S.L.lambda_max_bound, 4));
    const Matrix Phi = atom_matrix(d);
    const Signal atom = Phi.col(77) * 2.5;
    const auto one = omp(Phi, atom, 1);
    REQUIRE(one.selected.size() == 1);
    CHECK((Phi.col(static_cast<Eigen::Index>(one.selected[0])).normalized() - atom.normalized()).norm() <= 1e-10);
    CHECK(one.residual_norms[0] <= 1e-10);
    CHECK(one.coefficients[77] == doctest::Approx(2.5));

    std::mt19937_64 rng(3);
    const Signal f = oracle::random_signal(60, rng);
    const auto full = omp(Phi, f, 60);
    CHECK(full.residual_norms.back() <= 1e-8 * f.norm());
    CHECK((Phi * full.coefficients - full.reconstruction).norm() <= 1e-10 * f.norm());
    for (std::size_t k = 1; k < full.residual_norms.size(); ++k) CHECK(full.residual_norms[k] <= full.residual_norms[k - 1] + 1e-12);
    CHECK(std::set<std::size_t>(full.selected.begin(), full.selected.end()).size() == full.selected.size());
    CHECK_THROWS_AS(omp(Phi, f, Phi.cols() + 1), Error);

    const auto cr = compress_omp(d, f, 10);
    CHECK((synthesis(d, cr.coefficients) - cr.reconstruction).norm() <= 1e-10 * f.norm());
    std::size_t nonzero = 0;
    for (double v : cr.coefficients.flatten()) nonzero += v != 0.0 ? 1 : 0;
    CHECK(nonzero <= 10);
}

TEST_CASE("OMP with duplicated atoms picks one copy") {
    Matrix Phi(3, 3);
    Phi << 1, 1, 0, 0, 0, 1, 0, 0, 0;
    const Signal f = (Signal(3) << 2.0, 0.0, 0.0).finished();
    const auto r = omp(Phi, f, 2);
    CHECK(r.selected[0] == 0);
    CHECK(r.residual_norms[0] <= 1e-14);
}

TEST_CASE("redundant Parseval frame beats the graph Fourier basis at T0 = 50") {
    auto S = setup(make_sensor(300, 6, 2));
    Signal f = piecewise_smooth_signal(S.g);
    f.array() -= f.mean();
    const auto frame = Dictionary::exact(S.L, S.eig, make_uniform_translates(S.L.lambda_max_bound, 6, Prototype::itersine));
    const double frame_nmse = metrics(f, compress_omp(frame, f, 50).reconstruction).nmse;
    const double gft_nmse = metrics(f, omp(S.eig->eigenvectors, f, 50).reconstruction).nmse;
    MESSAGE("NMSE at T0=50: frame " << frame_nmse << ", GFT " << gft_nmse);
    CHECK(frame_nmse < gft_nmse);
}

TEST_CASE("hard thresholding") {
    auto S = setup(make_sensor(100, 6, 4));
    const auto d = Dictionary::exact(S.L, S.eig, make_uniform_translates(S.L.lambda_max_bound, 4, Prototype::itersine));
    Signal f = piecewise_smooth_signal(S.g);
    CHECK((compress_hard_threshold(d, f, d.num_atoms(), InverseMethod::cg) - f).norm() <= 1e-9 * f.norm());
    CHECK(compress_hard_threshold(d, f, 0, InverseMethod::cg).norm() == 0.0);

    // discarded energy is exactly ||Phi alpha_d||^2 and bounded by B ||alpha_d||^2
    const auto c = analysis(d, f);
    const auto norms = atom_norms(d);
    const auto kept = hard_threshold(c, norms, 40);
    const auto dropped = c.with_values(c.flatten() - kept.flatten());
    const double err = (synthesis(d, kept) - f).squaredNorm();
    const Signal disc = atom_matrix(d) * dropped.flatten();
    CHECK(err == doctest::Approx(disc.squaredNorm()).epsilon(1e-9));
    CHECK(err <= frame_bounds(d).B * dropped.squared_norm() + 1e-12);
}

TEST_CASE("keeping the largest half beats a random half") {
    auto S = setup(make_sensor(120, 6, 12));
    const auto d = Dictionary::exact(S.L, S.eig, make_uniform_translates(S.L.lambda_max_bound, 4, Prototype::itersine));
    const auto s = oracle::eig(oracle::laplacian(S.g.graph));
    std::mt19937_64 rng(9);
    const auto norms = atom_norms(d);
    for (int t = 0; t < 20; ++t) {
        const Signal f = oracle::spectral_apply(s, [](double l) { return std::exp(-l); }, oracle::random_signal(120, rng));
        const double best = metrics(f, compress_hard_threshold(d, f, 60, InverseMethod::cg, &norms)).nmse;
        auto c = analysis(d, f);
        std::vector<std::size_t> idx(c.total());
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), rng);
        Signal flat = c.flatten();
        for (std::size_t k = 60; k < idx.size(); ++k) flat[static_cast<Eigen::Index>(idx[k])] = 0.0;
        const double random = metrics(f, invert(d, c.with_values(flat), InverseMethod::cg)).nmse;
        CHECK(best < random);
    }
}

TEST_CASE("metrics") {
    std::mt19937_64 rng(1);
    const Signal f = oracle::random_signal(30, rng);
    const Signal xi = oracle::random_signal(30, rng);
    const auto exact = metrics(f, f, &xi);
    CHECK(exact.nmse == 0.0);
    CHECK(*exact.delta_snr_db == kSnrCapDb);
    CHECK(*metrics(f, f + xi, &xi).delta_snr_db == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(metrics(f, Signal::Zero(30)).nmse == doctest::Approx(1.0));
    CHECK_FALSE(metrics(f, f).delta_snr_db.has_value());
    CHECK_THROWS_AS(metrics(Signal::Zero(30), f), Error);
    CHECK_THROWS_AS(metrics(f, Signal::Zero(29)), Error);
}

} // TEST_SUITE
