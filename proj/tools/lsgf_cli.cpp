#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lsgf/config.hpp"
#include "lsgf/generators.hpp"
#include "lsgf/io.hpp"
#include "lsgf/sampling.hpp"
#include "lsgf/tasks.hpp"

namespace {

using namespace lsgf;
using json = nlohmann::json;

struct GraphOptions {
    std::string path;
    std::string laplacian = "combinatorial";
    std::string bound = "anderson";
    std::size_t lanczos_steps = 30;
};

struct BankOptions {
    std::string spec_file;
    std::vector<std::string> overrides;
    std::string cdf_file;
    std::vector<std::string> training;
    std::string mode = "exact";
    std::string centers_file;
};

void add_graph_options(CLI::App* cmd, GraphOptions& g) {
    cmd->add_option("--graph", g.path, "Graph file (.mtx or edge-list .csv)")->required();
    cmd->add_option("--laplacian", g.laplacian, "combinatorial | normalized");
    cmd->add_option("--bound", g.bound, "Spectral bound: anderson | lanczos");
    cmd->add_option("--lanczos-steps", g.lanczos_steps, "Lanczos steps for --bound lanczos");
}

void add_bank_options(CLI::App* cmd, BankOptions& b) {
    cmd->add_option("--bank", b.spec_file, "Bank specification file (key = value)");
    cmd->add_option("--set", b.overrides, "Bank key=value override (repeatable)");
    cmd->add_option("--cdf", b.cdf_file, "Spectral CDF CSV for spectrum warps (estimated if absent)");
    cmd->add_option("--training", b.training, "Training signal CSV for the energy warp (repeatable)");
}

void add_dictionary_options(CLI::App* cmd, BankOptions& b) {
    add_bank_options(cmd, b);
    cmd->add_option("--mode", b.mode, "exact | poly");
    cmd->add_option("--centers", b.centers_file, "Center sets CSV (band,vertex,weight); default complete sampling");
}

Laplacian make_laplacian(const SparseGraph& g, const std::string& kind, const std::string& bound, std::size_t steps,
                         std::uint64_t seed) {
    Laplacian L = build_laplacian(g, parse_laplacian_kind(kind));
    if (bound == "lanczos") return L.with_bound(std::min(L.lambda_max_bound, lanczos_lambda_max(L, steps, seed)));
    if (bound != "anderson") throw Error("unknown bound '" + bound + "'");
    return L;
}

Laplacian load_laplacian(const GraphOptions& g, std::uint64_t seed) {
    return make_laplacian(read_graph(g.path), g.laplacian, g.bound, g.lanczos_steps, seed);
}

BankSpec load_bank_spec(const BankOptions& b) {
    KeyValues kv = b.spec_file.empty() ? KeyValues{} : read_key_values(b.spec_file);
    for (const auto& o : b.overrides) apply_override(kv, o);
    return parse_bank_spec(kv);
}

struct Built {
    BankSpec spec;
    FilterBank bank;
};

Built load_bank(const BankOptions& b, const Laplacian& L, std::uint64_t seed) {
    Built out;
    out.spec = load_bank_spec(b);
    std::optional<SpectralCDF> cdf, energy;
    const bool needs_cdf = out.spec.warp == "spectrum" || out.spec.warp == "spectrum-log" || out.spec.edge_shift > 0.0;
    if (needs_cdf) {
        if (!b.cdf_file.empty()) {
            cdf = read_cdf_csv(b.cdf_file);
        } else {
            CdfEstimateOptions o;
            o.seed = seed;
            cdf = estimate_spectral_cdf(L, o);
        }
    }
    if (out.spec.warp == "energy") {
        if (b.training.empty()) throw Error("warp 'energy' needs --training signals");
        std::vector<Signal> training;
        for (const auto& t : b.training) training.push_back(read_signal_csv(t));
        CdfEstimateOptions o;
        o.seed = seed;
        energy = estimate_energy_cdf(L, training, o);
    }
    out.bank = build_bank(out.spec, L.lambda_max_bound, cdf ? &*cdf : nullptr, energy ? &*energy : nullptr);
    return out;
}

Dictionary make_dictionary(const Laplacian& L, const Built& built, const std::string& mode, CenterList centers) {
    if (mode == "exact") {
        auto eig = std::make_shared<const EigenDecomposition>(eigendecompose(L));
        return Dictionary::exact(L, std::move(eig), built.bank, std::move(centers));
    }
    if (mode == "poly") return Dictionary::poly(L, built.bank, built.spec.degree, built.spec.jackson, std::move(centers));
    throw Error("unknown mode '" + mode + "'");
}

Dictionary load_dictionary(const GraphOptions& g, const BankOptions& b, std::uint64_t seed) {
    const Laplacian L = load_laplacian(g, seed);
    const Built built = load_bank(b, L, seed);
    CenterList centers;
    if (!b.centers_file.empty()) centers = read_center_sets_csv(b.centers_file, built.bank.size()).centers;
    return make_dictionary(L, built, b.mode, std::move(centers));
}

Signal gaussian_noise(Eigen::Index n, double sigma, std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{seed, stream};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, sigma);
    Signal xi(n);
    for (Eigen::Index i = 0; i < n; ++i) xi[i] = normal(rng);
    return xi;
}

double stddev(const Signal& f) {
    const double mean = f.mean();
    return std::sqrt((f.array() - mean).square().sum() / static_cast<double>(f.size()));
}

std::vector<std::size_t> parse_counts(const std::string& s) {
    std::vector<std::size_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(static_cast<std::size_t>(std::stoul(item)));
    return out;
}

json bounds_json(const FrameBounds& fb) {
    return {{"A", fb.A}, {"B", fb.B}, {"basis", fb.basis == BoundsBasis::exact_sigma ? "exact_sigma" : "grid"},
            {"heuristic", fb.heuristic}};
}

CenterSets choose_centers(const std::string& how, const Laplacian& L, const FilterBank& bank, const BankSpec& spec,
                          const Signal* signal, std::size_t total, std::vector<std::size_t> counts,
                          const SpectralCDF& cdf, std::size_t probes, std::uint64_t seed) {
    const std::size_t n = L.size();
    if (counts.empty()) counts = allocate_samples(cdf, bank, total == 0 ? n : total);
    if (counts.size() != bank.size()) throw Error("need one count per band");
    SamplingWeights w;
    if (how == "uniform") {
        w = uniform_weights(n, bank.size());
    } else {
        const auto polys = bank.approximate(spec.degree, spec.jackson);
        w = nonuniform_weights(L, polys, probes, seed);
        if (how == "signal") {
            if (!signal) throw Error("signal-adapted sampling needs a signal");
            w = signal_adapted_weights(w, apply_poly_filters(polys, L, *signal));
        } else if (how != "nonuniform") {
            throw Error("unknown sampling weights '" + how + "'");
        }
    }
    for (std::size_t j = 0; j < counts.size(); ++j) counts[j] = std::min(counts[j], n);
    return draw_centers(w, counts, false, seed);
}

int cmd_generate(const std::string& kind, std::size_t n, std::size_t k, double p, std::uint64_t seed,
                 const std::string& out, const std::string& signal_out, const std::string& signal_kind) {
    const auto g = generate_graph(kind, n, k, p, seed);
    write_matrix_market(out, g.graph);
    if (!signal_out.empty()) {
        if (signal_kind == "smooth") {
            write_signal_csv(signal_out, piecewise_smooth_signal(g));
        } else if (signal_kind == "constant") {
            write_signal_csv(signal_out, piecewise_constant_signal(g));
        } else {
            throw Error("unknown signal kind '" + signal_kind + "'");
        }
    }
    std::cout << json{{"vertices", g.graph.size()}, {"edges", g.graph.num_edges()}, {"connected", g.graph.connected()}}.dump()
              << '\n';
    return 0;
}

json run_pipeline(const RunConfig& c) {
    namespace fs = std::filesystem;
    fs::create_directories(c.output);
    const fs::path out(c.output);

    GeneratedGraph gen;
    if (c.graph.empty()) {
        gen = generate_graph(c.generate, c.n, c.k, c.p, c.seed);
    } else {
        gen.graph = read_graph(c.graph);
    }
    const Laplacian L = make_laplacian(gen.graph, c.laplacian, c.bound, c.lanczos_steps, c.seed);
    write_matrix_market((out / "graph.mtx").string(), gen.graph);

    Signal f;
    if (!c.signal.empty()) {
        f = read_signal_csv(c.signal);
    } else if (c.graph.empty()) {
        f = piecewise_smooth_signal(gen);
    } else {
        throw Error("config needs 'signal' when the graph is read from a file");
    }
    check_signal(L, f);
    if (c.mean_normalize) f.array() -= f.mean();
    write_signal_csv((out / "signal.csv").string(), f);

    std::shared_ptr<const EigenDecomposition> eig;
    if (c.mode == "exact" || c.exact_cdf) eig = std::make_shared<const EigenDecomposition>(eigendecompose(L));
    CdfEstimateOptions co{c.cdf_probes, c.cdf_degree, c.cdf_grid, c.seed};
    const SpectralCDF cdf = c.exact_cdf ? exact_spectral_cdf(*eig, L.lambda_max_bound) : estimate_spectral_cdf(L, co);
    write_cdf_csv((out / "cdf.csv").string(), cdf);

    std::optional<SpectralCDF> energy;
    if (c.bank.warp == "energy") {
        const std::vector<Signal> training{f};
        energy = c.exact_cdf ? exact_energy_cdf(*eig, training, L.lambda_max_bound) : estimate_energy_cdf(L, training, co);
    }
    const FilterBank bank = build_bank(c.bank, L.lambda_max_bound, &cdf, energy ? &*energy : nullptr);
    write_bank_csv((out / "bank.csv").string(), bank);

    CenterList centers;
    if (c.sampling != "complete") {
        const auto sets = choose_centers(c.sampling, L, bank, c.bank, &f, c.total, {}, cdf, c.weight_probes, c.seed);
        write_center_sets_csv((out / "centers.csv").string(), sets);
        centers = sets.centers;
    }
    const Dictionary d = c.mode == "exact" ? Dictionary::exact(L, eig, bank, centers)
                                           : Dictionary::poly(L, bank, c.bank.degree, c.bank.jackson, centers);
    const FrameBounds fb = frame_bounds(d);

    json result = {{"vertices", gen.graph.size()},
                   {"edges", gen.graph.num_edges()},
                   {"lambda_bar", L.lambda_max_bound},
                   {"design", bank.design_name},
                   {"J", bank.size()},
                   {"mode", c.mode},
                   {"atoms", d.num_atoms()},
                   {"frame_bounds", bounds_json(fb)},
                   {"task", c.task},
                   {"seed", c.seed}};

    if (c.task == "denoise") {
        const double sigma = c.noise_ratio * stddev(f);
        if (!(sigma > 0.0)) throw Error("signal is constant; noise level would be 0");
        DenoiseConfig dc;
        dc.sigma = sigma;
        dc.inverse = parse_inverse(c.inverse);
        dc.iterations = c.iterations;
        dc.seed = c.seed;
        std::ofstream trials(out / "denoise_trials.csv");
        trials << "trial,delta_snr_db,nmse\n";
        double snr_sum = 0.0, nmse_sum = 0.0;
        json thresholds;
        for (std::size_t t = 0; t < c.noise_seeds; ++t) {
            const Signal xi = gaussian_noise(f.size(), sigma, c.seed, t);
            const auto res = denoise(d, f + xi, dc);
            const Metrics m = metrics(f, res.f, &xi);
            trials << t << ',' << *m.delta_snr_db << ',' << m.nmse << '\n';
            snr_sum += *m.delta_snr_db;
            nmse_sum += m.nmse;
            if (t == 0) thresholds = res.thresholds;
        }
        const double trials_n = static_cast<double>(c.noise_seeds);
        result["sigma"] = sigma;
        result["delta_snr_db"] = snr_sum / trials_n;
        result["nmse"] = nmse_sum / trials_n;
        result["thresholds"] = thresholds;
    } else if (c.task == "compress") {
        auto t0 = c.t0;
        std::sort(t0.begin(), t0.end());
        t0.erase(std::unique(t0.begin(), t0.end()), t0.end());
        std::ofstream curve(out / "compress_curve.csv");
        curve << "T0,nmse\n";
        json rows = json::array();
        if (c.compress_method == "omp") {
            const std::size_t top = std::min(t0.back(), d.num_atoms());
            const auto res = compress_omp(d, f, top);
            const double ref = f.squaredNorm();
            for (std::size_t T : t0) {
                const std::size_t used = std::min(T, res.residual_norms.size());
                const double r = used == 0 ? std::sqrt(ref) : res.residual_norms[used - 1];
                const double nmse = r * r / ref;
                curve << T << ',' << nmse << '\n';
                rows.push_back({{"T0", T}, {"nmse", nmse}});
            }
        } else {
            const auto norms = atom_norms(d, c.weight_probes, c.seed);
            for (std::size_t T : t0) {
                const Signal rec = compress_hard_threshold(d, f, T, parse_inverse(c.inverse), &norms);
                const double nmse = metrics(f, rec).nmse;
                curve << T << ',' << nmse << '\n';
                rows.push_back({{"T0", T}, {"nmse", nmse}});
            }
        }
        result["compress_method"] = c.compress_method;
        result["curve"] = rows;
    }
    std::ofstream(out / "metrics.json") << result.dump(2) << '\n';
    return result;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Localized spectral graph filter frames"};
    app.require_subcommand(1);
    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "Random seed")->capture_default_str();

    // generate
    auto* gen = app.add_subcommand("generate", "Write a generated graph (Matrix Market) and optional test signal");
    std::string gen_kind = "sensor", gen_out = "graph.mtx", gen_signal, gen_signal_kind = "smooth";
    std::size_t gen_n = 100, gen_k = 6;
    double gen_p = 0.2;
    gen->add_option("--kind", gen_kind, "path|cycle|star|complete|grid|gnp|sensor|two_clusters|cliques");
    gen->add_option("--n", gen_n, "Vertex count");
    gen->add_option("--k", gen_k, "Neighbours (sensor) or clique count");
    gen->add_option("--p", gen_p, "Edge probability (gnp)");
    gen->add_option("--out", gen_out, "Output Matrix Market file");
    gen->add_option("--signal", gen_signal, "Also write a test signal CSV");
    gen->add_option("--signal-kind", gen_signal_kind, "smooth | constant");
    gen->add_option("--seed", seed, "Random seed");

    // spectrum-cdf
    auto* cdf_cmd = app.add_subcommand("spectrum-cdf", "Estimate (or compute) the spectral CDF");
    GraphOptions cdf_graph;
    CdfEstimateOptions cdf_opts;
    bool cdf_exact = false;
    std::size_t cdf_points = 200;
    std::string cdf_out = "cdf.csv";
    add_graph_options(cdf_cmd, cdf_graph);
    cdf_cmd->add_option("--probes", cdf_opts.n_probes, "Hutchinson probes");
    cdf_cmd->add_option("--degree", cdf_opts.kpm_degree, "Chebyshev degree");
    cdf_cmd->add_option("--grid", cdf_opts.n_grid, "Estimator grid points");
    cdf_cmd->add_flag("--exact", cdf_exact, "Use a full eigendecomposition");
    cdf_cmd->add_option("--points", cdf_points, "Rows in the output CSV");
    cdf_cmd->add_option("--out", cdf_out, "Output CSV (z,P)");
    cdf_cmd->add_option("--seed", seed, "Random seed");

    // design
    auto* design = app.add_subcommand("design", "Build a filter bank and export its kernels");
    GraphOptions design_graph;
    BankOptions design_bank;
    std::string design_out = "bank.csv";
    std::size_t design_points = 500;
    add_graph_options(design, design_graph);
    add_bank_options(design, design_bank);
    design->add_option("--out", design_out, "Output CSV (lambda, g_j..., G)");
    design->add_option("--points", design_points, "Rows in the output CSV");
    design->add_option("--seed", seed, "Random seed");

    // sample
    auto* sample = app.add_subcommand("sample", "Select center vertices per band");
    GraphOptions sample_graph;
    BankOptions sample_bank;
    std::string sample_weights = "nonuniform", sample_signal, sample_counts, sample_out = "centers.csv";
    std::size_t sample_total = 0, sample_probes = 100;
    add_graph_options(sample, sample_graph);
    add_bank_options(sample, sample_bank);
    sample->add_option("--weights", sample_weights, "uniform | nonuniform | signal");
    sample->add_option("--signal", sample_signal, "Signal CSV (signal-adapted weights)");
    sample->add_option("--total", sample_total, "Total budget split across bands (default N)");
    sample->add_option("--counts", sample_counts, "Comma-separated per-band counts");
    sample->add_option("--probes", sample_probes, "Probes for nonuniform weights");
    sample->add_option("--out", sample_out, "Output CSV (band,vertex,weight)");
    sample->add_option("--seed", seed, "Random seed");

    // transform
    auto* transform = app.add_subcommand("transform", "Analysis coefficients of a signal");
    GraphOptions tr_graph;
    BankOptions tr_bank;
    std::string tr_signal, tr_out = "coeffs.bin", tr_csv;
    add_graph_options(transform, tr_graph);
    add_dictionary_options(transform, tr_bank);
    transform->add_option("--signal", tr_signal, "Signal CSV")->required();
    transform->add_option("--out", tr_out, "Binary coefficients file");
    transform->add_option("--csv", tr_csv, "Also write coefficients as CSV");
    transform->add_option("--seed", seed, "Random seed");

    // inverse
    auto* inverse = app.add_subcommand("inverse", "Reconstruct a signal from coefficients");
    GraphOptions inv_graph;
    BankOptions inv_bank;
    std::string inv_coeffs, inv_method = "cg", inv_out = "reconstruction.csv";
    std::size_t inv_iterations = 10;
    add_graph_options(inverse, inv_graph);
    add_dictionary_options(inverse, inv_bank);
    inverse->add_option("--coeffs", inv_coeffs, "Binary coefficients file")->required();
    inverse->add_option("--method", inv_method, "cg | frame_iter | single_pass");
    inverse->add_option("--iterations", inv_iterations, "Frame-algorithm iterations");
    inverse->add_option("--out", inv_out, "Output signal CSV");
    inverse->add_option("--seed", seed, "Random seed");

    // denoise
    auto* den = app.add_subcommand("denoise", "Add Gaussian noise to a clean signal and denoise it");
    GraphOptions den_graph;
    BankOptions den_bank;
    std::string den_signal, den_out = "denoised.csv", den_method = "cg";
    double den_sigma = 0.0, den_ratio = 0.25;
    add_graph_options(den, den_graph);
    add_dictionary_options(den, den_bank);
    den->add_option("--signal", den_signal, "Clean signal CSV")->required();
    den->add_option("--sigma", den_sigma, "Noise standard deviation (overrides --noise-ratio)");
    den->add_option("--noise-ratio", den_ratio, "Noise standard deviation relative to the signal's");
    den->add_option("--inverse", den_method, "cg | frame_iter | single_pass");
    den->add_option("--out", den_out, "Denoised signal CSV");
    den->add_option("--seed", seed, "Random seed");

    // compress
    auto* comp = app.add_subcommand("compress", "Sparse approximation error versus T0");
    GraphOptions comp_graph;
    BankOptions comp_bank;
    std::string comp_signal, comp_method = "omp", comp_out = "compress_curve.csv", comp_inverse = "cg";
    std::vector<std::size_t> comp_t0{10, 20, 50};
    add_graph_options(comp, comp_graph);
    add_dictionary_options(comp, comp_bank);
    comp->add_option("--signal", comp_signal, "Signal CSV")->required();
    comp->add_option("--t0", comp_t0, "Sparsity levels")->delimiter(',');
    comp->add_option("--method", comp_method, "omp | hard");
    comp->add_option("--inverse", comp_inverse, "Inverse for hard thresholding");
    comp->add_option("--out", comp_out, "Output CSV (T0,nmse)");
    comp->add_option("--seed", seed, "Random seed");

    // pipeline
    auto* pipe = app.add_subcommand("pipeline", "Run spectrum -> design -> sampling -> task from a config file");
    std::string pipe_config, pipe_out;
    std::vector<std::string> pipe_set;
    pipe->add_option("--config", pipe_config, "Config file (key = value)");
    pipe->add_option("--set", pipe_set, "key=value override (repeatable)");
    pipe->add_option("--out", pipe_out, "Output directory (overrides 'output')");
    pipe->add_option("--seed", seed, "Random seed (overrides 'seed')");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) return cmd_generate(gen_kind, gen_n, gen_k, gen_p, seed, gen_out, gen_signal, gen_signal_kind);

        if (*cdf_cmd) {
            const Laplacian L = load_laplacian(cdf_graph, seed);
            cdf_opts.seed = seed;
            const SpectralCDF cdf = cdf_exact ? exact_spectral_cdf(eigendecompose(L), L.lambda_max_bound)
                                              : estimate_spectral_cdf(L, cdf_opts);
            write_cdf_csv(cdf_out, cdf, cdf_points);
            std::cout << json{{"lambda_bar", L.lambda_max_bound}, {"exact", cdf_exact}, {"out", cdf_out}}.dump() << '\n';
            return 0;
        }

        if (*design) {
            const Laplacian L = load_laplacian(design_graph, seed);
            const Built built = load_bank(design_bank, L, seed);
            write_bank_csv(design_out, built.bank, design_points);
            const auto G = evaluate_G(built.bank, uniform_grid(built.bank.lambda_bar, 1000));
            const auto polys = built.bank.approximate(built.spec.degree, built.spec.jackson);
            const auto Gp = evaluate_G(polys, uniform_grid(built.bank.lambda_bar, 1000));
            std::cout << json{{"design", built.bank.design_name},
                              {"J", built.bank.size()},
                              {"lambda_bar", built.bank.lambda_bar},
                              {"G_min", *std::min_element(G.begin(), G.end())},
                              {"G_max", *std::max_element(G.begin(), G.end())},
                              {"poly_degree", built.spec.degree},
                              {"poly_G_min", *std::min_element(Gp.begin(), Gp.end())},
                              {"poly_G_max", *std::max_element(Gp.begin(), Gp.end())}}
                             .dump()
                      << '\n';
            return 0;
        }

        if (*sample) {
            const Laplacian L = load_laplacian(sample_graph, seed);
            const Built built = load_bank(sample_bank, L, seed);
            CdfEstimateOptions o;
            o.seed = seed;
            const SpectralCDF cdf = estimate_spectral_cdf(L, o);
            Signal f;
            if (!sample_signal.empty()) f = read_signal_csv(sample_signal);
            const auto sets = choose_centers(sample_weights, L, built.bank, built.spec, sample_signal.empty() ? nullptr : &f,
                                             sample_total, sample_counts.empty() ? std::vector<std::size_t>{} : parse_counts(sample_counts),
                                             cdf, sample_probes, seed);
            write_center_sets_csv(sample_out, sets);
            json counts = json::array();
            for (const auto& s : sets.centers) counts.push_back(s.size());
            std::cout << json{{"counts", counts}, {"out", sample_out}}.dump() << '\n';
            return 0;
        }

        if (*transform) {
            const Dictionary d = load_dictionary(tr_graph, tr_bank, seed);
            const Coefficients c = analysis(d, read_signal_csv(tr_signal));
            write_coefficients(tr_out, c);
            if (!tr_csv.empty()) write_coefficients_csv(tr_csv, c);
            std::cout << json{{"atoms", c.total()}, {"energy", c.squared_norm()}, {"out", tr_out}}.dump() << '\n';
            return 0;
        }

        if (*inverse) {
            const Dictionary d = load_dictionary(inv_graph, inv_bank, seed);
            const Coefficients c = d.rebind(read_coefficients(inv_coeffs));
            const Signal f = invert(d, c, parse_inverse(inv_method), inv_iterations);
            write_signal_csv(inv_out, f);
            std::cout << json{{"method", inv_method}, {"out", inv_out}}.dump() << '\n';
            return 0;
        }

        if (*den) {
            const Dictionary d = load_dictionary(den_graph, den_bank, seed);
            const Signal f = read_signal_csv(den_signal);
            check_signal(d.laplacian(), f);
            const double sigma = den_sigma > 0.0 ? den_sigma : den_ratio * stddev(f);
            if (!(sigma > 0.0)) throw Error("noise level is 0");
            const Signal xi = gaussian_noise(f.size(), sigma, seed, 0);
            DenoiseConfig dc;
            dc.sigma = sigma;
            dc.inverse = parse_inverse(den_method);
            dc.seed = seed;
            const auto res = denoise(d, f + xi, dc);
            write_signal_csv(den_out, res.f);
            const Metrics m = metrics(f, res.f, &xi);
            std::cout << json{{"sigma", sigma}, {"delta_snr_db", *m.delta_snr_db}, {"nmse", m.nmse},
                              {"thresholds", res.thresholds}, {"out", den_out}}
                             .dump()
                      << '\n';
            return 0;
        }

        if (*comp) {
            const Dictionary d = load_dictionary(comp_graph, comp_bank, seed);
            const Signal f = read_signal_csv(comp_signal);
            std::sort(comp_t0.begin(), comp_t0.end());
            comp_t0.erase(std::unique(comp_t0.begin(), comp_t0.end()), comp_t0.end());
            std::ofstream curve(comp_out);
            curve << "T0,nmse\n";
            json rows = json::array();
            std::vector<Signal> norms;
            std::optional<CompressResult> greedy;
            if (comp_method == "hard") {
                norms = atom_norms(d, 100, seed);
            } else if (comp_method == "omp") {
                greedy = compress_omp(d, f, std::min(comp_t0.back(), d.num_atoms()));
            } else {
                throw Error("unknown compression method '" + comp_method + "'");
            }
            for (std::size_t T : comp_t0) {
                double nmse = 0.0;
                if (greedy) {
                    const std::size_t used = std::min(T, greedy->residual_norms.size());
                    const double r = used == 0 ? f.norm() : greedy->residual_norms[used - 1];
                    nmse = r * r / f.squaredNorm();
                } else {
                    nmse = metrics(f, compress_hard_threshold(d, f, T, parse_inverse(comp_inverse), &norms)).nmse;
                }
                curve << T << ',' << nmse << '\n';
                rows.push_back({{"T0", T}, {"nmse", nmse}});
            }
            std::cout << json{{"method", comp_method}, {"curve", rows}, {"out", comp_out}}.dump() << '\n';
            return 0;
        }

        if (*pipe) {
            KeyValues kv = pipe_config.empty() ? KeyValues{} : read_key_values(pipe_config);
            for (const auto& s : pipe_set) apply_override(kv, s);
            if (!pipe_out.empty()) kv["output"] = pipe_out;
            if (pipe->count("--seed") > 0) kv["seed"] = std::to_string(seed);
            const RunConfig cfg = parse_run_config(kv);
            std::cout << run_pipeline(cfg).dump() << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << json{{"error", e.what()}}.dump() << '\n';
        return 1;
    }
    return 0;
}
