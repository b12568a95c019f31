#include "lsgf/config.hpp"

#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace lsgf {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != v.size()) throw Error("config key '" + key + "': expected a number, got '" + v + "'");
    return out;
}

std::size_t to_count(const std::string& key, const std::string& v) {
    const double d = to_double(key, v);
    if (d < 0 || d != static_cast<double>(static_cast<std::size_t>(d))) {
        throw Error("config key '" + key + "': expected a nonnegative integer, got '" + v + "'");
    }
    return static_cast<std::size_t>(d);
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw Error("config key '" + key + "': expected true/false, got '" + v + "'");
}

std::string one_of(const std::string& key, const std::string& v, std::initializer_list<const char*> allowed) {
    for (const char* a : allowed)
        if (v == a) return v;
    std::string msg = "config key '" + key + "': '" + v + "' is not one of";
    for (const char* a : allowed) msg += std::string(" ") + a;
    throw Error(msg);
}

using Setter = std::function<void(const std::string&)>;

void apply_setters(const KeyValues& kv, const std::map<std::string, Setter>& setters) {
    for (const auto& [key, value] : kv) {
        const auto it = setters.find(key);
        if (it == setters.end()) throw Error("unknown config key '" + key + "'");
        it->second(value);
    }
}

std::map<std::string, Setter> bank_setters(BankSpec& b) {
    return {
        {"design", [&](const std::string& v) { b.design = one_of("design", v, {"ideal", "hann", "itersine", "meyer", "dct", "sgwt"}); }},
        {"J", [&](const std::string& v) { b.J = to_count("J", v); }},
        {"spacing", [&](const std::string& v) { b.spacing = one_of("spacing", v, {"uniform", "octave"}); }},
        {"warp", [&](const std::string& v) { b.warp = one_of("warp", v, {"none", "log", "spectrum", "spectrum-log", "energy"}); }},
        {"nu", [&](const std::string& v) { b.nu = to_double("nu", v); }},
        {"edge_shift", [&](const std::string& v) { b.edge_shift = to_double("edge_shift", v); }},
        {"degree", [&](const std::string& v) { b.degree = to_count("degree", v); }},
        {"jackson", [&](const std::string& v) { b.jackson = to_bool("jackson", v); }},
    };
}

} // namespace

KeyValues read_key_values(std::istream& is) {
    KeyValues kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw Error("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw Error("config line " + std::to_string(lineno) + ": empty key");
        if (!kv.emplace(key, trim(line.substr(eq + 1))).second) throw Error("duplicate config key '" + key + "'");
    }
    return kv;
}

KeyValues read_key_values(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open config '" + path + "'");
    return read_key_values(is);
}

void apply_override(KeyValues& kv, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw Error("override '" + assignment + "' is not key=value");
    kv[trim(assignment.substr(0, eq))] = trim(assignment.substr(eq + 1));
}

BankSpec parse_bank_spec(const KeyValues& kv) {
    BankSpec b;
    apply_setters(kv, bank_setters(b));
    return b;
}

FilterBank build_bank(const BankSpec& spec, double lambda_bar, const SpectralCDF* cdf, const SpectralCDF* energy_cdf) {
    const bool spectrum_warp = spec.warp == "spectrum" || spec.warp == "spectrum-log";
    if (spectrum_warp && !cdf) throw Error("warp '" + spec.warp + "' needs a spectral CDF");
    if (spec.warp == "energy" && !energy_cdf) throw Error("warp 'energy' needs an energy CDF");

    if (spec.design == "ideal") {
        const auto spacing = parse_spacing(spec.spacing);
        std::vector<double> edges;
        if (spec.warp == "spectrum") {
            edges = ideal_band_edges(lambda_bar, spec.J, spacing, cdf);
        } else if (spec.warp == "energy") {
            edges = ideal_band_edges(lambda_bar, spec.J, spacing, energy_cdf);
        } else if (spec.warp == "none") {
            edges = ideal_band_edges(lambda_bar, spec.J, spacing);
        } else {
            auto base = make_ideal_partition(lambda_bar, spec.J, spacing);
            return spec.warp == "log" ? make_log_warped(base, spec.nu) : make_spectrum_adapted(base, *cdf, true, spec.nu);
        }
        if (spec.edge_shift > 0.0) {
            const SpectralCDF* density = spec.warp == "energy" ? energy_cdf : cdf;
            if (!density) throw Error("edge_shift needs a spectral CDF");
            edges = shift_edges_to_low_density(edges, *density, spec.edge_shift);
        }
        auto bank = make_ideal_partition_from_edges(lambda_bar, edges);
        bank.design_name = (spec.warp == "none" ? "" : spec.warp + "-adapted ") + spec.spacing + " ideal" +
                           (spec.edge_shift > 0.0 ? " (shifted)" : "");
        return bank;
    }

    FilterBank base = spec.design == "sgwt" ? make_sgwt(lambda_bar, spec.J)
                                            : make_uniform_translates(lambda_bar, spec.J, parse_prototype(spec.design));
    if (spec.warp == "log") return make_log_warped(base, spec.nu);
    if (spec.warp == "spectrum") return make_spectrum_adapted(base, *cdf, false);
    if (spec.warp == "spectrum-log") return make_spectrum_adapted(base, *cdf, true, spec.nu);
    if (spec.warp == "energy") return make_signal_adapted(base, *energy_cdf);
    return base;
}

RunConfig parse_run_config(const KeyValues& kv) {
    RunConfig c;
    auto setters = bank_setters(c.bank);
    const std::map<std::string, Setter> own = {
        {"graph", [&](const std::string& v) { c.graph = v; }},
        {"generate", [&](const std::string& v) { c.generate = v; }},
        {"n", [&](const std::string& v) { c.n = to_count("n", v); }},
        {"k", [&](const std::string& v) { c.k = to_count("k", v); }},
        {"p", [&](const std::string& v) { c.p = to_double("p", v); }},
        {"laplacian", [&](const std::string& v) { c.laplacian = one_of("laplacian", v, {"combinatorial", "normalized"}); }},
        {"bound", [&](const std::string& v) { c.bound = one_of("bound", v, {"anderson", "lanczos"}); }},
        {"lanczos_steps", [&](const std::string& v) { c.lanczos_steps = to_count("lanczos_steps", v); }},
        {"signal", [&](const std::string& v) { c.signal = v; }},
        {"mean_normalize", [&](const std::string& v) { c.mean_normalize = to_bool("mean_normalize", v); }},
        {"cdf_probes", [&](const std::string& v) { c.cdf_probes = to_count("cdf_probes", v); }},
        {"cdf_degree", [&](const std::string& v) { c.cdf_degree = to_count("cdf_degree", v); }},
        {"cdf_grid", [&](const std::string& v) { c.cdf_grid = to_count("cdf_grid", v); }},
        {"exact_cdf", [&](const std::string& v) { c.exact_cdf = to_bool("exact_cdf", v); }},
        {"mode", [&](const std::string& v) { c.mode = one_of("mode", v, {"exact", "poly"}); }},
        {"sampling", [&](const std::string& v) { c.sampling = one_of("sampling", v, {"complete", "uniform", "nonuniform", "signal"}); }},
        {"total", [&](const std::string& v) { c.total = to_count("total", v); }},
        {"weight_probes", [&](const std::string& v) { c.weight_probes = to_count("weight_probes", v); }},
        {"task", [&](const std::string& v) { c.task = one_of("task", v, {"denoise", "compress", "none"}); }},
        {"noise_ratio", [&](const std::string& v) { c.noise_ratio = to_double("noise_ratio", v); }},
        {"noise_seeds", [&](const std::string& v) { c.noise_seeds = to_count("noise_seeds", v); }},
        {"inverse", [&](const std::string& v) { c.inverse = one_of("inverse", v, {"cg", "frame_iter", "single_pass"}); }},
        {"iterations", [&](const std::string& v) { c.iterations = to_count("iterations", v); }},
        {"t0", [&](const std::string& v) {
             c.t0.clear();
             std::stringstream ss(v);
             std::string item;
             while (std::getline(ss, item, ',')) c.t0.push_back(to_count("t0", trim(item)));
             if (c.t0.empty()) throw Error("config key 't0': empty list");
         }},
        {"compress_method", [&](const std::string& v) { c.compress_method = one_of("compress_method", v, {"omp", "hard"}); }},
        {"seed", [&](const std::string& v) { c.seed = to_count("seed", v); }},
        {"output", [&](const std::string& v) { c.output = v; }},
    };
    setters.insert(own.begin(), own.end());
    apply_setters(kv, setters);
    if (c.noise_seeds == 0) throw Error("noise_seeds must be at least 1");
    return c;
}

LaplacianKind parse_laplacian_kind(const std::string& s) {
    if (s == "combinatorial") return LaplacianKind::combinatorial;
    if (s == "normalized") return LaplacianKind::normalized;
    throw Error("unknown Laplacian kind '" + s + "'");
}

} // namespace lsgf
