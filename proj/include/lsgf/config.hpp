#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "lsgf/filter_bank.hpp"

namespace lsgf {

using KeyValues = std::map<std::string, std::string>;

/// `key = value` lines; '#' starts a comment. Duplicate keys are an error.
KeyValues read_key_values(std::istream& is);
KeyValues read_key_values(const std::string& path);

/// Parses "key=value" and stores it, replacing any earlier value.
void apply_override(KeyValues& kv, const std::string& assignment);

struct BankSpec {
    std::string design = "itersine"; // ideal | hann | itersine | meyer | dct | sgwt
    std::size_t J = 6;
    std::string spacing = "uniform"; // ideal banks only
    std::string warp = "none";       // none | log | spectrum | spectrum-log | energy
    double nu = 10.0;
    double edge_shift = 0.0; // ideal banks: window (fraction of lambda_bar) for moving edges to low density
    std::size_t degree = 40;
    bool jackson = false;
};

BankSpec parse_bank_spec(const KeyValues& kv);

/// `cdf` is needed for the spectrum warps (and CDF-placed ideal edges), `energy_cdf` for "energy".
FilterBank build_bank(const BankSpec& spec, double lambda_bar, const SpectralCDF* cdf = nullptr,
                      const SpectralCDF* energy_cdf = nullptr);

struct RunConfig {
    std::string graph; // empty: generate
    std::string generate = "sensor";
    std::size_t n = 300;
    std::size_t k = 6;
    double p = 0.2;
    std::string laplacian = "combinatorial";
    std::string bound = "anderson"; // anderson | lanczos
    std::size_t lanczos_steps = 30;
    std::string signal; // empty: piecewise-smooth test signal
    bool mean_normalize = true;

    std::size_t cdf_probes = 10;
    std::size_t cdf_degree = 30;
    std::size_t cdf_grid = 50;
    bool exact_cdf = false;

    BankSpec bank;
    std::string mode = "exact"; // exact | poly

    std::string sampling = "complete"; // complete | uniform | nonuniform | signal
    std::size_t total = 0;             // 0: N samples (critical)
    std::size_t weight_probes = 100;

    std::string task = "denoise"; // denoise | compress | none
    double noise_ratio = 0.25;    // sigma / std(f)
    std::size_t noise_seeds = 1;
    std::string inverse = "cg";
    std::size_t iterations = 10;
    std::vector<std::size_t> t0 = {10, 20, 50};
    std::string compress_method = "omp"; // omp | hard

    std::uint64_t seed = 0;
    std::string output = "out";
};

/// Rejects unknown keys and malformed values.
RunConfig parse_run_config(const KeyValues& kv);

LaplacianKind parse_laplacian_kind(const std::string& s);

} // namespace lsgf
