#include "lsgf/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace lsgf {

namespace {

std::ifstream open_in(const std::string& path, bool binary = false) {
    std::ifstream is(path, binary ? std::ios::binary : std::ios::in);
    if (!is) throw Error("cannot open '" + path + "' for reading");
    return is;
}

std::ofstream open_out(const std::string& path, bool binary = false) {
    std::ofstream os(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
    if (!os) throw Error("cannot open '" + path + "' for writing");
    return os;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    return out;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t\r") == std::string::npos; }

// Reads numeric CSV rows with exactly `cols` columns, skipping one optional header line.
std::vector<std::vector<double>> read_numeric_rows(std::istream& is, std::size_t cols, const std::string& what) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (blank(line)) continue;
        const auto cells = split_csv(line);
        std::vector<double> row(cells.size());
        bool numeric = cells.size() == cols;
        for (std::size_t k = 0; numeric && k < cells.size(); ++k) numeric = parse_double(cells[k], row[k]);
        if (!numeric) {
            if (rows.empty() && lineno == 1) continue; // header
            throw Error(what + ": malformed line " + std::to_string(lineno));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

template <typename T>
void put(std::ostream& os, T v) {
    std::array<unsigned char, sizeof(T)> bytes{};
    std::memcpy(bytes.data(), &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    os.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
    std::array<unsigned char, sizeof(T)> bytes{};
    if (!is.read(reinterpret_cast<char*>(bytes.data()), sizeof(T))) throw Error("truncated coefficients file");
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    T v;
    std::memcpy(&v, bytes.data(), sizeof(T));
    return v;
}

} // namespace

void write_matrix_market(std::ostream& os, const SparseGraph& g) {
    const auto edges = g.edges();
    os << "%%MatrixMarket matrix coordinate real symmetric\n";
    os << g.size() << ' ' << g.size() << ' ' << edges.size() << '\n';
    for (const auto& e : edges) os << e.dst + 1 << ' ' << e.src + 1 << ' ' << fmt(e.weight) << '\n';
}

void write_matrix_market(const std::string& path, const SparseGraph& g) {
    auto os = open_out(path);
    write_matrix_market(os, g);
}

SparseGraph read_matrix_market(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("%%MatrixMarket", 0) != 0) throw Error("missing Matrix Market banner");
    std::string lower = line;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower.find("coordinate") == std::string::npos) throw Error("only coordinate Matrix Market files are supported");
    if (lower.find("complex") != std::string::npos) throw Error("complex Matrix Market files are not supported");
    const bool pattern = lower.find("pattern") != std::string::npos;
    const bool general = lower.find("symmetric") == std::string::npos;
    do {
        if (!std::getline(is, line)) throw Error("missing Matrix Market size line");
    } while (line.empty() || line[0] == '%');
    std::size_t rows = 0, cols = 0, nnz = 0;
    if (!(std::istringstream(line) >> rows >> cols >> nnz)) throw Error("malformed Matrix Market size line");
    if (rows != cols) throw Error("adjacency matrix must be square");
    std::vector<Edge> edges;
    edges.reserve(nnz);
    for (std::size_t k = 0; k < nnz;) {
        if (!std::getline(is, line)) throw Error("Matrix Market file ends early");
        if (line.empty() || line[0] == '%') continue;
        std::istringstream ls(line);
        long long i = 0, j = 0;
        double w = 1.0;
        if (!(ls >> i >> j) || (!pattern && !(ls >> w))) throw Error("malformed Matrix Market entry");
        if (i < 1 || j < 1 || static_cast<std::size_t>(i) > rows || static_cast<std::size_t>(j) > rows) {
            throw Error("Matrix Market index out of range");
        }
        edges.push_back({static_cast<Vertex>(i - 1), static_cast<Vertex>(j - 1), w});
        ++k;
    }
    if (general) {
        // every off-diagonal entry of a general file needs its transpose with the same weight
        std::map<std::pair<Vertex, Vertex>, double> stored;
        for (const auto& e : edges) stored[{e.src, e.dst}] = e.weight;
        for (const auto& e : edges) {
            const auto it = stored.find({e.dst, e.src});
            if (it == stored.end() || it->second != e.weight) throw Error("adjacency is not symmetric");
        }
    }
    return SparseGraph::from_edges(rows, edges);
}

SparseGraph read_matrix_market(const std::string& path) {
    auto is = open_in(path);
    return read_matrix_market(is);
}

SparseGraph read_edge_list_csv(std::istream& is, std::size_t n_vertices) {
    std::vector<Edge> edges;
    std::size_t max_index = 0;
    for (const auto& row : read_numeric_rows(is, 3, "edge list")) {
        if (row[0] < 0 || row[1] < 0 || row[0] != std::floor(row[0]) || row[1] != std::floor(row[1])) {
            throw Error("edge list vertices must be nonnegative integers");
        }
        edges.push_back({static_cast<Vertex>(row[0]), static_cast<Vertex>(row[1]), row[2]});
        max_index = std::max({max_index, static_cast<std::size_t>(row[0]), static_cast<std::size_t>(row[1])});
    }
    if (n_vertices == 0) n_vertices = edges.empty() ? 0 : max_index + 1;
    return SparseGraph::from_edges(n_vertices, edges);
}

SparseGraph read_graph(const std::string& path) {
    auto ends_with = [&](const std::string& s) {
        return path.size() >= s.size() && path.compare(path.size() - s.size(), s.size(), s) == 0;
    };
    if (ends_with(".csv")) {
        auto is = open_in(path);
        return read_edge_list_csv(is);
    }
    return read_matrix_market(path);
}

void write_edge_list_csv(const std::string& path, const SparseGraph& g) {
    auto os = open_out(path);
    os << "src,dst,weight\n";
    for (const auto& e : g.edges()) os << e.src << ',' << e.dst << ',' << fmt(e.weight) << '\n';
}

void write_signal_csv(const std::string& path, const Signal& f) {
    auto os = open_out(path);
    os << "value\n";
    for (Eigen::Index i = 0; i < f.size(); ++i) os << fmt(f[i]) << '\n';
}

Signal read_signal_csv(std::istream& is) {
    const auto rows = read_numeric_rows(is, 1, "signal");
    Signal f(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) f[static_cast<Eigen::Index>(i)] = rows[i][0];
    return f;
}

Signal read_signal_csv(const std::string& path) {
    auto is = open_in(path);
    return read_signal_csv(is);
}

void write_cdf_csv(const std::string& path, const SpectralCDF& cdf, std::size_t n_points) {
    auto os = open_out(path);
    os << "z,P\n";
    for (double z : uniform_grid(cdf.lambda_bar(), n_points)) os << fmt(z) << ',' << fmt(cdf(z)) << '\n';
}

SpectralCDF read_cdf_csv(const std::string& path) {
    auto is = open_in(path);
    std::vector<double> grid, values;
    for (const auto& row : read_numeric_rows(is, 2, "CDF")) {
        grid.push_back(row[0]);
        values.push_back(row[1]);
    }
    return SpectralCDF::monotone_cubic(std::move(grid), std::move(values));
}

void write_center_sets_csv(const std::string& path, const CenterSets& sets) {
    auto os = open_out(path);
    os << "band,vertex,weight\n";
    for (std::size_t j = 0; j < sets.centers.size(); ++j) {
        for (std::size_t k = 0; k < sets.centers[j].size(); ++k) {
            os << j << ',' << sets.centers[j][k] << ',' << fmt(sets.weights[j][static_cast<Eigen::Index>(k)]) << '\n';
        }
    }
}

CenterSets read_center_sets_csv(const std::string& path, std::size_t J) {
    auto is = open_in(path);
    std::vector<std::vector<std::pair<Vertex, double>>> bands(J);
    for (const auto& row : read_numeric_rows(is, 3, "center sets")) {
        if (row[0] < 0 || static_cast<std::size_t>(row[0]) >= J) throw Error("center set band index out of range");
        bands[static_cast<std::size_t>(row[0])].emplace_back(static_cast<Vertex>(row[1]), row[2]);
    }
    CenterSets out;
    for (auto& b : bands) {
        std::sort(b.begin(), b.end());
        std::vector<Vertex> v;
        Signal w(static_cast<Eigen::Index>(b.size()));
        for (std::size_t k = 0; k < b.size(); ++k) {
            v.push_back(b[k].first);
            w[static_cast<Eigen::Index>(k)] = b[k].second;
        }
        out.centers.push_back(std::move(v));
        out.weights.push_back(std::move(w));
    }
    return out;
}

void write_coefficients(std::ostream& os, const Coefficients& c) {
    os.write("LSGF", 4);
    put<std::uint32_t>(os, 1);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(c.num_bands()));
    for (std::size_t j = 0; j < c.num_bands(); ++j) {
        put<std::uint32_t>(os, static_cast<std::uint32_t>(j));
        put<std::uint32_t>(os, static_cast<std::uint32_t>(c.centers[j].size()));
        for (Vertex v : c.centers[j]) put<std::uint32_t>(os, static_cast<std::uint32_t>(v));
        for (Eigen::Index k = 0; k < c.values[j].size(); ++k) put<double>(os, c.values[j][k]);
    }
    if (!os) throw Error("failed writing coefficients");
}

void write_coefficients(const std::string& path, const Coefficients& c) {
    auto os = open_out(path, true);
    write_coefficients(os, c);
}

Coefficients read_coefficients(std::istream& is) {
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "LSGF", 4) != 0) throw Error("not a coefficients file");
    const auto version = get<std::uint32_t>(is);
    if (version != 1) throw Error("unsupported coefficients file version " + std::to_string(version));
    const auto J = get<std::uint32_t>(is);
    Coefficients c;
    c.centers.resize(J);
    c.values.resize(J);
    for (std::uint32_t b = 0; b < J; ++b) {
        const auto id = get<std::uint32_t>(is);
        if (id >= J) throw Error("coefficients file has a bad band id");
        const auto count = get<std::uint32_t>(is);
        auto& centers = c.centers[id];
        centers.resize(count);
        for (auto& v : centers) v = static_cast<Vertex>(get<std::uint32_t>(is));
        c.values[id].resize(count);
        for (std::uint32_t k = 0; k < count; ++k) c.values[id][k] = get<double>(is);
    }
    return c;
}

Coefficients read_coefficients(const std::string& path) {
    auto is = open_in(path, true);
    return read_coefficients(is);
}

void write_coefficients_csv(const std::string& path, const Coefficients& c) {
    auto os = open_out(path);
    os << "band,vertex,value\n";
    for (std::size_t j = 0; j < c.num_bands(); ++j) {
        for (std::size_t k = 0; k < c.centers[j].size(); ++k) {
            os << j << ',' << c.centers[j][k] << ',' << fmt(c.values[j][static_cast<Eigen::Index>(k)]) << '\n';
        }
    }
}

void write_bank_csv(const std::string& path, const FilterBank& bank, std::size_t n_points) {
    auto os = open_out(path);
    os << "lambda";
    for (std::size_t j = 0; j < bank.size(); ++j) os << ",g" << j;
    os << ",G\n";
    for (double x : uniform_grid(bank.lambda_bar, n_points)) {
        os << fmt(x);
        double G = 0.0;
        for (const auto& k : bank.kernels) {
            const double v = k(x);
            G += v * v;
            os << ',' << fmt(v);
        }
        os << ',' << fmt(G) << '\n';
    }
}

} // namespace lsgf
