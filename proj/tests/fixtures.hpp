#pragma once

#include <string>
#include <vector>

#include "lsgf/generators.hpp"

namespace fixtures {

struct NamedGraph {
    std::string name;
    lsgf::GeneratedGraph g;
};

/// Small connected graphs of assorted structure, all with N <= 300.
inline std::vector<NamedGraph> small_graphs() {
    std::vector<NamedGraph> out;
    out.push_back({"path40", lsgf::make_path(40)});
    out.push_back({"grid8x9", lsgf::make_grid(8, 9)});
    out.push_back({"sensor120", lsgf::make_sensor(120, 6, 11)});
    out.push_back({"gnp60", lsgf::make_erdos_renyi(60, 0.15, 5)});
    out.push_back({"cliques", lsgf::make_clique_ring({6, 8, 10, 12}, 0.1)});
    out.push_back({"sensor300", lsgf::make_sensor(300, 6, 3)});
    return out;
}

} // namespace fixtures
