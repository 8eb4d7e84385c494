#pragma once

// JSON persistence for dual graphs and named cycles.
//
// Document shape:
//   {
//     "vertices": [{"id": 0, "genus": 1, "self_int": -3}, ...],
//     "edges":    [[0, 1, 1], ...],
//     "cycles":   {"z_x": {"0": 1, "1": 2}, ...}
//   }
//
// Rendering is canonical: two-space indentation, vertices and edges in the
// stored order, cycles sorted by name with nonzero coefficients listed in
// vertex order.  parse -> render is the identity on canonical documents, and
// render -> parse recovers the bundle exactly.

#include <map>
#include <string>

#include "nrcalc/cycles.hpp"

namespace nrcalc {

struct GraphBundle {
  DualGraph::Ptr graph;
  std::map<std::string, Cycle> cycles;
};

GraphBundle parse_graph_json(const std::string& text);
std::string render_graph_json(const GraphBundle& bundle);

GraphBundle load_graph_file(const std::string& path);
void save_graph_file(const GraphBundle& bundle, const std::string& path);

}  // namespace nrcalc
