#include "nrcalc/graph_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "nrcalc/errors.hpp"

namespace nrcalc {

namespace {

using Json = nlohmann::ordered_json;

long require_integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer())
    throw InputError("graph document: " + where + " must be an integer");
  return j.get<long>();
}

int parse_id_key(const std::string& key) {
  size_t used = 0;
  int id = 0;
  try {
    id = std::stoi(key, &used);
  } catch (const std::exception&) {
    throw InputError("graph document: cycle key '" + key + "' is not a vertex id");
  }
  if (used != key.size())
    throw InputError("graph document: cycle key '" + key + "' is not a vertex id");
  return id;
}

}  // namespace

GraphBundle parse_graph_json(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("graph document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("graph document must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "vertices" && key != "edges" && key != "cycles")
      throw InputError("graph document: unknown field '" + key + "'");
  }
  if (!doc.contains("vertices") || !doc["vertices"].is_array())
    throw InputError("graph document: 'vertices' must be an array");

  std::vector<GraphVertex> vertices;
  for (const auto& v : doc["vertices"]) {
    if (!v.is_object()) throw InputError("graph document: vertex entries must be objects");
    for (const auto& [key, value] : v.items()) {
      (void)value;
      if (key != "id" && key != "genus" && key != "self_int")
        throw InputError("graph document: unknown vertex field '" + key + "'");
    }
    if (!v.contains("id") || !v.contains("genus") || !v.contains("self_int"))
      throw InputError("graph document: vertex needs id, genus, self_int");
    vertices.push_back({static_cast<int>(require_integer(v["id"], "vertex id")),
                        require_integer(v["genus"], "vertex genus"),
                        require_integer(v["self_int"], "vertex self_int")});
  }

  std::vector<GraphEdge> edges;
  if (doc.contains("edges")) {
    if (!doc["edges"].is_array())
      throw InputError("graph document: 'edges' must be an array");
    for (const auto& e : doc["edges"]) {
      if (!e.is_array() || e.size() != 3)
        throw InputError("graph document: edges must be [id, id, mult] triples");
      edges.push_back({static_cast<int>(require_integer(e[0], "edge endpoint")),
                       static_cast<int>(require_integer(e[1], "edge endpoint")),
                       require_integer(e[2], "edge multiplicity")});
    }
  }

  GraphBundle bundle{DualGraph::make(std::move(vertices), std::move(edges)), {}};

  if (doc.contains("cycles")) {
    if (!doc["cycles"].is_object())
      throw InputError("graph document: 'cycles' must be an object");
    for (const auto& [name, entry] : doc["cycles"].items()) {
      if (!entry.is_object())
        throw InputError("graph document: cycle '" + name + "' must map ids to integers");
      std::vector<long> coeffs(bundle.graph->size(), 0);
      for (const auto& [key, value] : entry.items()) {
        int idx = bundle.graph->index_of(parse_id_key(key));
        coeffs[idx] = require_integer(value, "cycle coefficient");
      }
      if (!bundle.cycles.emplace(name, Cycle(bundle.graph, std::move(coeffs))).second)
        throw InputError("graph document: duplicate cycle name '" + name + "'");
    }
  }
  return bundle;
}

std::string render_graph_json(const GraphBundle& bundle) {
  if (!bundle.graph) throw InputError("cannot render an empty graph bundle");
  Json doc;
  doc["vertices"] = Json::array();
  for (const auto& v : bundle.graph->vertices())
    doc["vertices"].push_back({{"id", v.id}, {"genus", v.genus}, {"self_int", v.self_int}});
  doc["edges"] = Json::array();
  for (const auto& e : bundle.graph->edges())
    doc["edges"].push_back({e.a, e.b, e.mult});
  doc["cycles"] = Json::object();
  for (const auto& [name, cycle] : bundle.cycles) {
    if (cycle.graph().get() != bundle.graph.get())
      throw InputError("cycle '" + name + "' belongs to a different graph");
    Json entry = Json::object();
    for (int i = 0; i < bundle.graph->size(); ++i)
      if (cycle.coeffs()[i] != 0)
        entry[std::to_string(bundle.graph->vertex(i).id)] = cycle.coeffs()[i];
    doc["cycles"][name] = std::move(entry);
  }
  return doc.dump(2) + "\n";
}

GraphBundle load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_graph_json(buf.str());
}

void save_graph_file(const GraphBundle& bundle, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write graph file: " + path);
  out << render_graph_json(bundle);
  if (!out) throw InputError("failed while writing graph file: " + path);
}

}  // namespace nrcalc
