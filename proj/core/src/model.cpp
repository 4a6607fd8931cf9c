#include "gridbarrier/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "json.hpp"

namespace gridbarrier {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Generator: return "generator";
    case NodeKind::Load: return "load";
    case NodeKind::Reference: return "reference";
  }
  return "unknown";
}

NodeKind NodeSpec::kind() const {
  if (is_generator()) return NodeKind::Generator;
  if (is_load()) return NodeKind::Load;
  return NodeKind::Reference;
}

const NodeSpec* GridSpec::find(const NodeId& id) const {
  auto it = std::find_if(nodes.begin(), nodes.end(),
                         [&](const NodeSpec& n) { return n.id == id; });
  return it == nodes.end() ? nullptr : &*it;
}

const NodeSpec& GridSpec::at(const NodeId& id) const {
  const NodeSpec* node = find(id);
  if (node == nullptr) throw GridError("node", "unknown node id '" + id + "'");
  return *node;
}

std::size_t GridSpec::degree(const NodeId& id) const {
  return static_cast<std::size_t>(std::count_if(
      edges.begin(), edges.end(), [&](const EdgeSpec& e) { return e.touches(id); }));
}

std::vector<NodeId> GridSpec::dynamic_nodes() const {
  std::vector<NodeId> ids;
  for (const auto& n : nodes) {
    if (!n.is_reference()) ids.push_back(n.id);
  }
  return ids;
}

namespace {

void require_finite(double value, const std::string& field) {
  if (!std::isfinite(value)) throw GridError(field, "value must be finite");
}

bool connected(const GridSpec& grid) {
  if (grid.nodes.empty()) return true;
  std::set<NodeId> seen{grid.nodes.front().id};
  std::vector<NodeId> stack{grid.nodes.front().id};
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    for (const auto& e : grid.edges) {
      if (!e.touches(id)) continue;
      const NodeId& next = e.other(id);
      if (seen.insert(next).second) stack.push_back(next);
    }
  }
  return seen.size() == grid.nodes.size();
}

}  // namespace

void validate(GridSpec& grid) {
  grid.warnings.clear();
  std::set<NodeId> ids;
  for (std::size_t n = 0; n < grid.nodes.size(); ++n) {
    const NodeSpec& node = grid.nodes[n];
    const std::string where = "nodes[" + std::to_string(n) + "]";
    if (node.id.empty()) throw GridError(where + ".id", "empty id");
    if (!ids.insert(node.id).second) {
      throw GridError(where + ".id", "duplicate id '" + node.id + "'");
    }
    if (node.is_reference()) {
      require_finite(node.reference().angle, where + ".delta_fixed");
      continue;
    }
    require_finite(node.bounds.lower, where + ".delta_min");
    require_finite(node.bounds.upper, where + ".delta_max");
    if (!(node.bounds.lower < node.bounds.upper)) {
      throw GridError(where + ".delta_min", "delta_min must be below delta_max");
    }
    if (node.is_generator()) {
      const auto& g = node.generator();
      require_finite(g.inertia, where + ".m");
      require_finite(g.damping, where + ".k");
      require_finite(g.mech_power, where + ".p_m");
      if (!(g.inertia > 0.0)) throw GridError(where + ".m", "generator inertia must be positive");
      if (g.damping < 0.0) throw GridError(where + ".k", "generator damping must be nonnegative");
      if (g.mech_power < 0.0) throw GridError(where + ".p_m", "mechanical power must be nonnegative");
    } else {
      const auto& l = node.load();
      require_finite(l.damping, where + ".k");
      require_finite(l.demand, where + ".p_d");
      if (!(l.damping > 0.0)) throw GridError(where + ".k", "load damping must be positive");
      if (l.demand < 0.0) throw GridError(where + ".p_d", "power demand must be nonnegative");
    }
  }

  std::set<std::pair<NodeId, NodeId>> pairs;
  for (std::size_t e = 0; e < grid.edges.size(); ++e) {
    const EdgeSpec& edge = grid.edges[e];
    const std::string where = "edges[" + std::to_string(e) + "]";
    if (grid.find(edge.i) == nullptr) throw GridError(where + ".i", "unknown node '" + edge.i + "'");
    if (grid.find(edge.j) == nullptr) throw GridError(where + ".j", "unknown node '" + edge.j + "'");
    if (edge.i == edge.j) throw GridError(where, "self loop on '" + edge.i + "'");
    auto key = std::minmax(edge.i, edge.j);
    if (!pairs.insert({key.first, key.second}).second) {
      throw GridError(where, "duplicate edge between '" + edge.i + "' and '" + edge.j + "'");
    }
    require_finite(edge.coupling, where + ".a");
    if (edge.coupling < 0.0) throw GridError(where + ".a", "negative coupling");
    for (const auto& ov : edge.overrides) {
      const std::string f = where + ".disturbance." + ov.node;
      if (!edge.touches(ov.node)) throw GridError(f, "override names a node not on this edge");
      if (grid.at(ov.node).is_reference()) {
        throw GridError(f, "reference angles are fixed and cannot carry a disturbance interval");
      }
      require_finite(ov.interval.lower, f);
      require_finite(ov.interval.upper, f);
      if (ov.interval.lower > ov.interval.upper) throw GridError(f, "interval lower bound above upper bound");
    }
  }

  if (!connected(grid)) grid.warnings.emplace_back("grid graph is disconnected");
}

namespace {

double number(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    throw GridError(where + "." + key, "missing required field");
  }
  if (!it->is_number()) throw GridError(where + "." + key, "expected a number");
  return it->get<double>();
}

NodeId identifier(const json& value, const std::string& where) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer()) return value.dump();
  throw GridError(where, "expected a string or integer identifier");
}

AngleBounds interval(const json& value, const std::string& where) {
  if (!value.is_array() || value.size() != 2 || !value[0].is_number() || !value[1].is_number()) {
    throw GridError(where, "expected [lower, upper]");
  }
  return {value[0].get<double>(), value[1].get<double>()};
}

NodeSpec parse_node(const json& obj, const std::string& where) {
  if (!obj.is_object()) throw GridError(where, "expected an object");
  if (!obj.contains("id")) throw GridError(where + ".id", "missing required field");
  NodeSpec node;
  node.id = identifier(obj["id"], where + ".id");
  if (!obj.contains("kind") || !obj["kind"].is_string()) {
    throw GridError(where + ".kind", "missing or non-string kind");
  }
  const std::string kind = obj["kind"].get<std::string>();
  if (kind == "reference") {
    double angle = 0.0;
    if (obj.contains("delta_fixed")) angle = number(obj, "delta_fixed", where);
    node.params = ReferenceParams{angle};
    return node;
  }
  if (kind == "generator") {
    node.params = GeneratorParams{number(obj, "m", where), number(obj, "k", where),
                                  number(obj, "p_m", where)};
  } else if (kind == "load") {
    node.params = LoadParams{number(obj, "k", where), number(obj, "p_d", where)};
  } else {
    throw GridError(where + ".kind", "unknown kind '" + kind + "'");
  }
  if (!obj.contains("delta_min") || !obj.contains("delta_max")) {
    throw GridError(where, "missing constraint bounds delta_min/delta_max");
  }
  node.bounds = {number(obj, "delta_min", where), number(obj, "delta_max", where)};
  return node;
}

EdgeSpec parse_edge(const json& obj, const std::string& where) {
  if (!obj.is_object()) throw GridError(where, "expected an object");
  for (const char* key : {"i", "j"}) {
    if (!obj.contains(key)) throw GridError(where + "." + key, "missing required field");
  }
  EdgeSpec edge;
  edge.i = identifier(obj["i"], where + ".i");
  edge.j = identifier(obj["j"], where + ".j");
  edge.coupling = number(obj, "a", where);
  if (auto it = obj.find("disturbance"); it != obj.end()) {
    if (!it->is_object()) throw GridError(where + ".disturbance", "expected an object");
    for (const auto& [node, bounds] : it->items()) {
      edge.overrides.push_back({node, interval(bounds, where + ".disturbance." + node)});
    }
  }
  return edge;
}

}  // namespace

GridSpec parse_grid(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw GridError("", std::string("syntax error: ") + e.what());
  }
  if (!doc.is_object()) throw GridError("", "syntax error: top level must be an object");
  if (!doc.contains("nodes") || !doc["nodes"].is_array()) {
    throw GridError("nodes", "missing or non-array 'nodes'");
  }
  GridSpec grid;
  const json& nodes = doc["nodes"];
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    grid.nodes.push_back(parse_node(nodes[n], "nodes[" + std::to_string(n) + "]"));
  }
  if (doc.contains("edges")) {
    const json& edges = doc["edges"];
    if (!edges.is_array()) throw GridError("edges", "expected an array");
    for (std::size_t e = 0; e < edges.size(); ++e) {
      grid.edges.push_back(parse_edge(edges[e], "edges[" + std::to_string(e) + "]"));
    }
  }
  validate(grid);
  return grid;
}

std::string serialize_grid(const GridSpec& grid) {
  ordered_json doc;
  doc["nodes"] = ordered_json::array();
  for (const auto& node : grid.nodes) {
    ordered_json obj;
    obj["id"] = node.id;
    obj["kind"] = std::string(to_string(node.kind()));
    if (node.is_generator()) {
      obj["m"] = node.generator().inertia;
      obj["k"] = node.generator().damping;
      obj["p_m"] = node.generator().mech_power;
    } else if (node.is_load()) {
      obj["k"] = node.load().damping;
      obj["p_d"] = node.load().demand;
    } else {
      obj["delta_fixed"] = node.reference().angle;
    }
    if (!node.is_reference()) {
      obj["delta_min"] = node.bounds.lower;
      obj["delta_max"] = node.bounds.upper;
    }
    doc["nodes"].push_back(std::move(obj));
  }
  doc["edges"] = ordered_json::array();
  for (const auto& edge : grid.edges) {
    ordered_json obj;
    obj["i"] = edge.i;
    obj["j"] = edge.j;
    obj["a"] = edge.coupling;
    if (!edge.overrides.empty()) {
      ordered_json ov = ordered_json::object();
      for (const auto& o : edge.overrides) ov[o.node] = {o.interval.lower, o.interval.upper};
      obj["disturbance"] = std::move(ov);
    }
    doc["edges"].push_back(std::move(obj));
  }
  return doc.dump(2) + "\n";
}

DecoupledNode decouple(const GridSpec& grid, const NodeId& node_id) {
  const NodeSpec& self = grid.at(node_id);
  if (self.is_reference()) {
    throw GridError("node", "reference node '" + node_id + "' has no dynamics to decouple");
  }
  DecoupledNode out{self, {}, {}};
  for (const auto& edge : grid.edges) {
    if (!edge.touches(node_id)) continue;
    const NodeSpec& other = grid.at(edge.other(node_id));
    if (other.is_reference()) {
      out.fixed.push_back({other.id, edge.coupling, other.reference().angle});
      continue;
    }
    AngleBounds interval = other.bounds;
    for (const auto& ov : edge.overrides) {
      if (ov.node == other.id) interval = ov.interval;
    }
    out.variable.push_back({other.id, edge.coupling, interval});
  }
  return out;
}

}  // namespace gridbarrier
