#pragma once

// Grid data model: buses, couplings, angle constraints, and the per-node
// decoupled view in which neighbour angles become bounded disturbances.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace gridbarrier {

using NodeId = std::string;

/// Closed angle interval [lower, upper] in radians.
struct AngleBounds {
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double angle) const { return lower <= angle && angle <= upper; }
  bool is_point() const { return lower == upper; }
  bool operator==(const AngleBounds&) const = default;
};

/// Swing-equation machine: m * delta'' + k * delta' + sum a sin(.) = p_m.
struct GeneratorParams {
  double inertia = 0.0;     // m
  double damping = 0.0;     // k
  double mech_power = 0.0;  // p_m
  bool operator==(const GeneratorParams&) const = default;
};

/// First-order load bus: k * delta' + sum a sin(.) = -p_d.
struct LoadParams {
  double damping = 0.0;  // k
  double demand = 0.0;   // p_d
  bool operator==(const LoadParams&) const = default;
};

/// Infinite bus with a fixed angle.
struct ReferenceParams {
  double angle = 0.0;
  bool operator==(const ReferenceParams&) const = default;
};

enum class NodeKind { Generator, Load, Reference };

std::string_view to_string(NodeKind kind);

struct NodeSpec {
  NodeId id;
  std::variant<GeneratorParams, LoadParams, ReferenceParams> params;
  AngleBounds bounds;  // ignored for reference nodes

  NodeKind kind() const;
  bool is_generator() const { return std::holds_alternative<GeneratorParams>(params); }
  bool is_load() const { return std::holds_alternative<LoadParams>(params); }
  bool is_reference() const { return std::holds_alternative<ReferenceParams>(params); }

  const GeneratorParams& generator() const { return std::get<GeneratorParams>(params); }
  const LoadParams& load() const { return std::get<LoadParams>(params); }
  const ReferenceParams& reference() const { return std::get<ReferenceParams>(params); }

  bool operator==(const NodeSpec&) const = default;
};

/// Disturbance-interval override for one endpoint of an edge: the interval of
/// `node`'s angle as seen from the opposite endpoint.
struct DisturbanceOverride {
  NodeId node;
  AngleBounds interval;
  bool operator==(const DisturbanceOverride&) const = default;
};

struct EdgeSpec {
  NodeId i;
  NodeId j;
  double coupling = 0.0;  // a_ij = V_i V_j B_ij
  std::vector<DisturbanceOverride> overrides;

  bool touches(const NodeId& id) const { return i == id || j == id; }
  const NodeId& other(const NodeId& id) const { return i == id ? j : i; }
  bool operator==(const EdgeSpec&) const = default;
};

struct GridSpec {
  std::vector<NodeSpec> nodes;
  std::vector<EdgeSpec> edges;
  std::vector<std::string> warnings;

  const NodeSpec* find(const NodeId& id) const;
  const NodeSpec& at(const NodeId& id) const;
  std::size_t degree(const NodeId& id) const;
  /// Non-reference node ids in file order.
  std::vector<NodeId> dynamic_nodes() const;

  bool operator==(const GridSpec& other) const {
    return nodes == other.nodes && edges == other.edges;
  }
};

struct VariableNeighbor {
  NodeId id;
  double coupling = 0.0;
  AngleBounds interval;
  bool operator==(const VariableNeighbor&) const = default;
};

struct FixedNeighbor {
  NodeId id;
  double coupling = 0.0;
  double angle = 0.0;
  bool operator==(const FixedNeighbor&) const = default;
};

/// One node's own dynamics with neighbour angles replaced by disturbances.
/// Reference neighbours are folded in as fixed couplings.
struct DecoupledNode {
  NodeSpec node;
  std::vector<VariableNeighbor> variable;
  std::vector<FixedNeighbor> fixed;

  const NodeId& id() const { return node.id; }
  const AngleBounds& bounds() const { return node.bounds; }
  bool is_generator() const { return node.is_generator(); }
  bool is_load() const { return node.is_load(); }
};

/// Raised for malformed or inconsistent grid descriptions. `field()` names
/// the offending entry, e.g. "nodes[1].k".
class GridError : public std::runtime_error {
 public:
  GridError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Checks every GridSpec invariant; throws GridError on the first violation
/// and records non-fatal findings (disconnected graph) in `grid.warnings`.
void validate(GridSpec& grid);

GridSpec parse_grid(std::string_view text);
std::string serialize_grid(const GridSpec& grid);

/// Throws GridError for unknown ids and reference nodes.
DecoupledNode decouple(const GridSpec& grid, const NodeId& node_id);

}  // namespace gridbarrier
