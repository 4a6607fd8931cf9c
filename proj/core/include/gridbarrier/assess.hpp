#pragma once

// Post-fault state classification, coupled simulation, and worst-case probes.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gridbarrier/genbarrier.hpp"
#include "gridbarrier/integrator.hpp"
#include "gridbarrier/loadsets.hpp"
#include "gridbarrier/model.hpp"

namespace gridbarrier {

struct NodeState {
  double delta = 0.0;
  std::optional<double> omega;  // generators only
  bool operator==(const NodeState&) const = default;
};

/// One entry per non-reference node, keyed by id.
struct PostFaultState {
  std::map<NodeId, NodeState> nodes;
  bool operator==(const PostFaultState&) const = default;
};

struct GeneratorSets {
  Region mrpi;
  Region admissible;
};

struct LoadSets {
  LoadInterval mrpi;
  LoadInterval admissible;
};

using NodeSets = std::variant<GeneratorSets, LoadSets>;
using GridSets = std::map<NodeId, NodeSets>;

struct SetOptions {
  IntegratorOptions integrator;
  double load_resolution = kDefaultLoadResolution;
};

NodeSets compute_node_sets(const DecoupledNode& node, const SetOptions& opts = {});
GridSets compute_grid_sets(const GridSpec& grid, const SetOptions& opts = {});

enum class Verdict { Safe, PotentiallySafe, Unsafe };

std::string_view to_string(Verdict v);

struct NodeMembership {
  bool in_mrpi = false;
  bool in_admissible = false;
  bool operator==(const NodeMembership&) const = default;
};

struct Assessment {
  std::map<NodeId, NodeMembership> per_node;
  Verdict verdict = Verdict::Unsafe;
  std::vector<NodeId> critical_nodes;  // sorted by id
  bool operator==(const Assessment&) const = default;
};

class AssessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Distance within which a generator state counts as on a region boundary.
inline constexpr double kMembershipTol = 1e-6;

/// Unsafe if any node lies outside its admissible set, Safe if every node
/// lies strictly inside its MRPI, PotentiallySafe otherwise. Boundaries count
/// as inside the admissible set and outside the MRPI.
Assessment classify_state(const GridSpec& grid, const GridSets& sets, const PostFaultState& x,
                          double tol = kMembershipTol);

std::vector<Assessment> screen(const GridSpec& grid, const GridSets& sets,
                               const std::vector<PostFaultState>& states,
                               double tol = kMembershipTol);

enum class Bound { Lower, Upper };

std::string_view to_string(Bound b);

struct Violation {
  double t = 0.0;
  NodeId node;
  Bound bound = Bound::Upper;
};

/// Sampled states of one or more nodes. Generators contribute (delta, omega),
/// loads delta only; `offset[k]` locates node k inside each state row.
struct Trajectory {
  std::vector<NodeId> nodes;
  std::vector<bool> has_omega;
  std::vector<std::size_t> offset;
  std::vector<double> t;
  std::vector<std::vector<double>> x;
  std::vector<Violation> violations;  // first violation per node, in time order
  bool finite = true;

  std::optional<Violation> first_violation() const {
    if (violations.empty()) return std::nullopt;
    return violations.front();
  }
  double delta(std::size_t sample, std::size_t node) const { return x[sample][offset[node]]; }
};

/// Fully coupled post-fault network with reference angles held fixed.
class CoupledSystem {
 public:
  explicit CoupledSystem(const GridSpec& grid);

  std::size_t dimension() const { return dim_; }
  const std::vector<NodeId>& nodes() const { return ids_; }
  std::size_t offset(std::size_t node) const { return offset_[node]; }
  bool is_generator(std::size_t node) const { return gen_[node]; }

  Eigen::VectorXd pack(const PostFaultState& x) const;
  PostFaultState unpack(const Eigen::VectorXd& v) const;
  Eigen::VectorXd rhs(const Eigen::VectorXd& v) const;

  /// Angles of every node (references included) in grid order.
  std::vector<double> all_angles(const Eigen::VectorXd& v) const;

 private:
  struct Branch {
    std::size_t from;  // grid node index
    std::size_t to;
    double coupling;
  };
  std::vector<NodeId> ids_;  // dynamic nodes in grid order
  std::vector<std::variant<GeneratorParams, LoadParams>> params_;
  std::vector<std::size_t> offset_;
  std::vector<bool> gen_;
  std::vector<int> dynamic_of_grid_;  // -1 for references
  std::vector<double> fixed_angle_;   // per grid node; used for references
  std::vector<Branch> branches_;
  std::size_t dim_ = 0;
};

/// Forward simulation of the coupled network; records the first bound
/// violation per node. A non-finite blow-up truncates the trajectory and
/// clears `finite`.
Trajectory simulate_postfault(const GridSpec& grid, const PostFaultState& x0, double t_end,
                              const IntegratorOptions& opts = {});

enum class ProbeStrategy {
  PushUp,    // every neighbour minimizes sum a sin(delta - d)
  PushDown,  // every neighbour maximizes it
  Pump,      // push along the current motion (omega sign), injecting energy
};

std::string_view to_string(ProbeStrategy s);

/// Forward run of one decoupled node under a state-feedback disturbance;
/// stops at the first constraint violation.
Trajectory worst_case_probe(const DecoupledNode& node, const NodeState& s0, ProbeStrategy strategy,
                            double t_end, const IntegratorOptions& opts = {});

struct ProbeOptions {
  IntegratorOptions integrator{.step = 1e-2};
  double horizon = 100.0;
  int grid = 20;
  double tol = kMembershipTol;
};

struct ProbeDisagreement {
  GenState state;
  std::string what;
};

struct ProbeReport {
  int samples = 0;
  int inside = 0;       // grid points inside the region away from its boundary
  int probe_safe = 0;   // grid points where no probe strategy violated
  std::vector<ProbeDisagreement> disagreements;
};

/// Cross-checks a generator MRPI against worst-case probes on a grid of
/// cell centres of the constraint box. A disagreement is a deep-inside point
/// that some probe drives out, an empty region with a probe-safe point, or a
/// non-empty region without any probe-safe point.
ProbeReport cross_validate_mrpi(const DecoupledNode& node, const Region& mrpi,
                                const ProbeOptions& opts = {});

}  // namespace gridbarrier
