#pragma once

// Text artifacts: CSV polylines and JSON records for regions, load
// intervals, trajectories, post-fault states and assessments.

#include <string>
#include <string_view>
#include <vector>

#include "gridbarrier/assess.hpp"
#include "gridbarrier/genbarrier.hpp"
#include "gridbarrier/loadsets.hpp"

namespace gridbarrier::io {

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

/// `delta,omega` rows; the first vertex is repeated at the end.
std::string region_csv(const Region& region);

/// {node, kind, empty, reason, termination, residuals, options, ...}; with
/// `with_boundary` the polygon is embedded as [[delta, omega], ...].
std::string region_json(const NodeId& node, const Region& region, const IntegratorOptions& opts,
                        bool with_boundary = false);

/// `t,delta,omega,l1,l2` rows, one per accepted step.
std::string curve_csv(const BarrierCurve& curve);

/// {node, kind, lower, upper, lower_feasible, upper_feasible, nonempty, resolution}
std::string load_interval_json(const NodeId& node, const LoadInterval& interval);

/// `t,node,delta,omega` rows in long format; omega is blank for loads.
/// Every `stride`-th sample is written, plus the final one.
std::string trajectory_csv(const Trajectory& traj, std::size_t stride = 1);

/// {finite, t_end, violations: [{node, bound, t}]}
std::string violation_json(const Trajectory& traj);

/// State file: {"<node id>": {"delta": ..., "omega": ...}, ...}
PostFaultState parse_state(std::string_view text);
std::string state_json(const PostFaultState& state);

/// Batch file: a JSON array of state objects.
std::vector<PostFaultState> parse_states(std::string_view text);

/// {verdict, per_node: {id: {in_mrpi, in_admissible}}, critical_nodes}
std::string assessment_json(const Assessment& a);
std::string assessments_json(const std::vector<Assessment>& batch);

std::string options_json(const IntegratorOptions& opts);

}  // namespace gridbarrier::io
