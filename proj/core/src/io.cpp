#include "gridbarrier/io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace gridbarrier::io {

using ordered_json = nlohmann::ordered_json;
using json = nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

ordered_json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

ordered_json options_object(const IntegratorOptions& opts) {
  ordered_json o;
  o["step"] = opts.step;
  o["t_back_max"] = opts.t_back_max;
  o["omega_cap"] = opts.omega_cap;
  o["box_margin"] = opts.box_margin;
  o["event_tol"] = opts.event_tol;
  return o;
}

ordered_json assessment_object(const Assessment& a) {
  ordered_json o;
  o["verdict"] = std::string(to_string(a.verdict));
  ordered_json per = ordered_json::object();
  for (const auto& [id, m] : a.per_node) {
    per[id] = {{"in_mrpi", m.in_mrpi}, {"in_admissible", m.in_admissible}};
  }
  o["per_node"] = std::move(per);
  o["critical_nodes"] = a.critical_nodes;
  return o;
}

PostFaultState state_from(const json& doc) {
  if (!doc.is_object()) throw AssessError("state must be a JSON object keyed by node id");
  PostFaultState state;
  for (const auto& [id, entry] : doc.items()) {
    if (!entry.is_object() || !entry.contains("delta") || !entry["delta"].is_number()) {
      throw AssessError("state entry '" + id + "' needs a numeric delta");
    }
    NodeState s{entry["delta"].get<double>(), std::nullopt};
    if (entry.contains("omega")) {
      if (!entry["omega"].is_number()) throw AssessError("state entry '" + id + "' has non-numeric omega");
      s.omega = entry["omega"].get<double>();
    }
    state.nodes.emplace(id, s);
  }
  return state;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw AssessError(std::string("syntax error: ") + e.what());
  }
}

}  // namespace

std::string region_csv(const Region& region) {
  std::string out = "delta,omega\n";
  for (const auto& p : region.boundary) out += format_double(p.x) + "," + format_double(p.y) + "\n";
  if (!region.boundary.empty()) {
    const auto& p = region.boundary.front();
    out += format_double(p.x) + "," + format_double(p.y) + "\n";
  }
  return out;
}

std::string region_json(const NodeId& node, const Region& region, const IntegratorOptions& opts,
                        bool with_boundary) {
  ordered_json o;
  o["node"] = node;
  o["kind"] = std::string(to_string(region.kind));
  o["empty"] = region.empty;
  o["reason"] = std::string(to_string(region.reason));
  o["area"] = region.area();
  o["vertices"] = region.boundary.size();
  ordered_json term = ordered_json::array();
  ordered_json residuals = ordered_json::array();
  for (const auto& c : region.curves) {
    term.push_back({{"side", std::string(to_string(c.side))},
                    {"termination", std::string(to_string(c.termination))},
                    {"points", c.points.size()},
                    {"switches", c.switches},
                    {"t_start", c.points.empty() ? 0.0 : c.points.back().t}});
    residuals.push_back({{"side", std::string(to_string(c.side))},
                         {"hamiltonian_residual_max", c.hamiltonian_residual_max}});
  }
  o["termination"] = std::move(term);
  o["residuals"] = std::move(residuals);
  o["window"] = {{"delta_min", region.box.xmin}, {"delta_max", region.box.xmax},
                 {"omega_min", region.box.ymin}, {"omega_max", region.box.ymax}};
  o["notes"] = region.notes;
  o["options"] = options_object(opts);
  if (with_boundary) {
    ordered_json b = ordered_json::array();
    for (const auto& p : region.boundary) b.push_back({p.x, p.y});
    o["boundary"] = std::move(b);
  }
  return o.dump(2) + "\n";
}

std::string curve_csv(const BarrierCurve& curve) {
  std::string out = "t,delta,omega,l1,l2\n";
  for (const auto& p : curve.points) {
    out += format_double(p.t) + "," + format_double(p.state.delta) + "," + format_double(p.state.omega) +
           "," + format_double(p.adjoint.l1) + "," + format_double(p.adjoint.l2) + "\n";
  }
  return out;
}

std::string load_interval_json(const NodeId& node, const LoadInterval& interval) {
  ordered_json o;
  o["node"] = node;
  o["kind"] = std::string(to_string(interval.kind));
  o["lower"] = interval.lower ? ordered_json(*interval.lower) : ordered_json(nullptr);
  o["upper"] = interval.upper ? ordered_json(*interval.upper) : ordered_json(nullptr);
  o["lower_feasible"] = interval.lower.has_value();
  o["upper_feasible"] = interval.upper.has_value();
  o["nonempty"] = interval.nonempty;
  o["resolution"] = interval.resolution;
  return o.dump(2) + "\n";
}

std::string trajectory_csv(const Trajectory& traj, std::size_t stride) {
  if (stride == 0) stride = 1;
  std::ostringstream out;
  out << "t,node,delta,omega\n";
  for (std::size_t s = 0; s < traj.t.size(); ++s) {
    if (s % stride != 0 && s + 1 != traj.t.size()) continue;
    for (std::size_t k = 0; k < traj.nodes.size(); ++k) {
      out << format_double(traj.t[s]) << ',' << traj.nodes[k] << ','
          << format_double(traj.x[s][traj.offset[k]]) << ',';
      if (traj.has_omega[k]) out << format_double(traj.x[s][traj.offset[k] + 1]);
      out << '\n';
    }
  }
  return out.str();
}

std::string violation_json(const Trajectory& traj) {
  ordered_json o;
  o["finite"] = traj.finite;
  o["t_end"] = traj.t.empty() ? 0.0 : traj.t.back();
  ordered_json v = ordered_json::array();
  for (const auto& viol : traj.violations) {
    v.push_back({{"node", viol.node}, {"bound", std::string(to_string(viol.bound))}, {"t", viol.t}});
  }
  o["violations"] = std::move(v);
  return o.dump(2) + "\n";
}

PostFaultState parse_state(std::string_view text) { return state_from(parse_json(text)); }

std::vector<PostFaultState> parse_states(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_array()) throw AssessError("batch file must be a JSON array of states");
  std::vector<PostFaultState> out;
  for (const auto& entry : doc) out.push_back(state_from(entry));
  return out;
}

std::string state_json(const PostFaultState& state) {
  ordered_json o = ordered_json::object();
  for (const auto& [id, s] : state.nodes) {
    ordered_json e;
    e["delta"] = number_or_null(s.delta);
    if (s.omega) e["omega"] = number_or_null(*s.omega);
    o[id] = std::move(e);
  }
  return o.dump(2) + "\n";
}

std::string assessment_json(const Assessment& a) { return assessment_object(a).dump(2) + "\n"; }

std::string assessments_json(const std::vector<Assessment>& batch) {
  ordered_json arr = ordered_json::array();
  for (const auto& a : batch) arr.push_back(assessment_object(a));
  return arr.dump(2) + "\n";
}

std::string options_json(const IntegratorOptions& opts) { return options_object(opts).dump(2) + "\n"; }

}  // namespace gridbarrier::io
