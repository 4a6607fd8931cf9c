#include "gridbarrier/assess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gridbarrier {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Safe: return "safe";
    case Verdict::PotentiallySafe: return "potentially_safe";
    case Verdict::Unsafe: return "unsafe";
  }
  return "unknown";
}

std::string_view to_string(Bound b) { return b == Bound::Lower ? "lower" : "upper"; }

std::string_view to_string(ProbeStrategy s) {
  switch (s) {
    case ProbeStrategy::PushUp: return "push_up";
    case ProbeStrategy::PushDown: return "push_down";
    case ProbeStrategy::Pump: return "pump";
  }
  return "unknown";
}

NodeSets compute_node_sets(const DecoupledNode& node, const SetOptions& opts) {
  if (node.is_generator()) {
    return GeneratorSets{compute_generator_region(node, SetKind::Mrpi, opts.integrator),
                         compute_generator_region(node, SetKind::Admissible, opts.integrator)};
  }
  return LoadSets{mrpi_interval(node, opts.load_resolution),
                  admissible_interval(node, opts.load_resolution)};
}

GridSets compute_grid_sets(const GridSpec& grid, const SetOptions& opts) {
  GridSets sets;
  for (const auto& id : grid.dynamic_nodes()) {
    sets.emplace(id, compute_node_sets(decouple(grid, id), opts));
  }
  return sets;
}

namespace {

void check_state(const GridSpec& grid, const PostFaultState& x) {
  for (const auto& [id, s] : x.nodes) {
    const NodeSpec* node = grid.find(id);
    if (node == nullptr) throw AssessError("state names unknown node '" + id + "'");
    if (node->is_reference()) throw AssessError("state names reference node '" + id + "'");
    if (node->is_generator() && !s.omega) {
      throw AssessError("generator '" + id + "' state is missing omega");
    }
    if (node->is_load() && s.omega) throw AssessError("load '" + id + "' state carries omega");
  }
  for (const auto& id : grid.dynamic_nodes()) {
    if (!x.nodes.contains(id)) throw AssessError("state is missing node '" + id + "'");
  }
}

}  // namespace

Assessment classify_state(const GridSpec& grid, const GridSets& sets, const PostFaultState& x,
                          double tol) {
  check_state(grid, x);
  Assessment out;
  bool all_mrpi = true;
  bool any_outside = false;
  for (const auto& [id, s] : x.nodes) {
    auto it = sets.find(id);
    if (it == sets.end()) throw AssessError("no sets computed for node '" + id + "'");
    NodeMembership m;
    if (const auto* g = std::get_if<GeneratorSets>(&it->second)) {
      const GenState gs{s.delta, *s.omega};
      m.in_mrpi = membership(g->mrpi, gs, tol) == Membership::Inside;
      m.in_admissible = membership(g->admissible, gs, tol) != Membership::Outside;
    } else {
      const auto& l = std::get<LoadSets>(it->second);
      m.in_mrpi = l.mrpi.contains_strictly(s.delta);
      m.in_admissible = l.admissible.contains(s.delta);
    }
    all_mrpi = all_mrpi && m.in_mrpi;
    any_outside = any_outside || !m.in_admissible;
    out.per_node.emplace(id, m);
  }
  out.verdict = any_outside ? Verdict::Unsafe : (all_mrpi ? Verdict::Safe : Verdict::PotentiallySafe);
  if (out.verdict != Verdict::Safe) {
    for (const auto& [id, m] : out.per_node) {
      if (!m.in_mrpi) out.critical_nodes.push_back(id);
    }
  }
  return out;
}

std::vector<Assessment> screen(const GridSpec& grid, const GridSets& sets,
                               const std::vector<PostFaultState>& states, double tol) {
  std::vector<Assessment> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(classify_state(grid, sets, s, tol));
  return out;
}

CoupledSystem::CoupledSystem(const GridSpec& grid) {
  dynamic_of_grid_.assign(grid.nodes.size(), -1);
  fixed_angle_.assign(grid.nodes.size(), 0.0);
  for (std::size_t n = 0; n < grid.nodes.size(); ++n) {
    const NodeSpec& node = grid.nodes[n];
    if (node.is_reference()) {
      fixed_angle_[n] = node.reference().angle;
      continue;
    }
    dynamic_of_grid_[n] = static_cast<int>(ids_.size());
    ids_.push_back(node.id);
    offset_.push_back(dim_);
    gen_.push_back(node.is_generator());
    if (node.is_generator()) {
      params_.emplace_back(node.generator());
      dim_ += 2;
    } else {
      params_.emplace_back(node.load());
      dim_ += 1;
    }
  }
  auto index_of = [&](const NodeId& id) {
    for (std::size_t n = 0; n < grid.nodes.size(); ++n) {
      if (grid.nodes[n].id == id) return n;
    }
    throw GridError("edges", "unknown node '" + id + "'");
  };
  for (const auto& e : grid.edges) branches_.push_back({index_of(e.i), index_of(e.j), e.coupling});
}

Eigen::VectorXd CoupledSystem::pack(const PostFaultState& x) const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(dim_));
  for (std::size_t k = 0; k < ids_.size(); ++k) {
    auto it = x.nodes.find(ids_[k]);
    if (it == x.nodes.end()) throw AssessError("state is missing node '" + ids_[k] + "'");
    const auto o = static_cast<Eigen::Index>(offset_[k]);
    v[o] = it->second.delta;
    if (gen_[k]) {
      if (!it->second.omega) throw AssessError("generator '" + ids_[k] + "' state is missing omega");
      v[o + 1] = *it->second.omega;
    }
  }
  return v;
}

PostFaultState CoupledSystem::unpack(const Eigen::VectorXd& v) const {
  PostFaultState x;
  for (std::size_t k = 0; k < ids_.size(); ++k) {
    const auto o = static_cast<Eigen::Index>(offset_[k]);
    NodeState s{v[o], std::nullopt};
    if (gen_[k]) s.omega = v[o + 1];
    x.nodes.emplace(ids_[k], s);
  }
  return x;
}

std::vector<double> CoupledSystem::all_angles(const Eigen::VectorXd& v) const {
  std::vector<double> angles(fixed_angle_);
  for (std::size_t n = 0; n < angles.size(); ++n) {
    if (dynamic_of_grid_[n] >= 0) {
      angles[n] = v[static_cast<Eigen::Index>(offset_[static_cast<std::size_t>(dynamic_of_grid_[n])])];
    }
  }
  return angles;
}

Eigen::VectorXd CoupledSystem::rhs(const Eigen::VectorXd& v) const {
  const std::vector<double> angle = all_angles(v);
  std::vector<double> flow(angle.size(), 0.0);  // sum_j a_ij sin(theta_i - theta_j)
  for (const auto& b : branches_) {
    const double s = b.coupling * std::sin(angle[b.from] - angle[b.to]);
    flow[b.from] += s;
    flow[b.to] -= s;
  }
  Eigen::VectorXd dv(v.size());
  for (std::size_t n = 0; n < angle.size(); ++n) {
    const int k = dynamic_of_grid_[n];
    if (k < 0) continue;
    const auto o = static_cast<Eigen::Index>(offset_[static_cast<std::size_t>(k)]);
    const auto& p = params_[static_cast<std::size_t>(k)];
    if (const auto* g = std::get_if<GeneratorParams>(&p)) {
      dv[o] = v[o + 1];
      dv[o + 1] = (-g->damping * v[o + 1] - flow[n] + g->mech_power) / g->inertia;
    } else {
      const auto& l = std::get<LoadParams>(p);
      dv[o] = (-flow[n] - l.demand) / l.damping;
    }
  }
  return dv;
}

namespace {

template <int N>
void record(Trajectory& traj, const Solution<N>& sol) {
  traj.t = sol.t;
  traj.x.reserve(sol.x.size());
  for (const auto& x : sol.x) traj.x.emplace_back(x.data(), x.data() + x.size());
  traj.finite = sol.termination.reason != StopReason::NonFinite;
}

}  // namespace

Trajectory simulate_postfault(const GridSpec& grid, const PostFaultState& x0, double t_end,
                              const IntegratorOptions& opts) {
  check_state(grid, x0);
  const CoupledSystem sys(grid);
  Trajectory traj;
  traj.nodes = sys.nodes();
  for (std::size_t k = 0; k < traj.nodes.size(); ++k) {
    traj.has_omega.push_back(sys.is_generator(k));
    traj.offset.push_back(sys.offset(k));
  }

  std::vector<bool> violated(traj.nodes.size(), false);
  auto note = [&](std::size_t k, double t, Bound b) {
    if (violated[k]) return;
    violated[k] = true;
    traj.violations.push_back({t, traj.nodes[k], b});
  };

  const Eigen::VectorXd v0 = sys.pack(x0);
  std::vector<Event<Eigen::Dynamic>> events;
  for (std::size_t k = 0; k < traj.nodes.size(); ++k) {
    const AngleBounds bounds = grid.at(traj.nodes[k]).bounds;
    const auto o = static_cast<Eigen::Index>(sys.offset(k));
    if (v0[o] > bounds.upper) note(k, 0.0, Bound::Upper);
    if (v0[o] < bounds.lower) note(k, 0.0, Bound::Lower);
    events.push_back({traj.nodes[k] + ".upper",
                      [o, bounds](double, const Eigen::VectorXd& v) { return v[o] - bounds.upper; },
                      [&note, k](double t, const Eigen::VectorXd&) {
                        note(k, t, Bound::Upper);
                        return EventAction::Continue;
                      }});
    events.push_back({traj.nodes[k] + ".lower",
                      [o, bounds](double, const Eigen::VectorXd& v) { return bounds.lower - v[o]; },
                      [&note, k](double t, const Eigen::VectorXd&) {
                        note(k, t, Bound::Lower);
                        return EventAction::Continue;
                      }});
  }

  auto rhs = [&sys](double, const Eigen::VectorXd& v) { return sys.rhs(v); };
  const Solution<Eigen::Dynamic> sol =
      integrate<Eigen::Dynamic>(rhs, v0, Direction::Forward, t_end, opts, events);
  record(traj, sol);
  return traj;
}

namespace {

Push probe_push(ProbeStrategy strategy, double motion) {
  switch (strategy) {
    case ProbeStrategy::PushUp: return Push::Raise;
    case ProbeStrategy::PushDown: return Push::Lower;
    case ProbeStrategy::Pump: break;
  }
  return motion >= 0.0 ? Push::Raise : Push::Lower;
}

template <int N>
Trajectory run_probe(const DecoupledNode& node, const StateVec<N>& x0, ProbeStrategy strategy,
                     double t_end, const IntegratorOptions& opts) {
  const AngleBounds b = node.bounds();
  Trajectory traj;
  traj.nodes = {node.id()};
  traj.has_omega = {N == 2};
  traj.offset = {0};

  if (x0[0] > b.upper || x0[0] < b.lower) {
    traj.t = {0.0};
    traj.x = {std::vector<double>(x0.data(), x0.data() + N)};
    traj.violations.push_back({0.0, node.id(), x0[0] > b.upper ? Bound::Upper : Bound::Lower});
    return traj;
  }

  // Pump switches on omega for generators and on the box midpoint for loads.
  const double mid = 0.5 * (b.lower + b.upper);
  auto motion = [&](const StateVec<N>& x) {
    if constexpr (N == 2) {
      return x[1];
    } else {
      return x[0] - mid;
    }
  };

  auto rhs = [&](double, const StateVec<N>& x) -> StateVec<N> {
    const CouplingSums sums = coupling_sums(node, x[0], probe_push(strategy, motion(x)));
    StateVec<N> dx;
    if constexpr (N == 2) {
      dx << x[1], generator_accel(node.node.generator(), x[1], sums);
    } else {
      const LoadParams& l = node.node.load();
      dx << (-sums.sin_sum - l.demand) / l.damping;
    }
    return dx;
  };

  std::vector<Event<N>> events;
  events.push_back({"upper", [&](double, const StateVec<N>& x) { return x[0] - b.upper; }, {}});
  events.push_back({"lower", [&](double, const StateVec<N>& x) { return b.lower - x[0]; }, {}});
  if (strategy == ProbeStrategy::Pump) {
    events.push_back({"switch", [&](double, const StateVec<N>& x) { return motion(x); },
                      [](double, const StateVec<N>&) { return EventAction::Continue; }});
  }
  const Solution<N> sol = integrate<N>(rhs, x0, Direction::Forward, t_end, opts, events);
  record(traj, sol);
  if (sol.termination.reason == StopReason::Event && sol.termination.event < 2) {
    traj.violations.push_back({sol.termination.t, node.id(),
                               sol.termination.event == 0 ? Bound::Upper : Bound::Lower});
  }
  return traj;
}

}  // namespace

Trajectory worst_case_probe(const DecoupledNode& node, const NodeState& s0, ProbeStrategy strategy,
                            double t_end, const IntegratorOptions& opts) {
  if (node.is_generator()) {
    StateVec<2> x0;
    x0 << s0.delta, s0.omega.value_or(0.0);
    return run_probe<2>(node, x0, strategy, t_end, opts);
  }
  StateVec<1> x0;
  x0 << s0.delta;
  return run_probe<1>(node, x0, strategy, t_end, opts);
}

ProbeReport cross_validate_mrpi(const DecoupledNode& node, const Region& mrpi, const ProbeOptions& opts) {
  ProbeReport report;
  const geometry::Box& box = mrpi.box;
  const int n = opts.grid;
  constexpr ProbeStrategy strategies[] = {ProbeStrategy::PushUp, ProbeStrategy::PushDown,
                                          ProbeStrategy::Pump};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const GenState s{box.xmin + (i + 0.5) * (box.xmax - box.xmin) / n,
                       box.ymin + (j + 0.5) * (box.ymax - box.ymin) / n};
      ++report.samples;
      const bool deep = membership(mrpi, s, opts.tol) == Membership::Inside &&
                        geometry::boundary_distance(mrpi.boundary, {s.delta, s.omega}) >= 5.0 * opts.tol;
      if (deep) ++report.inside;
      bool safe = true;
      for (ProbeStrategy strategy : strategies) {
        const Trajectory t = worst_case_probe(node, {s.delta, s.omega}, strategy, opts.horizon, opts.integrator);
        if (t.first_violation()) {
          safe = false;
          if (deep) {
            report.disagreements.push_back(
                {s, "inside the MRPI but " + std::string(to_string(strategy)) + " violates at t = " +
                        std::to_string(t.first_violation()->t)});
          }
          break;
        }
      }
      if (safe) {
        ++report.probe_safe;
        if (mrpi.empty) report.disagreements.push_back({s, "MRPI reported empty but no probe violates"});
      }
    }
  }
  if (!mrpi.empty && report.probe_safe == 0) {
    report.disagreements.push_back({{}, "MRPI reported non-empty but every grid point is driven out"});
  }
  return report;
}

}  // namespace gridbarrier
