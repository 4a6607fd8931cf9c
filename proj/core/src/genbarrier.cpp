#include "gridbarrier/genbarrier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace gridbarrier {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
// |omega| below which an adjoint switch counts as happening on the delta axis.
constexpr double kAxisZero = 1e-6;
constexpr double kAdjointFloor = 1e-12;
constexpr double kMinArea = 1e-12;

void require_generator(const DecoupledNode& node) {
  if (!node.is_generator()) {
    throw std::invalid_argument("node '" + node.id() + "' is not a generator");
  }
}

}  // namespace

std::string_view to_string(Side side) { return side == Side::Upper ? "upper" : "lower"; }

std::string_view to_string(CurveTermination t) {
  switch (t) {
    case CurveTermination::BoxExit: return "box_exit";
    case CurveTermination::ClosedOnOtherConstraint: return "closed_on_other_constraint";
    case CurveTermination::OmegaCap: return "omega_cap";
    case CurveTermination::Bounce: return "bounce";
    case CurveTermination::TimeCap: return "time_cap";
  }
  return "unknown";
}

std::string_view to_string(EmptyReason r) {
  switch (r) {
    case EmptyReason::None: return "none";
    case EmptyReason::MissingCurve: return "missing_curve";
    case EmptyReason::Bounce: return "bounce";
    case EmptyReason::Unclosed: return "unclosed";
    case EmptyReason::Degenerate: return "degenerate";
    case EmptyReason::SelfIntersecting: return "self_intersecting";
  }
  return "unknown";
}

std::string_view to_string(Membership m) {
  switch (m) {
    case Membership::Inside: return "inside";
    case Membership::Boundary: return "boundary";
    case Membership::Outside: return "outside";
  }
  return "unknown";
}

std::vector<TangencyPoint> tangency_points(const DecoupledNode& node) {
  require_generator(node);
  return {
      {{node.bounds().upper, 0.0}, Side::Upper, {1.0, 0.0}},
      {{node.bounds().lower, 0.0}, Side::Lower, {-1.0, 0.0}},
  };
}

ExistenceResult existence_check(const DecoupledNode& node, const TangencyPoint& tp, SetKind kind) {
  require_generator(node);
  // At the final time l2 = 0; the upper side takes the "l2 >= 0" branch and
  // the lower side the branch its adjoint enters going backward (l2 < 0).
  const Push push = extremal_push(kind, tp.side == Side::Upper ? 1.0 : -1.0);
  const CouplingSums sums = coupling_sums(node, tp.point.delta, push);
  const double value = sums.sin_sum - node.node.generator().mech_power;
  const double margin = tp.side == Side::Upper ? value : -value;
  return {margin > 0.0, margin};
}

BarrierCurve trace_barrier(const DecoupledNode& node, const TangencyPoint& tp, SetKind kind,
                           const IntegratorOptions& opts) {
  require_generator(node);
  opts.validate();
  const GeneratorParams& gen = node.node.generator();
  const AngleBounds box = node.bounds();
  const double tie = tp.side == Side::Upper ? 1.0 : -1.0;

  using X = StateVec<4>;  // delta, omega, l1, l2
  auto push_of = [&](double l2) { return extremal_push(kind, l2 == 0.0 ? tie : l2); };
  // The branch is held fixed within a step and flipped by the switch event, so
  // no RK stage evaluates the feedback on the far side of the discontinuity.
  Push mode = push_of(0.0);
  auto rhs = [&](double, const X& x) -> X {
    const CouplingSums sums = coupling_sums(node, x[0], mode);
    X dx;
    dx << x[1], generator_accel(gen, x[1], sums), sums.cos_sum / gen.inertia * x[3],
        -x[2] + gen.damping / gen.inertia * x[3];
    return dx;
  };

  bool bounced = false;
  int switches = 0;
  std::vector<Event<4>> events;
  events.push_back({"delta_max", [&](double, const X& x) { return x[0] - (box.upper + opts.box_margin); }, {}});
  events.push_back({"delta_min", [&](double, const X& x) { return (box.lower - opts.box_margin) - x[0]; }, {}});
  events.push_back({"omega_cap", [&](double, const X& x) { return std::abs(x[1]) - opts.omega_cap; }, {}});
  events.push_back({"adjoint_switch", [](double, const X& x) { return x[3]; },
                    [&](double, const X& x) {
                      const double raise = generator_accel(gen, x[1], coupling_sums(node, x[0], Push::Raise));
                      const double lower = generator_accel(gen, x[1], coupling_sums(node, x[0], Push::Lower));
                      if (std::abs(x[1]) <= kAxisZero && raise * lower < 0.0) {
                        bounced = true;
                        return EventAction::Stop;
                      }
                      ++switches;
                      mode = mode == Push::Raise ? Push::Lower : Push::Raise;
                      return EventAction::Continue;
                    }});
  // Saturation breakpoints of the feedback are kinks of the vector field.
  std::set<double> kinks;
  for (const auto& nb : node.variable) {
    for (double b : {nb.interval.lower, nb.interval.upper}) {
      kinks.insert(b - kHalfPi);
      kinks.insert(b + kHalfPi);
    }
  }
  for (double k : kinks) {
    if (k <= box.lower || k >= box.upper) continue;
    events.push_back({"kink", [k](double, const X& x) { return x[0] - k; },
                      [](double, const X&) { return EventAction::Continue; }});
  }

  auto normalize = [](X& x) {
    const double n = std::hypot(x[2], x[3]);
    if (!(n > kAdjointFloor)) throw NumericalError("adjoint collapsed while tracing a barrier");
    x[2] /= n;
    x[3] /= n;
  };

  X x0;
  x0 << tp.point.delta, tp.point.omega, tp.final_adjoint.l1, tp.final_adjoint.l2;
  const Solution<4> sol =
      integrate<4>(rhs, x0, Direction::Backward, opts.t_back_max, opts, events, normalize);

  if (sol.termination.reason == StopReason::NonFinite) {
    throw NumericalError("non-finite state while tracing the " + std::string(to_string(tp.side)) +
                         " " + std::string(to_string(kind)) + " barrier of node '" + node.id() +
                         "' at t = " + std::to_string(sol.termination.t));
  }

  BarrierCurve curve;
  curve.kind = kind;
  curve.side = tp.side;
  curve.switches = switches;
  curve.points.reserve(sol.t.size());
  for (std::size_t i = 0; i < sol.t.size(); ++i) {
    const X& x = sol.x[i];
    CurvePoint p{sol.t[i], {x[0], x[1]}, {x[2], x[3]}};
    const double accel = generator_accel(gen, x[1], coupling_sums(node, x[0], push_of(x[3])));
    const double h = hamiltonian(p.adjoint, {x[1], accel});
    curve.hamiltonian_residual_max = std::max(curve.hamiltonian_residual_max, std::abs(h));
    curve.points.push_back(p);
  }

  if (sol.termination.reason == StopReason::Horizon) {
    curve.termination = CurveTermination::TimeCap;
  } else if (bounced) {
    curve.termination = CurveTermination::Bounce;
  } else if (sol.termination.event_name == "omega_cap") {
    curve.termination = CurveTermination::OmegaCap;
  } else {
    const bool exits_own = (sol.termination.event_name == "delta_max") == (tp.side == Side::Upper);
    curve.termination = exits_own ? CurveTermination::BoxExit : CurveTermination::ClosedOnOtherConstraint;
  }
  return curve;
}

namespace {

geometry::Box constraint_box(const DecoupledNode& node, const IntegratorOptions& opts) {
  return {node.bounds().lower, node.bounds().upper, -opts.omega_cap, opts.omega_cap};
}

/// The safe side of one closing curve: the curve from its tangency point to
/// its exit, closed counter-clockwise along the box back to the start.
geometry::Ring safe_side(const BarrierCurve& curve, const geometry::Box& box) {
  geometry::Ring ring;
  ring.reserve(curve.points.size() + 4);
  for (const auto& p : curve.points) ring.push_back({p.state.delta, p.state.omega});
  if (ring.size() >= 2 && !box.contains(ring.back())) {
    const geometry::Point exit = geometry::clip_to_box(box, ring[ring.size() - 2], ring.back());
    ring.back() = exit;
  }
  const geometry::Point start = ring.front();
  const geometry::Point exit = ring.back();
  for (const auto& c : geometry::box_walk_ccw(box, exit, start)) ring.push_back(c);
  // Drop consecutive duplicates (e.g. an exit exactly at a corner).
  ring.erase(std::unique(ring.begin(), ring.end()), ring.end());
  if (ring.size() > 1 && ring.front() == ring.back()) ring.pop_back();
  return ring;
}

Region empty_region(Region r, EmptyReason reason, std::string note = {}) {
  r.empty = true;
  r.reason = reason;
  r.boundary.clear();
  if (!note.empty()) r.notes.push_back(std::move(note));
  return r;
}

}  // namespace

Region assemble_region(const DecoupledNode& node, std::span<const BarrierCurve> curves, SetKind kind,
                       const IntegratorOptions& opts) {
  require_generator(node);
  Region region;
  region.kind = kind;
  region.box = constraint_box(node, opts);

  const BarrierCurve* by_side[2] = {nullptr, nullptr};
  for (const auto& c : curves) {
    if (c.kind != kind) continue;
    region.curves.push_back(c);
    by_side[c.side == Side::Upper ? 0 : 1] = &c;
  }

  std::vector<geometry::Ring> sides;
  for (int s = 0; s < 2; ++s) {
    const BarrierCurve* c = by_side[s];
    const std::string label(to_string(s == 0 ? Side::Upper : Side::Lower));
    if (c == nullptr || c->points.size() < 2) {
      return empty_region(std::move(region), EmptyReason::MissingCurve, "no " + label + " barrier");
    }
    if (c->termination == CurveTermination::Bounce) {
      return empty_region(std::move(region), EmptyReason::Bounce,
                          label + " barrier bounces before reaching the constraint box");
    }
    if (!c->closes()) {
      return empty_region(std::move(region), EmptyReason::Unclosed,
                          label + " barrier does not leave the constraint box");
    }
    geometry::Ring ring = safe_side(*c, region.box);
    if (geometry::signed_area(ring) <= kMinArea) {
      return empty_region(std::move(region), EmptyReason::Degenerate, label + " safe side has no area");
    }
    if (!geometry::is_simple(ring)) {
      return empty_region(std::move(region), EmptyReason::SelfIntersecting,
                          label + " safe side is not simple");
    }
    sides.push_back(std::move(ring));
  }

  std::vector<geometry::Ring> parts = geometry::intersect(sides[0], sides[1]);
  if (parts.empty()) return empty_region(std::move(region), EmptyReason::Degenerate, "safe sides are disjoint");
  auto largest = std::max_element(parts.begin(), parts.end(), [](const auto& a, const auto& b) {
    return geometry::signed_area(a) < geometry::signed_area(b);
  });
  if (geometry::signed_area(*largest) <= kMinArea) {
    return empty_region(std::move(region), EmptyReason::Degenerate, "intersection has no area");
  }
  if (parts.size() > 1) {
    region.notes.push_back("intersection has " + std::to_string(parts.size()) +
                           " components; kept the largest");
  }
  region.boundary = std::move(*largest);
  region.empty = false;
  region.reason = EmptyReason::None;
  return region;
}

Membership membership(const Region& region, GenState s, double tol) {
  if (region.empty || region.boundary.size() < 3) return Membership::Outside;
  const geometry::Point p{s.delta, s.omega};
  if (!region.box.contains(p, tol)) return Membership::Outside;
  if (geometry::boundary_distance(region.boundary, p) <= tol) return Membership::Boundary;
  return geometry::inside(region.boundary, p) ? Membership::Inside : Membership::Outside;
}

Region compute_generator_region(const DecoupledNode& node, SetKind kind, const IntegratorOptions& opts) {
  std::vector<BarrierCurve> curves;
  std::vector<std::string> notes;
  for (const auto& tp : tangency_points(node)) {
    const ExistenceResult ex = existence_check(node, tp, kind);
    if (!ex.exists) {
      notes.push_back(std::string(to_string(tp.side)) + " candidate fails the existence test (margin " +
                      std::to_string(ex.margin) + ")");
      continue;
    }
    curves.push_back(trace_barrier(node, tp, kind, opts));
  }
  Region region = assemble_region(node, curves, kind, opts);
  region.notes.insert(region.notes.begin(), notes.begin(), notes.end());
  return region;
}

}  // namespace gridbarrier
