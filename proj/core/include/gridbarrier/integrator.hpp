#pragma once

// Fixed-step classical RK4 with bisection-localized events.
//
// Events are scalar functions of (t, x). A strict sign change of any event
// value across a step splits the step: the crossing is bracketed by bisection
// on the sub-step length until the bracket is below `event_tol` seconds, and
// the integrator lands just past the crossing. The event's handler then
// decides whether to stop or continue. Handlers that continue are how
// switching surfaces (discontinuous feedback) are stepped across without
// smearing a switch over a whole RK4 step.

#include <Eigen/Core>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gridbarrier {

struct IntegratorOptions {
  double step = 1e-3;         // s
  double t_back_max = 50.0;   // s
  double omega_cap = 10.0;    // rad/s
  double box_margin = 1e-9;   // rad
  double event_tol = 1e-10;   // s

  /// Throws std::invalid_argument unless every field is positive and finite.
  void validate() const {
    for (double v : {step, t_back_max, omega_cap, box_margin, event_tol}) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument("integrator options must be positive and finite");
      }
    }
  }
};

enum class Direction { Forward, Backward };

template <int N>
using StateVec = Eigen::Matrix<double, N, 1>;

enum class EventAction { Continue, Stop };

template <int N>
struct Event {
  std::string name;
  std::function<double(double, const StateVec<N>&)> value;
  /// Called at the localized crossing. Empty means Stop.
  std::function<EventAction(double, const StateVec<N>&)> on_trigger;
};

enum class StopReason { Horizon, Event, NonFinite };

struct Termination {
  StopReason reason = StopReason::Horizon;
  int event = -1;  // index into the event list when reason == Event
  std::string event_name;
  double t = 0.0;
};

template <int N>
struct Solution {
  std::vector<double> t;
  std::vector<StateVec<N>> x;
  Termination termination;
};

namespace detail {

template <int N, class Rhs>
StateVec<N> rk4_step(Rhs& rhs, double t, const StateVec<N>& x, double h) {
  const StateVec<N> k1 = rhs(t, x);
  const StateVec<N> k2 = rhs(t + 0.5 * h, StateVec<N>(x + (0.5 * h) * k1));
  const StateVec<N> k3 = rhs(t + 0.5 * h, StateVec<N>(x + (0.5 * h) * k2));
  const StateVec<N> k4 = rhs(t + h, StateVec<N>(x + h * k3));
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

inline bool strict_sign_change(double a, double b) {
  return (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0);
}

}  // namespace detail

/// Integrates dx/dt = rhs(t, x) from t = 0 over `horizon` seconds of
/// (signed) time in `direction`. Backward runs report negative times.
/// `project`, if set, is applied to every accepted state (e.g. to rescale a
/// homogeneous component); it must not change any event's sign.
template <int N, class Rhs>
Solution<N> integrate(Rhs&& rhs, const StateVec<N>& x0, Direction direction, double horizon,
                      const IntegratorOptions& opts, std::span<const Event<N>> events = {},
                      const std::function<void(StateVec<N>&)>& project = {}) {
  opts.validate();
  if (!(horizon >= 0.0)) throw std::invalid_argument("integration horizon must be nonnegative");
  const double sign = direction == Direction::Forward ? 1.0 : -1.0;

  Solution<N> sol;
  StateVec<N> x = x0;
  if (project) project(x);
  double t = 0.0;
  sol.t.push_back(t);
  sol.x.push_back(x);
  if (!x.allFinite()) {
    sol.termination = {StopReason::NonFinite, -1, {}, t};
    return sol;
  }

  std::vector<double> g(events.size());
  for (std::size_t e = 0; e < events.size(); ++e) g[e] = events[e].value(t, x);

  const double h = opts.step;
  double elapsed = 0.0;
  while (elapsed < horizon) {
    const double remaining = horizon - elapsed;
    const double h_abs = remaining < h * (1.0 + 1e-12) ? remaining : h;
    const double hs = sign * h_abs;

    StateVec<N> xn = detail::rk4_step<N>(rhs, t, x, hs);
    if (!xn.allFinite()) {
      sol.termination = {StopReason::NonFinite, -1, {}, t};
      return sol;
    }

    // Earliest crossing among all events within this step.
    int hit = -1;
    double hit_theta = 2.0;
    for (std::size_t e = 0; e < events.size(); ++e) {
      const double gn = events[e].value(t + hs, xn);
      if (!detail::strict_sign_change(g[e], gn)) continue;
      double lo = 0.0;
      double hi = 1.0;
      while ((hi - lo) * h_abs > opts.event_tol) {
        const double mid = 0.5 * (lo + hi);
        const StateVec<N> xm = detail::rk4_step<N>(rhs, t, x, mid * hs);
        const double gm = events[e].value(t + mid * hs, xm);
        if (detail::strict_sign_change(g[e], gm) || gm == 0.0) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      if (hi < hit_theta) {
        hit_theta = hi;
        hit = static_cast<int>(e);
      }
    }

    double advanced = h_abs;
    if (hit >= 0 && hit_theta < 1.0) {
      xn = detail::rk4_step<N>(rhs, t, x, hit_theta * hs);
      advanced = hit_theta * h_abs;
    }
    if (project) project(xn);
    x = xn;
    elapsed = (hit >= 0 && hit_theta < 1.0) ? elapsed + advanced : elapsed + h_abs;
    t = sign * elapsed;
    sol.t.push_back(t);
    sol.x.push_back(x);
    if (!x.allFinite()) {
      sol.t.pop_back();
      sol.x.pop_back();
      sol.termination = {StopReason::NonFinite, -1, {}, sol.t.back()};
      return sol;
    }

    if (hit >= 0) {
      const auto& ev = events[static_cast<std::size_t>(hit)];
      const EventAction action = ev.on_trigger ? ev.on_trigger(t, x) : EventAction::Stop;
      if (action == EventAction::Stop) {
        sol.termination = {StopReason::Event, hit, ev.name, t};
        return sol;
      }
    }
    for (std::size_t e = 0; e < events.size(); ++e) g[e] = events[e].value(t, x);
  }
  sol.termination = {StopReason::Horizon, -1, {}, t};
  return sol;
}

template <int N, class Rhs>
Solution<N> integrate(Rhs&& rhs, const StateVec<N>& x0, Direction direction, double horizon,
                      const IntegratorOptions& opts, const std::vector<Event<N>>& events,
                      const std::function<void(StateVec<N>&)>& project = {}) {
  return integrate<N>(std::forward<Rhs>(rhs), x0, direction, horizon, opts,
                      std::span<const Event<N>>(events), project);
}

}  // namespace gridbarrier
