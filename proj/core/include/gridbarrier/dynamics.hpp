#pragma once

// Node vector fields, the generator adjoint system, and the extremal
// disturbance feedback that realizes the Hamiltonian max/min conditions.

#include <cmath>
#include <numbers>
#include <span>
#include <string_view>
#include <vector>

#include "gridbarrier/model.hpp"

namespace gridbarrier {

struct GenState {
  double delta = 0.0;  // rad
  double omega = 0.0;  // rad/s
  bool operator==(const GenState&) const = default;
};

struct GenDerivative {
  double delta_dot = 0.0;
  double omega_dot = 0.0;
};

/// Costate of the generator node. Only its direction matters.
struct Adjoint {
  double l1 = 0.0;
  double l2 = 0.0;

  double norm() const { return std::hypot(l1, l2); }
  bool operator==(const Adjoint&) const = default;
};

enum class SetKind { Mrpi, Admissible };

std::string_view to_string(SetKind kind);
SetKind set_kind_from_string(std::string_view text);

/// sat(x, upper, lower): clamp x into [lower, upper].
inline double sat(double x, double upper, double lower) {
  return x > upper ? upper : (x < lower ? lower : x);
}

/// Which saturated angle a disturbance takes relative to the node angle.
/// Raise: d = sat(delta + pi/2), minimizing sin(delta - d) and so pushing the
/// node's acceleration up. Lower: d = sat(delta - pi/2), pushing it down.
/// This is the exact optimum whenever the interval is symmetric about zero
/// and |delta| <= pi/2; an asymmetric interval reaching past the next
/// half-period can make the far endpoint better, which is not searched for.
enum class Push { Raise, Lower };

inline double pushed_angle(Push push, double delta, const AngleBounds& interval) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  return push == Push::Raise ? sat(delta + half_pi, interval.upper, interval.lower)
                             : sat(delta - half_pi, interval.upper, interval.lower);
}

/// Branch chosen by the barrier disturbance for a given sign of l2.
/// The tie l2 == 0 resolves to the "l2 >= 0" branch.
inline Push extremal_push(SetKind kind, double l2) {
  const bool nonneg = l2 >= 0.0;
  if (kind == SetKind::Mrpi) return nonneg ? Push::Raise : Push::Lower;
  return nonneg ? Push::Lower : Push::Raise;
}

/// Sums a * sin(delta - d) and a * cos(delta - d) over all neighbours,
/// variable and fixed.
struct CouplingSums {
  double sin_sum = 0.0;
  double cos_sum = 0.0;
};

/// Coupling sums with an explicit disturbance vector (one entry per variable
/// neighbour). Throws std::invalid_argument on a size mismatch.
CouplingSums coupling_sums(const DecoupledNode& node, double delta, std::span<const double> d);

/// Coupling sums with every variable neighbour pushed the same way.
CouplingSums coupling_sums(const DecoupledNode& node, double delta, Push push);

GenDerivative generator_rhs(const DecoupledNode& node, GenState s, std::span<const double> d);
double load_rhs(const DecoupledNode& node, double delta, std::span<const double> d);
Adjoint adjoint_rhs(const DecoupledNode& node, GenState s, std::span<const double> d, Adjoint lam);

/// Generator acceleration given precomputed coupling sums.
inline double generator_accel(const GeneratorParams& g, double omega, const CouplingSums& sums) {
  return (-g.damping * omega - sums.sin_sum + g.mech_power) / g.inertia;
}

/// Pointwise extremal disturbance for the barrier of `kind`.
std::vector<double> extremal_disturbance(SetKind kind, double delta, double l2,
                                         std::span<const AngleBounds> intervals);

double hamiltonian(Adjoint lam, GenDerivative f);

/// Per-neighbour disturbance intervals of a decoupled node.
std::vector<AngleBounds> disturbance_intervals(const DecoupledNode& node);

}  // namespace gridbarrier
