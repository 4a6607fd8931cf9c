#pragma once

// Generator-node MRPI and admissible sets from barrier trajectories.
//
// Each set is bounded by at most two barrier curves, one ending tangentially
// on each angle constraint at omega = 0. A curve is traced backward in time
// from its tangency point together with the adjoint, under the pointwise
// extremal disturbance selected by the sign of the adjoint's omega component.
// The region is then the intersection of the two "safe sides", each bounded
// by one curve closed along the constraint box.

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gridbarrier/dynamics.hpp"
#include "gridbarrier/geometry.hpp"
#include "gridbarrier/integrator.hpp"
#include "gridbarrier/model.hpp"

namespace gridbarrier {

enum class Side { Upper, Lower };

std::string_view to_string(Side side);

struct TangencyPoint {
  GenState point;
  Side side = Side::Upper;
  Adjoint final_adjoint;  // gradient of the active constraint
};

std::vector<TangencyPoint> tangency_points(const DecoupledNode& node);

struct ExistenceResult {
  bool exists = false;
  /// Positive exactly when the candidate exists: the evaluated sum for the
  /// upper side, its negation for the lower side.
  double margin = 0.0;
};

ExistenceResult existence_check(const DecoupledNode& node, const TangencyPoint& tp, SetKind kind);

enum class CurveTermination {
  BoxExit,                  // left through the constraint it is tangent to
  ClosedOnOtherConstraint,  // left through the opposite angle constraint
  OmegaCap,                 // left the |omega| presentation window
  Bounce,
  TimeCap,
};

std::string_view to_string(CurveTermination t);

struct CurvePoint {
  double t = 0.0;  // <= 0, decreasing along the curve
  GenState state;
  Adjoint adjoint;
};

struct BarrierCurve {
  SetKind kind = SetKind::Mrpi;
  Side side = Side::Upper;
  std::vector<CurvePoint> points;
  CurveTermination termination = CurveTermination::TimeCap;
  double hamiltonian_residual_max = 0.0;
  int switches = 0;  // adjoint sign changes stepped across without a bounce

  /// Whether the curve ends on the boundary of the constraint box.
  bool closes() const {
    return termination == CurveTermination::BoxExit ||
           termination == CurveTermination::ClosedOnOtherConstraint ||
           termination == CurveTermination::OmegaCap;
  }
};

/// Non-finite states or a collapsed adjoint during tracing.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Traces the candidate barrier ending at `tp`. Throws NumericalError.
BarrierCurve trace_barrier(const DecoupledNode& node, const TangencyPoint& tp, SetKind kind,
                           const IntegratorOptions& opts = {});

enum class EmptyReason {
  None,
  MissingCurve,   // existence check failed on a side
  Bounce,         // curve truncated at a bounce before reaching the box boundary
  Unclosed,       // curve hit the time cap inside the box
  Degenerate,     // zero-area or empty intersection
  SelfIntersecting,
};

std::string_view to_string(EmptyReason r);

struct Region {
  SetKind kind = SetKind::Mrpi;
  geometry::Box box;                // [delta_min, delta_max] x [-omega_cap, omega_cap]
  geometry::Ring boundary;          // counter-clockwise, empty when `empty`
  bool empty = true;
  EmptyReason reason = EmptyReason::MissingCurve;
  std::vector<BarrierCurve> curves;  // provenance
  std::vector<std::string> notes;

  double area() const { return empty ? 0.0 : geometry::signed_area(boundary); }
};

Region assemble_region(const DecoupledNode& node, std::span<const BarrierCurve> curves,
                       SetKind kind, const IntegratorOptions& opts = {});

enum class Membership { Inside, Boundary, Outside };

std::string_view to_string(Membership m);

Membership membership(const Region& region, GenState s, double tol);

/// Tangency points, existence filter, tracing, and assembly for one kind.
Region compute_generator_region(const DecoupledNode& node, SetKind kind,
                                const IntegratorOptions& opts = {});

}  // namespace gridbarrier
