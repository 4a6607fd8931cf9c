#pragma once

// MRPI and admissible intervals of first-order load nodes.
//
// For a scalar node both sets are intervals inside [delta_min, delta_max].
// Each bound is the extreme angle at which the worst (or best) achievable
// drift still points back into the set:
//
//   MRPI lower        = min delta  s.t.  min_d delta' >= 0
//   MRPI upper        = max delta  s.t.  max_d delta' <= 0
//   admissible lower  = min delta  s.t.  max_d delta' >= 0
//   admissible upper  = max delta  s.t.  min_d delta' <= 0

#include <numbers>
#include <optional>

#include "gridbarrier/dynamics.hpp"
#include "gridbarrier/model.hpp"

namespace gridbarrier {

enum class RateExtreme { Min, Max };

/// min_d or max_d of delta' at `delta`, in closed form per neighbour.
double extremal_rate(const DecoupledNode& node, double delta, RateExtreme which);

struct LoadInterval {
  SetKind kind = SetKind::Mrpi;
  std::optional<double> lower;  // nullopt: infeasible
  std::optional<double> upper;
  bool nonempty = false;
  double resolution = 0.0;

  bool contains(double delta) const {
    return nonempty && *lower <= delta && delta <= *upper;
  }
  bool contains_strictly(double delta) const {
    return nonempty && *lower < delta && delta < *upper;
  }
};

inline constexpr double kDefaultLoadResolution = std::numbers::pi / 2000.0;
inline constexpr double kBoundRefineTol = 1e-10;

LoadInterval mrpi_interval(const DecoupledNode& node, double resolution = kDefaultLoadResolution);
LoadInterval admissible_interval(const DecoupledNode& node, double resolution = kDefaultLoadResolution);
LoadInterval load_interval(const DecoupledNode& node, SetKind kind,
                           double resolution = kDefaultLoadResolution);

}  // namespace gridbarrier
