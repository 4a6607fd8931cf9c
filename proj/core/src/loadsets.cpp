#include "gridbarrier/loadsets.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace gridbarrier {

double extremal_rate(const DecoupledNode& node, double delta, RateExtreme which) {
  if (!node.is_load()) throw std::invalid_argument("node '" + node.id() + "' is not a load");
  // The slowest drift maximizes every sin(delta - d); the fastest minimizes it.
  const Push push = which == RateExtreme::Min ? Push::Lower : Push::Raise;
  const CouplingSums sums = coupling_sums(node, delta, push);
  const LoadParams& l = node.node.load();
  return (-sums.sin_sum - l.demand) / l.damping;
}

namespace {

using Predicate = std::function<bool(double)>;

std::optional<double> smallest_feasible(double lo, double hi, double resolution, const Predicate& ok) {
  const auto n = static_cast<long>(std::ceil((hi - lo) / resolution));
  auto grid = [&](long i) { return i >= n ? hi : lo + static_cast<double>(i) * resolution; };
  for (long i = 0; i <= n; ++i) {
    if (!ok(grid(i))) continue;
    if (i == 0) return lo;
    double a = grid(i - 1);  // infeasible
    double b = grid(i);      // feasible
    while (b - a > kBoundRefineTol) {
      const double mid = 0.5 * (a + b);
      (ok(mid) ? b : a) = mid;
    }
    return b;
  }
  return std::nullopt;
}

std::optional<double> largest_feasible(double lo, double hi, double resolution, const Predicate& ok) {
  const auto n = static_cast<long>(std::ceil((hi - lo) / resolution));
  auto grid = [&](long i) { return i >= n ? lo : hi - static_cast<double>(i) * resolution; };
  for (long i = 0; i <= n; ++i) {
    if (!ok(grid(i))) continue;
    if (i == 0) return hi;
    double a = grid(i);      // feasible
    double b = grid(i - 1);  // infeasible
    while (b - a > kBoundRefineTol) {
      const double mid = 0.5 * (a + b);
      (ok(mid) ? a : b) = mid;
    }
    return a;
  }
  return std::nullopt;
}

}  // namespace

LoadInterval load_interval(const DecoupledNode& node, SetKind kind, double resolution) {
  if (!node.is_load()) throw std::invalid_argument("node '" + node.id() + "' is not a load");
  if (!(resolution > 0.0)) throw std::invalid_argument("resolution must be positive");
  const AngleBounds box = node.bounds();
  // MRPI: the worst drift must point inward; admissible: the best drift must.
  const RateExtreme at_lower = kind == SetKind::Mrpi ? RateExtreme::Min : RateExtreme::Max;
  const RateExtreme at_upper = kind == SetKind::Mrpi ? RateExtreme::Max : RateExtreme::Min;

  LoadInterval out;
  out.kind = kind;
  out.resolution = resolution;
  out.lower = smallest_feasible(box.lower, box.upper, resolution,
                                [&](double d) { return extremal_rate(node, d, at_lower) >= 0.0; });
  out.upper = largest_feasible(box.lower, box.upper, resolution,
                               [&](double d) { return extremal_rate(node, d, at_upper) <= 0.0; });
  out.nonempty = out.lower && out.upper && *out.lower <= *out.upper;
  return out;
}

LoadInterval mrpi_interval(const DecoupledNode& node, double resolution) {
  return load_interval(node, SetKind::Mrpi, resolution);
}

LoadInterval admissible_interval(const DecoupledNode& node, double resolution) {
  return load_interval(node, SetKind::Admissible, resolution);
}

}  // namespace gridbarrier
