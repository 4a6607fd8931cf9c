#include "gridbarrier/dynamics.hpp"

#include <stdexcept>
#include <string>

namespace gridbarrier {

std::string_view to_string(SetKind kind) {
  return kind == SetKind::Mrpi ? "mrpi" : "admissible";
}

SetKind set_kind_from_string(std::string_view text) {
  if (text == "mrpi") return SetKind::Mrpi;
  if (text == "admissible") return SetKind::Admissible;
  throw std::invalid_argument("unknown set kind '" + std::string(text) + "'");
}

namespace {

void add_fixed(const DecoupledNode& node, double delta, CouplingSums& sums) {
  for (const auto& f : node.fixed) {
    sums.sin_sum += f.coupling * std::sin(delta - f.angle);
    sums.cos_sum += f.coupling * std::cos(delta - f.angle);
  }
}

void check_size(const DecoupledNode& node, std::span<const double> d) {
  if (d.size() != node.variable.size()) {
    throw std::invalid_argument("disturbance vector has " + std::to_string(d.size()) +
                                " entries but node '" + node.id() + "' has " +
                                std::to_string(node.variable.size()) + " variable neighbours");
  }
}

}  // namespace

CouplingSums coupling_sums(const DecoupledNode& node, double delta, std::span<const double> d) {
  check_size(node, d);
  CouplingSums sums;
  for (std::size_t j = 0; j < d.size(); ++j) {
    const double a = node.variable[j].coupling;
    sums.sin_sum += a * std::sin(delta - d[j]);
    sums.cos_sum += a * std::cos(delta - d[j]);
  }
  add_fixed(node, delta, sums);
  return sums;
}

CouplingSums coupling_sums(const DecoupledNode& node, double delta, Push push) {
  CouplingSums sums;
  for (const auto& nb : node.variable) {
    const double d = pushed_angle(push, delta, nb.interval);
    sums.sin_sum += nb.coupling * std::sin(delta - d);
    sums.cos_sum += nb.coupling * std::cos(delta - d);
  }
  add_fixed(node, delta, sums);
  return sums;
}

GenDerivative generator_rhs(const DecoupledNode& node, GenState s, std::span<const double> d) {
  if (!node.is_generator()) throw std::invalid_argument("generator_rhs called on a non-generator node");
  const CouplingSums sums = coupling_sums(node, s.delta, d);
  return {s.omega, generator_accel(node.node.generator(), s.omega, sums)};
}

double load_rhs(const DecoupledNode& node, double delta, std::span<const double> d) {
  if (!node.is_load()) throw std::invalid_argument("load_rhs called on a non-load node");
  const CouplingSums sums = coupling_sums(node, delta, d);
  const LoadParams& l = node.node.load();
  return (-sums.sin_sum - l.demand) / l.damping;
}

Adjoint adjoint_rhs(const DecoupledNode& node, GenState s, std::span<const double> d, Adjoint lam) {
  if (!node.is_generator()) throw std::invalid_argument("adjoint_rhs called on a non-generator node");
  const GeneratorParams& g = node.node.generator();
  const CouplingSums sums = coupling_sums(node, s.delta, d);
  // lambda' = -(df/dx)^T lambda
  return {sums.cos_sum / g.inertia * lam.l2, -lam.l1 + g.damping / g.inertia * lam.l2};
}

std::vector<double> extremal_disturbance(SetKind kind, double delta, double l2,
                                         std::span<const AngleBounds> intervals) {
  const Push push = extremal_push(kind, l2);
  std::vector<double> d;
  d.reserve(intervals.size());
  for (const auto& iv : intervals) d.push_back(pushed_angle(push, delta, iv));
  return d;
}

double hamiltonian(Adjoint lam, GenDerivative f) {
  return lam.l1 * f.delta_dot + lam.l2 * f.omega_dot;
}

std::vector<AngleBounds> disturbance_intervals(const DecoupledNode& node) {
  std::vector<AngleBounds> out;
  out.reserve(node.variable.size());
  for (const auto& nb : node.variable) out.push_back(nb.interval);
  return out;
}

}  // namespace gridbarrier
