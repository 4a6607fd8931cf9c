// Regenerates the committed six-bus post-fault states in data/.
//
//   gridbarrier-fixtures <data-dir>
//
// safe state: generators at s*(0.5, 1.0), the load at s*0.5, for the largest
// s in {1.00, 0.95, ..., 0.05} such that every node lies at least kMargin
// inside its MRPI (inside its admissible set where the MRPI is empty) and a
// 100 s coupled simulation records no violation.
//
// fault state: the safe state with generator 1 moved to the first grid point
// (omega ascending, then delta ascending; pitch 0.1 rad and 0.25 rad/s) that
// lies at least kMargin outside its admissible set and whose 20 s coupled
// simulation violates delta_1 <= pi/2 while no other node violates.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "gridbarrier/assess.hpp"
#include "gridbarrier/io.hpp"

using namespace gridbarrier;

namespace {

constexpr double kMargin = 0.05;

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

void dump(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
  if (!f) throw std::runtime_error("cannot write " + path);
}

bool deep_inside(const NodeSets& sets, const NodeState& s) {
  if (const auto* g = std::get_if<GeneratorSets>(&sets)) {
    const Region& r = g->mrpi.empty ? g->admissible : g->mrpi;
    return membership(r, {s.delta, *s.omega}, kMargin) == Membership::Inside;
  }
  const auto& l = std::get<LoadSets>(sets);
  const LoadInterval& i = l.mrpi.nonempty ? l.mrpi : l.admissible;
  return i.nonempty && *i.lower + kMargin < s.delta && s.delta < *i.upper - kMargin;
}

std::optional<PostFaultState> search_safe(const GridSpec& grid, const GridSets& sets) {
  for (int step = 20; step >= 1; --step) {
    const double s = 0.05 * step;
    PostFaultState x;
    for (const auto& n : grid.nodes) {
      if (n.is_generator()) x.nodes[n.id] = {0.5 * s, 1.0 * s};
      if (n.is_load()) x.nodes[n.id] = {0.5 * s, std::nullopt};
    }
    bool ok = true;
    for (const auto& [id, st] : x.nodes) ok = ok && deep_inside(sets.at(id), st);
    if (!ok) continue;
    if (simulate_postfault(grid, x, 100.0).violations.empty()) return x;
  }
  return std::nullopt;
}

std::optional<PostFaultState> search_fault(const GridSpec& grid, const GridSets& sets, PostFaultState base,
                                           const NodeId& target) {
  const auto& a = std::get<GeneratorSets>(sets.at(target)).admissible;
  for (int wi = 1; wi <= 40; ++wi) {
    for (int di = 0; di <= 15; ++di) {
      const GenState s{0.1 * di, 0.25 * wi};
      if (membership(a, s, kMargin) != Membership::Outside) continue;
      base.nodes[target] = {s.delta, s.omega};
      const Trajectory tr = simulate_postfault(grid, base, 20.0);
      bool target_up = false, others = false;
      for (const auto& v : tr.violations) {
        if (v.node == target) target_up = v.bound == Bound::Upper;
        else others = true;
      }
      if (target_up && !others) return base;
    }
  }
  return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: gridbarrier-fixtures <data-dir>\n";
    return 2;
  }
  const std::string dir = argv[1];
  try {
    for (const std::string name : {"six_bus", "six_bus_damped"}) {
      const GridSpec grid = parse_grid(slurp(dir + "/" + name + ".json"));
      const GridSets sets = compute_grid_sets(grid);
      const auto safe = search_safe(grid, sets);
      if (!safe) throw std::runtime_error("no safe state found for " + name);
      dump(dir + "/" + name + "_safe_state.json", io::state_json(*safe));
      std::cout << name << "_safe_state.json\n";
      if (name != "six_bus") continue;
      const auto fault = search_fault(grid, sets, *safe, "G1");
      if (!fault) throw std::runtime_error("no fault state found for " + name);
      dump(dir + "/" + name + "_fault_state.json", io::state_json(*fault));
      std::cout << name << "_fault_state.json\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
