#pragma once

#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "gridbarrier/model.hpp"

#ifndef GRIDBARRIER_DATA_DIR
#error "GRIDBARRIER_DATA_DIR must point at the data/ fixtures"
#endif

namespace fixtures {

inline constexpr double kHalfPi = std::numbers::pi / 2.0;
inline constexpr double kLoadBound = std::numbers::pi / 3.7;

inline std::string data_path(const std::string& name) { return std::string(GRIDBARRIER_DATA_DIR) + "/" + name; }

inline std::string read(const std::string& name) {
  std::ifstream f(data_path(name));
  if (!f) throw std::runtime_error("missing fixture " + name);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

inline gridbarrier::GridSpec grid(const std::string& name) { return gridbarrier::parse_grid(read(name)); }

inline gridbarrier::GridSpec two_bus() { return grid("two_bus.json"); }
// Generator sees the load angle pinned at 0.
inline gridbarrier::GridSpec two_bus_pinned() { return grid("two_bus_pinned.json"); }
inline gridbarrier::GridSpec six_bus() { return grid("six_bus.json"); }
inline gridbarrier::GridSpec six_bus_damped() { return grid("six_bus_damped.json"); }

/// Two-bus variant with the generator's view of the load angle set to
/// [-bound, bound].
inline gridbarrier::GridSpec two_bus_with_load_view(double bound) {
  gridbarrier::GridSpec g = two_bus();
  g.edges[0].overrides = {{"L2", {-bound, bound}}};
  gridbarrier::validate(g);
  return g;
}

}  // namespace fixtures
