#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "gridbarrier/assess.hpp"

namespace gridbarrier::cli {

struct RunConfig {
  std::string subcommand;
  std::string grid;
  std::vector<std::string> nodes;  // empty: every eligible node
  std::string kind = "both";       // mrpi | admissible | both
  IntegratorOptions integrator;
  double resolution = kDefaultLoadResolution;
  std::string out = "gridbarrier-out";
  std::string format = "csv";  // csv | json
  unsigned jobs = 0;           // 0: hardware concurrency
  bool curves = false;

  std::string state;   // classify, simulate
  std::string states;  // screen
  double t_end = 20.0;
  std::size_t stride = 1;
};

/// Bad input: unreadable or invalid input file, unknown node, bad option.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Output could not be written.
class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int cmd_compute_sets(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_load_sets(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_classify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_screen(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace gridbarrier::cli
