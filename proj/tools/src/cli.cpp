#include "cli.hpp"

#include <ostream>

#include "CLI11.hpp"
#include "commands.hpp"

#ifndef GRIDBARRIER_VERSION
#define GRIDBARRIER_VERSION "unknown"
#endif

namespace gridbarrier::cli {

namespace {

// Every flag can also be set through GRIDBARRIER_<NAME>, e.g. GRIDBARRIER_STEP.
constexpr const char* kEnvPrefix = "GRIDBARRIER_";

std::string env(const char* name) { return std::string(kEnvPrefix) + name; }

void add_grid(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--grid", cfg.grid, "Grid description (JSON)")->required()->envname(env("GRID"));
  sub->add_option("--out", cfg.out, "Output directory")->envname(env("OUT"));
  sub->add_option("--jobs", cfg.jobs, "Worker threads for per-node set computation (0: all cores)")
      ->envname(env("JOBS"));
}

void add_numerics(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--step", cfg.integrator.step, "RK4 step [s]")->envname(env("STEP"));
  sub->add_option("--t-back-max", cfg.integrator.t_back_max, "Backward tracing horizon [s]")
      ->envname(env("T_BACK_MAX"));
  sub->add_option("--omega-cap", cfg.integrator.omega_cap, "|omega| window and abort bound [rad/s]")
      ->envname(env("OMEGA_CAP"));
  sub->add_option("--resolution", cfg.resolution, "Load interval scan pitch [rad]")->envname(env("RESOLUTION"));
}

void add_set_flags(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--node", cfg.nodes, "Restrict to these node ids (repeatable)")->envname(env("NODE"));
  sub->add_option("--kind", cfg.kind, "mrpi, admissible or both")
      ->check(CLI::IsMember({"mrpi", "admissible", "both"}))
      ->envname(env("KIND"));
  sub->add_option("--format", cfg.format, "csv: polygon CSV plus JSON sidecar; json: sidecar only")
      ->check(CLI::IsMember({"csv", "json"}))
      ->envname(env("FORMAT"));
  sub->add_flag("--curves", cfg.curves, "Also write each traced barrier as t,delta,omega,l1,l2");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Safe sets and post-fault screening for swing-equation grids", "gridbarrier"};
  app.require_subcommand(1);
  app.set_version_flag("--version", GRIDBARRIER_VERSION);

  auto* compute = app.add_subcommand("compute-sets", "MRPI and admissible sets for every dynamic node");
  add_grid(compute, cfg);
  add_numerics(compute, cfg);
  add_set_flags(compute, cfg);

  auto* loads = app.add_subcommand("load-sets", "MRPI and admissible intervals for load nodes");
  add_grid(loads, cfg);
  add_numerics(loads, cfg);
  add_set_flags(loads, cfg);

  auto* classify = app.add_subcommand("classify", "Classify one post-fault state (exit 0/10/20)");
  add_grid(classify, cfg);
  add_numerics(classify, cfg);
  classify->add_option("--state", cfg.state, "Post-fault state (JSON)")->required()->envname(env("STATE"));

  auto* simulate = app.add_subcommand("simulate", "Simulate the coupled post-fault network");
  add_grid(simulate, cfg);
  add_numerics(simulate, cfg);
  simulate->add_option("--state", cfg.state, "Initial state (JSON)")->required()->envname(env("STATE"));
  simulate->add_option("--t-end", cfg.t_end, "Simulated time [s]")->envname(env("T_END"));
  simulate->add_option("--stride", cfg.stride, "Write every n-th step")
      ->check(CLI::PositiveNumber)
      ->envname(env("STRIDE"));

  auto* screen = app.add_subcommand("screen", "Classify a batch of post-fault states");
  add_grid(screen, cfg);
  add_numerics(screen, cfg);
  screen->add_option("--states", cfg.states, "JSON array of states")->required()->envname(env("STATES"));

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("gridbarrier");

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << GRIDBARRIER_VERSION << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  try {
    if (cfg.subcommand == "compute-sets") return cmd_compute_sets(cfg, out, err);
    if (cfg.subcommand == "load-sets") return cmd_load_sets(cfg, out, err);
    if (cfg.subcommand == "classify") return cmd_classify(cfg, out, err);
    if (cfg.subcommand == "simulate") return cmd_simulate(cfg, out, err);
    return cmd_screen(cfg, out, err);
  } catch (const GridError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const AssessError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const OutputError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
}

}  // namespace gridbarrier::cli
