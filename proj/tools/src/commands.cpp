#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "cli.hpp"
#include "gridbarrier/io.hpp"
#include "json.hpp"

#ifndef GRIDBARRIER_VERSION
#define GRIDBARRIER_VERSION "unknown"
#endif

namespace gridbarrier::cli {

namespace {

using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string read_input(const std::string& path, const char* what) {
  if (path.empty()) throw InputError(std::string("no ") + what + " file given");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(std::string("cannot read ") + what + " file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

// Node ids end up in file names.
std::string file_stem(const NodeId& id) {
  std::string s = id;
  for (char& c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
                    c == '-' || c == '.';
    if (!ok) c = '_';
  }
  return s;
}

class OutputDir {
 public:
  explicit OutputDir(fs::path root) : root_(std::move(root)) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec || !fs::is_directory(root_)) {
      throw OutputError("cannot create output directory '" + root_.string() + "'");
    }
  }

  void write(const std::string& name, const std::string& content) {
    const fs::path p = root_ / name;
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    f << content;
    f.close();
    if (!f) throw OutputError("cannot write '" + p.string() + "'");
    written_.push_back(name);
  }

  const std::vector<std::string>& written() const { return written_; }

 private:
  fs::path root_;
  std::vector<std::string> written_;
};

unsigned worker_count(unsigned requested, std::size_t tasks) {
  unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(tasks, 1)));
}

// Runs fn(0..n-1) on a small pool; results must be stored by index.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = worker_count(jobs, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::vector<SetKind> kinds_of(const std::string& kind) {
  if (kind == "mrpi") return {SetKind::Mrpi};
  if (kind == "admissible") return {SetKind::Admissible};
  if (kind == "both") return {SetKind::Mrpi, SetKind::Admissible};
  throw InputError("--kind must be mrpi, admissible or both");
}

void check_options(const RunConfig& cfg) {
  try {
    cfg.integrator.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  if (!(cfg.resolution > 0.0) || !std::isfinite(cfg.resolution)) {
    throw InputError("--resolution must be positive");
  }
  if (cfg.format != "csv" && cfg.format != "json") throw InputError("--format must be csv or json");
}

struct LoadedGrid {
  GridSpec spec;
  std::string path;
  std::string hash;
};

LoadedGrid load_grid(const RunConfig& cfg, std::ostream& err) {
  const std::string text = read_input(cfg.grid, "grid");
  LoadedGrid g{parse_grid(text), cfg.grid, fnv1a64(text)};
  for (const auto& w : g.spec.warnings) err << "warning: " << w << "\n";
  return g;
}

enum class Eligible { Dynamic, LoadsOnly };

std::vector<NodeId> select_nodes(const GridSpec& grid, const std::vector<std::string>& filter, Eligible which) {
  std::vector<NodeId> out;
  for (const auto& id : filter) {
    const NodeSpec* n = grid.find(id);
    if (n == nullptr) throw InputError("unknown node '" + id + "'");
    if (n->is_reference()) throw InputError("node '" + id + "' is a reference node and has no sets");
    if (which == Eligible::LoadsOnly && !n->is_load()) throw InputError("node '" + id + "' is not a load");
  }
  for (const auto& n : grid.nodes) {
    if (n.is_reference()) continue;
    if (which == Eligible::LoadsOnly && !n.is_load()) continue;
    if (!filter.empty() && std::find(filter.begin(), filter.end(), n.id) == filter.end()) continue;
    out.push_back(n.id);
  }
  return out;
}

ordered_json manifest_head(const RunConfig& cfg, const LoadedGrid& grid) {
  ordered_json m;
  m["tool"] = "gridbarrier";
  m["version"] = GRIDBARRIER_VERSION;
  m["command"] = cfg.subcommand;
  m["grid"] = {{"path", grid.path}, {"hash", grid.hash}};
  ordered_json opts;
  opts["step"] = cfg.integrator.step;
  opts["t_back_max"] = cfg.integrator.t_back_max;
  opts["omega_cap"] = cfg.integrator.omega_cap;
  opts["box_margin"] = cfg.integrator.box_margin;
  opts["event_tol"] = cfg.integrator.event_tol;
  opts["resolution"] = cfg.resolution;
  m["options"] = std::move(opts);
  m["warnings"] = grid.spec.warnings;
  return m;
}

struct SetTask {
  NodeId node;
  SetKind kind;
  std::optional<Region> region;
  std::optional<LoadInterval> interval;
  std::string error;
};

int run_sets(const RunConfig& cfg, Eligible which, std::ostream& out, std::ostream& err) {
  check_options(cfg);
  const std::vector<SetKind> kinds = kinds_of(cfg.kind);
  const LoadedGrid grid = load_grid(cfg, err);
  const std::vector<NodeId> nodes = select_nodes(grid.spec, cfg.nodes, which);

  std::vector<SetTask> tasks;
  for (const auto& id : nodes) {
    for (SetKind k : kinds) tasks.push_back({id, k, std::nullopt, std::nullopt, {}});
  }
  parallel_for(tasks.size(), cfg.jobs, [&](std::size_t i) {
    SetTask& t = tasks[i];
    try {
      const DecoupledNode dn = decouple(grid.spec, t.node);
      if (dn.is_generator()) {
        t.region = compute_generator_region(dn, t.kind, cfg.integrator);
      } else {
        t.interval = load_interval(dn, t.kind, cfg.resolution);
      }
    } catch (const NumericalError& e) {
      t.error = e.what();
    }
  });

  OutputDir dir(cfg.out);
  ordered_json manifest = manifest_head(cfg, grid);
  manifest["kinds"] = cfg.kind;
  manifest["format"] = cfg.format;
  ordered_json artifacts = ordered_json::array();
  ordered_json failures = ordered_json::array();
  for (const auto& t : tasks) {
    const std::string kind(to_string(t.kind));
    const std::string stem = file_stem(t.node) + "." + kind;
    if (!t.error.empty()) {
      failures.push_back({{"node", t.node}, {"kind", kind}, {"error", t.error}});
      err << "error: " << t.node << " " << kind << ": " << t.error << "\n";
      continue;
    }
    ordered_json a;
    a["node"] = t.node;
    a["kind"] = kind;
    ordered_json files = ordered_json::array();
    if (t.region) {
      const Region& r = *t.region;
      a["type"] = "generator";
      a["empty"] = r.empty;
      a["reason"] = std::string(to_string(r.reason));
      a["area"] = r.area();
      ordered_json term = ordered_json::array();
      for (const auto& c : r.curves) {
        term.push_back({{"side", std::string(to_string(c.side))},
                        {"termination", std::string(to_string(c.termination))},
                        {"hamiltonian_residual_max", c.hamiltonian_residual_max}});
      }
      a["curves"] = std::move(term);
      const bool as_json = cfg.format == "json";
      if (!as_json) {
        dir.write(stem + ".csv", io::region_csv(r));
        files.push_back(stem + ".csv");
      }
      dir.write(stem + ".json", io::region_json(t.node, r, cfg.integrator, as_json));
      files.push_back(stem + ".json");
      if (cfg.curves) {
        for (const auto& c : r.curves) {
          const std::string name = stem + "." + std::string(to_string(c.side)) + ".curve.csv";
          dir.write(name, io::curve_csv(c));
          files.push_back(name);
        }
      }
      out << t.node << " " << kind << ": " << (r.empty ? "empty (" + a["reason"].get<std::string>() + ")" : "area " + io::format_double(r.area())) << "\n";
    } else {
      const LoadInterval& li = *t.interval;
      a["type"] = "load";
      a["empty"] = !li.nonempty;
      a["lower_feasible"] = li.lower.has_value();
      a["upper_feasible"] = li.upper.has_value();
      dir.write(stem + ".json", io::load_interval_json(t.node, li));
      files.push_back(stem + ".json");
      auto bound = [](const std::optional<double>& b) { return b ? io::format_double(*b) : std::string("infeasible"); };
      out << t.node << " " << kind << ": [" << bound(li.lower) << ", " << bound(li.upper) << "]"
          << (li.nonempty ? "" : " empty") << "\n";
    }
    a["files"] = std::move(files);
    artifacts.push_back(std::move(a));
  }
  manifest["artifacts"] = std::move(artifacts);
  manifest["failures"] = failures;
  dir.write("manifest.json", manifest.dump(2) + "\n");
  return failures.empty() ? kOk : kNumerical;
}

int verdict_code(Verdict v) {
  switch (v) {
    case Verdict::Safe: return kOk;
    case Verdict::PotentiallySafe: return kPotentiallySafe;
    case Verdict::Unsafe: return kUnsafe;
  }
  return kUnsafe;
}

GridSets sets_for(const RunConfig& cfg, const GridSpec& grid) {
  const std::vector<NodeId> ids = select_nodes(grid, {}, Eligible::Dynamic);
  std::vector<std::optional<NodeSets>> slots(ids.size());
  const SetOptions opts{cfg.integrator, cfg.resolution};
  parallel_for(ids.size(), cfg.jobs, [&](std::size_t i) { slots[i] = compute_node_sets(decouple(grid, ids[i]), opts); });
  GridSets sets;
  for (std::size_t i = 0; i < ids.size(); ++i) sets.emplace(ids[i], std::move(*slots[i]));
  return sets;
}

ordered_json input_record(const std::string& path, const std::string& text) {
  return {{"path", path}, {"hash", fnv1a64(text)}};
}

}  // namespace

int cmd_compute_sets(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return run_sets(cfg, Eligible::Dynamic, out, err);
}

int cmd_load_sets(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return run_sets(cfg, Eligible::LoadsOnly, out, err);
}

int cmd_classify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  check_options(cfg);
  const LoadedGrid grid = load_grid(cfg, err);
  const std::string text = read_input(cfg.state, "state");
  const PostFaultState state = io::parse_state(text);
  const GridSets sets = sets_for(cfg, grid.spec);
  const Assessment a = classify_state(grid.spec, sets, state);

  OutputDir dir(cfg.out);
  dir.write("assessment.json", io::assessment_json(a));
  ordered_json manifest = manifest_head(cfg, grid);
  manifest["state"] = input_record(cfg.state, text);
  manifest["files"] = dir.written();
  dir.write("manifest.json", manifest.dump(2) + "\n");

  out << to_string(a.verdict);
  for (const auto& id : a.critical_nodes) out << " " << id;
  out << "\n";
  return verdict_code(a.verdict);
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  check_options(cfg);
  if (!(cfg.t_end >= 0.0) || !std::isfinite(cfg.t_end)) throw InputError("--t-end must be nonnegative");
  const LoadedGrid grid = load_grid(cfg, err);
  const std::string text = read_input(cfg.state, "state");
  const PostFaultState state = io::parse_state(text);
  const Trajectory traj = simulate_postfault(grid.spec, state, cfg.t_end, cfg.integrator);

  OutputDir dir(cfg.out);
  dir.write("trajectory.csv", io::trajectory_csv(traj, cfg.stride));
  dir.write("violations.json", io::violation_json(traj));
  ordered_json manifest = manifest_head(cfg, grid);
  manifest["state"] = input_record(cfg.state, text);
  manifest["t_end"] = cfg.t_end;
  manifest["stride"] = cfg.stride;
  manifest["files"] = dir.written();
  dir.write("manifest.json", manifest.dump(2) + "\n");

  for (const auto& v : traj.violations) {
    out << "violation: " << v.node << " " << to_string(v.bound) << " at t=" << io::format_double(v.t) << "\n";
  }
  if (!traj.finite) {
    err << "error: state became non-finite at t=" << io::format_double(traj.t.back()) << "; output truncated\n";
    return kNumerical;
  }
  if (traj.violations.empty()) out << "no violations up to t=" << io::format_double(cfg.t_end) << "\n";
  return kOk;
}

int cmd_screen(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  check_options(cfg);
  const LoadedGrid grid = load_grid(cfg, err);
  const std::string text = read_input(cfg.states, "states");
  const std::vector<PostFaultState> states = io::parse_states(text);
  const GridSets sets = sets_for(cfg, grid.spec);
  const std::vector<Assessment> batch = screen(grid.spec, sets, states);

  OutputDir dir(cfg.out);
  dir.write("assessments.json", io::assessments_json(batch));
  ordered_json manifest = manifest_head(cfg, grid);
  manifest["states"] = input_record(cfg.states, text);
  manifest["files"] = dir.written();
  dir.write("manifest.json", manifest.dump(2) + "\n");

  Verdict worst = Verdict::Safe;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    out << i << " " << to_string(batch[i].verdict) << "\n";
    worst = std::max(worst, batch[i].verdict);
  }
  return verdict_code(worst);
}

}  // namespace gridbarrier::cli
