#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "gridbarrier/assess.hpp"
#include "gridbarrier/io.hpp"

using namespace gridbarrier;

static void BM_TraceTwoBus(benchmark::State& state) {
  const DecoupledNode n = decouple(fixtures::two_bus(), "G1");
  const auto kind = state.range(0) == 0 ? SetKind::Mrpi : SetKind::Admissible;
  const TangencyPoint tp = tangency_points(n)[0];
  for (auto _ : state) benchmark::DoNotOptimize(trace_barrier(n, tp, kind));
}
BENCHMARK(BM_TraceTwoBus)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_GeneratorRegion(benchmark::State& state) {
  const DecoupledNode n = decouple(fixtures::six_bus(), "G" + std::to_string(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(compute_generator_region(n, SetKind::Mrpi));
}
BENCHMARK(BM_GeneratorRegion)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

static void BM_SixBusSets(benchmark::State& state) {
  const GridSpec g = fixtures::six_bus();
  for (auto _ : state) benchmark::DoNotOptimize(compute_grid_sets(g));
}
BENCHMARK(BM_SixBusSets)->Unit(benchmark::kMillisecond);

static void BM_LoadInterval(benchmark::State& state) {
  const DecoupledNode n = decouple(fixtures::six_bus(), "L5");
  for (auto _ : state) benchmark::DoNotOptimize(mrpi_interval(n));
}
BENCHMARK(BM_LoadInterval)->Unit(benchmark::kMicrosecond);

static void BM_Membership(benchmark::State& state) {
  const Region r = compute_generator_region(decouple(fixtures::six_bus(), "G3"), SetKind::Mrpi);
  double x = -1.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(membership(r, {x, 0.3}, kMembershipTol));
    x = x > 1.5 ? -1.5 : x + 0.01;
  }
  state.counters["vertices"] = static_cast<double>(r.boundary.size());
}
BENCHMARK(BM_Membership)->Unit(benchmark::kMicrosecond);

static void BM_Probe(benchmark::State& state) {
  const DecoupledNode n = decouple(fixtures::six_bus(), "G3");
  const ProbeOptions opts;
  for (auto _ : state) {
    benchmark::DoNotOptimize(worst_case_probe(n, {0.2, 0.1}, ProbeStrategy::Pump, opts.horizon, opts.integrator));
  }
}
BENCHMARK(BM_Probe)->Unit(benchmark::kMillisecond);

static void BM_SimulateSixBus(benchmark::State& state) {
  const GridSpec g = fixtures::six_bus();
  const PostFaultState x = io::parse_state(fixtures::read("six_bus_safe_state.json"));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_postfault(g, x, 10.0));
}
BENCHMARK(BM_SimulateSixBus)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
