#include <benchmark/benchmark.h>

#include "edgetrack/road_network.hpp"
#include "edgetrack/scenario.hpp"
#include "edgetrack/tracker.hpp"
#include "edgetrack/traffic_gen.hpp"

using namespace edgetrack;

namespace {

ScenarioConfig bench_scenario() {
  ScenarioConfig cfg;
  cfg.seed = 7;
  cfg.start = 7.5 * 3600.0;
  cfg.duration = 1800.0;
  cfg.trip_continue_prob = 0.45;
  cfg.max_hops = 6;
  cfg.arrival.default_per_min = {1.5};
  std::vector<double> rush(24, 1.5);
  rush[7] = 70.0;
  rush[8] = 70.0;
  cfg.arrival.overrides[6] = rush;
  cfg.vois.push_back(
      VoiSpec{1, 7.5 * 3600.0 + 120.0, true, {1, 2, 6, 7, 11}, "silver", "glb_suv"});
  return cfg;
}

}  // namespace

static void BM_GenerateTraffic(benchmark::State& state) {
  RoadNetwork net = make_grid(4, 4, {3, 42}, {30, 50});
  ScenarioConfig cfg = bench_scenario();
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate(net, cfg));
  }
}
BENCHMARK(BM_GenerateTraffic);

static void BM_TrackRushHourQuery(benchmark::State& state) {
  RoadNetwork net = make_grid(4, 4, {3, 42}, {30, 50});
  ScenarioConfig cfg = bench_scenario();
  GenerateResult world = generate(net, cfg);
  std::vector<ResolvedVoi> vois = resolve_vois(world, net, cfg);
  std::vector<VoiQuery> queries;
  for (const ResolvedVoi& v : vois) queries.push_back({v.attrs, v.origin, v.report_time});
  TrackerConfig tcfg;
  tcfg.frame_period = cfg.frame_period;
  tcfg.processors = cfg.processors;
  tcfg.profile = cfg.profile;
  tcfg.horizon = cfg.start + cfg.duration + cfg.horizon_slack;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(net, world.trajectories, world.attributes, queries, tcfg));
  }
}
BENCHMARK(BM_TrackRushHourQuery)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
