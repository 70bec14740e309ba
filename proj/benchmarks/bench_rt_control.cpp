#include <benchmark/benchmark.h>

#include <vector>

#include "edgetrack/reid.hpp"
#include "edgetrack/rng.hpp"
#include "edgetrack/rt_control.hpp"

using namespace edgetrack;

namespace {

TaskSet mixed_set(int n, int processors) {
  const Seconds p = 1.0 / 24.0;
  CascadeProfile prof = default_profile();
  TaskSet ts;
  ts.processors = processors;
  Rng rng(42);
  double budget = processors * 0.95;
  double used = 0.0;
  for (int i = 0; i < n; ++i) {
    Seconds e = prof.e1;
    if (used + prof.e2 / p <= budget && rng.bernoulli(0.3)) e = prof.e2;
    used += e / p;
    ts.tasks.push_back(RtTask{i, e, p});
  }
  return ts;
}

}  // namespace

static void BM_CompletionBound(benchmark::State& state) {
  TaskSet ts = mixed_set(static_cast<int>(state.range(0)), 20);
  for (auto _ : state) {
    for (std::size_t i = 0; i < ts.tasks.size(); ++i)
      benchmark::DoNotOptimize(completion_bound(ts, i));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CompletionBound)->RangeMultiplier(4)->Range(8, 512)->Complexity();

static void BM_AdmissionControl(benchmark::State& state) {
  CascadeProfile prof = default_profile();
  int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(admission_control(n, prof, 20, 1.0 / 24.0, 30.0));
  }
}
BENCHMARK(BM_AdmissionControl)->Arg(4)->Arg(16)->Arg(32)->Arg(64);

static void BM_FifoSimulate(benchmark::State& state) {
  TaskSet ts = mixed_set(static_cast<int>(state.range(0)), 20);
  Seconds horizon = 24.0 * ts.period();
  for (auto _ : state) {
    benchmark::DoNotOptimize(fifo_simulate(ts, horizon));
  }
}
BENCHMARK(BM_FifoSimulate)->Arg(16)->Arg(64)->Arg(200);
