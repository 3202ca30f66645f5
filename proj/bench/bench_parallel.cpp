#include <benchmark/benchmark.h>

#include <vector>

#include "blockbench/optimizer.hpp"
#include "blockbench/rng.hpp"
#include "blockbench/simulator.hpp"

using namespace blockbench;

static SimulationConfig sim_config(std::size_t samples, int threads) {
  SimulationConfig c;
  c.n = 12;
  c.num_samples = samples;
  c.reps_per_sample = 10;
  c.seed = 7;
  c.threads = threads;
  return c;
}

static void BM_SimulationSerial(benchmark::State& state) {
  const auto c = sim_config(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(run_simulation_serial(c));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

static void BM_SimulationParallel(benchmark::State& state) {
  const auto c = sim_config(static_cast<std::size_t>(state.range(0)), 0);
  for (auto _ : state) benchmark::DoNotOptimize(run_simulation(c));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

static Sample uniform_sample(std::size_t n) {
  StreamRng rng(11);
  std::vector<double> x(n);
  for (auto& v : x) v = rng.uniform01();
  return Sample::from_scalars(x);
}

static void BM_ExhaustiveSerial(benchmark::State& state) {
  const Sample s = uniform_sample(static_cast<std::size_t>(state.range(0)));
  const DesignSpec d{Method::Threshold, 2, {}, {}};
  for (auto _ : state) benchmark::DoNotOptimize(optimal_blocking_exhaustive_serial(s, d));
}

static void BM_ExhaustiveParallel(benchmark::State& state) {
  const Sample s = uniform_sample(static_cast<std::size_t>(state.range(0)));
  const DesignSpec d{Method::Threshold, 2, {}, {}};
  for (auto _ : state) benchmark::DoNotOptimize(optimal_blocking_exhaustive(s, d));
}

static void BM_DynamicProgram(benchmark::State& state) {
  const Sample s = uniform_sample(static_cast<std::size_t>(state.range(0)));
  const DesignSpec d{Method::Threshold, 2, {}, {}};
  for (auto _ : state) benchmark::DoNotOptimize(optimal_blocking_1d(s, d));
}

BENCHMARK(BM_SimulationSerial)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulationParallel)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExhaustiveSerial)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExhaustiveParallel)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DynamicProgram)->Arg(12)->Arg(36)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
