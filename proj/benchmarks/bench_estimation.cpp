#include <benchmark/benchmark.h>

#include "wvarent/datasets.hpp"
#include "wvarent/estimation.hpp"

using namespace wvarent;

static void BM_KernelWrve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto data = sample(Distribution::exponential(5.5), n, SampleSeed{1});
  const KernelEstimate est(data, BandwidthRule::silverman().select(data));
  for (auto _ : state) benchmark::DoNotOptimize(wrve_estimate(est, 0.1));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KernelWrve)->RangeMultiplier(2)->Range(50, 800)->Complexity();

static void BM_MonteCarloStudy(benchmark::State& state) {
  StudyOptions opts;
  opts.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(monte_carlo_study(Distribution::exponential(5.5), {0.1, 0.2, 0.3}, {50, 100, 200}, 100,
                                               BandwidthRule::silverman(), SampleSeed{42}, opts));
  }
}
BENCHMARK(BM_MonteCarloStudy)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

static void BM_BootstrapNano(benchmark::State& state) {
  const auto& data = nano_droplet_dataset().values;
  const auto fitted = Distribution::burr3(1.202347, 4.701481);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bootstrap_study(data, fitted, {0.01, 0.7}, 0.999, 100, SampleSeed{42}));
  }
}
BENCHMARK(BM_BootstrapNano)->Unit(benchmark::kMillisecond);
