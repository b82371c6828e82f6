#include <benchmark/benchmark.h>

#include <cmath>

#include "wvarent/measures.hpp"
#include "wvarent/phr.hpp"
#include "wvarent/quadrature.hpp"
#include "wvarent/residual.hpp"
#include "wvarent/systems.hpp"

using namespace wvarent;

static void BM_IntegrateLogSingularity(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate([](double x) { return x * std::log(x) * std::log(x); }, 0, 1).value);
  }
}
BENCHMARK(BM_IntegrateLogSingularity);

static void BM_WveExponential(benchmark::State& state) {
  const auto d = Distribution::exponential(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(weighted_varentropy(d, WeightFunction::identity()));
}
BENCHMARK(BM_WveExponential);

static void BM_WrveBurr(benchmark::State& state) {
  const auto d = Distribution::burr3(1.202347, 4.701481);
  for (auto _ : state) benchmark::DoNotOptimize(wrve({d, 0.3, WeightFunction::identity()}));
}
BENCHMARK(BM_WrveBurr);

static void BM_WrveLowerBound(benchmark::State& state) {
  const auto d = Distribution::weibull(2);
  for (auto _ : state) benchmark::DoNotOptimize(wrve_lower_bound(d, 0.5));
}
BENCHMARK(BM_WrveLowerBound)->Unit(benchmark::kMillisecond);

static void BM_CoherentUSpace(benchmark::State& state) {
  const auto q = DistortionFunction::k_out_of_n(2, 3);
  const auto d = Distribution::weibull(2);
  for (auto _ : state) benchmark::DoNotOptimize(wve_coherent(q, d));
}
BENCHMARK(BM_CoherentUSpace);

static void BM_PhrYSpace(benchmark::State& state) {
  const PHRModel m{Distribution::exponential(2), 3};
  for (auto _ : state) benchmark::DoNotOptimize(wrve_phr(m, 0.4));
}
BENCHMARK(BM_PhrYSpace);
