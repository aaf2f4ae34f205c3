#include <benchmark/benchmark.h>

#include <complex>

#include "sgspec/monodromy.hpp"
#include "sgspec/potential.hpp"

using namespace sgspec;

static void BM_MonodromyVacuum(benchmark::State& state) {
  MonodromyEvaluator ev(vacuum());
  cplx lam(static_cast<double>(state.range(0)), 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(ev(lam));
}
BENCHMARK(BM_MonodromyVacuum)->Arg(1)->Arg(150)->Arg(2500);

static void BM_MonodromyPerturbed(benchmark::State& state) {
  MonodromyEvaluator ev(random_potential(1, 6, 0.25, 0.35));
  cplx lam(static_cast<double>(state.range(0)), 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(ev(lam));
}
BENCHMARK(BM_MonodromyPerturbed)->Arg(1)->Arg(150)->Arg(2500);

static void BM_EvaluatorSetup(benchmark::State& state) {
  PeriodicPotential p = random_potential(1, static_cast<int>(state.range(0)), 0.25, 0.35);
  for (auto _ : state) benchmark::DoNotOptimize(MonodromyEvaluator(p));
}
BENCHMARK(BM_EvaluatorSetup)->Arg(4)->Arg(8)->Arg(16);

BENCHMARK_MAIN();
