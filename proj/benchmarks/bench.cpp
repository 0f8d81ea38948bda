#include "multifrac/algebraic.hpp"
#include "multifrac/ifs.hpp"
#include "multifrac/measure.hpp"
#include "multifrac/systems.hpp"

#include <benchmark/benchmark.h>

using namespace multifrac;

static void BM_EnumerateClassesSalem4(benchmark::State& state) {
  auto ifs = systems::bernoulli(systems::salem_context(4));
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_classes(ifs, k).size());
}
BENCHMARK(BM_EnumerateClassesSalem4)->Arg(10)->Arg(15)->Unit(benchmark::kMillisecond);

static void BM_BoxMassesProduct(benchmark::State& state) {
  auto ifs = systems::bernoulli(systems::salem_context(4));
  const int m = static_cast<int>(state.range(0));
  const int depth = depth_for_scale(ifs, m);
  for (auto _ : state) benchmark::DoNotOptimize(box_masses_product(ifs, depth, m).total());
}
BENCHMARK(BM_BoxMassesProduct)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);

static void BM_SalemRootIsolation(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(isolate_real_roots(salem_polynomial(n)).size());
}
BENCHMARK(BM_SalemRootIsolation)->Arg(4)->Arg(16)->Arg(40);
BENCHMARK_MAIN();
