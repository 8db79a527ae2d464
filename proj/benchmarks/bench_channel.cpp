#include <benchmark/benchmark.h>

#include "cdiquant/channel_model.hpp"
#include "cdiquant/rng.hpp"

using namespace cdiquant;

static void BM_draw_rayset(benchmark::State& state) {
  const ScenarioConfig sc = ScenarioConfig::simplified(20.0);
  std::uint64_t s = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(draw_rayset(sc, derive_seed(1, 0, s++)));
  }
}
BENCHMARK(BM_draw_rayset);

static void BM_realize_channel_ura(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ScenarioConfig sc = ScenarioConfig::simplified(20.0);
  const ArrayGeometry geom = ArrayGeometry::ura(n, n);
  const RaySet rays = draw_rayset(sc, 42);
  for (auto _ : state) {
    benchmark::DoNotOptimize(realize_channel_vector(rays, geom));
  }
}
BENCHMARK(BM_realize_channel_ura)->Arg(4)->Arg(8);

static void BM_realize_channel_ucca(benchmark::State& state) {
  const ScenarioConfig sc = ScenarioConfig::simplified(20.0);
  const ArrayGeometry geom = ArrayGeometry::ucca(4, 4, {0.5, 1.0, 1.5, 2.0});
  const RaySet rays = draw_rayset(sc, 42);
  for (auto _ : state) {
    benchmark::DoNotOptimize(realize_channel_vector(rays, geom));
  }
}
BENCHMARK(BM_realize_channel_ucca);

BENCHMARK_MAIN();
