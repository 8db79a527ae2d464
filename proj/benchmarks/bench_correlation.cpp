#include <benchmark/benchmark.h>

#include "cdiquant/correlation.hpp"
#include "cdiquant/rng.hpp"

using namespace cdiquant;

namespace {

MatC random_psd(int n, std::uint64_t seed) {
  Rng rng(seed);
  MatC a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.cnormal();
  return hermitize(a * a.adjoint() / n);
}

}  // namespace

static void BM_nearest_kronecker(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const MatC r = random_psd(n * n, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(nearest_kronecker(r, n, n));
  }
}
BENCHMARK(BM_nearest_kronecker)->Arg(4)->Arg(8);

static void BM_power_coupling(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const MatC r = random_psd(n * n, 5);
  const MatC u_h = eigh_descending(random_psd(n, 6)).vectors;
  const MatC u_v = eigh_descending(random_psd(n, 7)).vectors;
  for (auto _ : state) {
    benchmark::DoNotOptimize(power_coupling(r, u_h, u_v));
  }
}
BENCHMARK(BM_power_coupling)->Arg(4)->Arg(8);

static void BM_covariance_accumulate(benchmark::State& state) {
  Rng rng(9);
  VecC h(16);
  for (int i = 0; i < 16; ++i) h(i) = rng.cnormal();
  CorrelationAccumulator acc(4, 4);
  for (auto _ : state) {
    acc.add(h);
  }
}
BENCHMARK(BM_covariance_accumulate);

BENCHMARK_MAIN();
