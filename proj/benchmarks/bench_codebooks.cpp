#include <benchmark/benchmark.h>

#include "cdiquant/codebooks.hpp"
#include "cdiquant/rng.hpp"

using namespace cdiquant;

static void BM_rvq_codebook(benchmark::State& state) {
  const int bits = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(rvq_codebook(16, bits, 11));
  }
}
BENCHMARK(BM_rvq_codebook)->Arg(4)->Arg(8);

static void BM_quantize_columns(benchmark::State& state) {
  const MatC cols = rvq_codebook(16, static_cast<int>(state.range(0)), 12).as_columns();
  Rng rng(13);
  VecC h(16);
  for (int i = 0; i < 16; ++i) h(i) = rng.cnormal();
  const VecC h_bar = h / h.norm();
  for (auto _ : state) {
    benchmark::DoNotOptimize(quantize_columns(h_bar, cols));
  }
}
BENCHMARK(BM_quantize_columns)->Arg(8)->Arg(12);

static void BM_dft_codebook(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(dft_codebook(8, 3, 8));
  }
}
BENCHMARK(BM_dft_codebook);

BENCHMARK_MAIN();
