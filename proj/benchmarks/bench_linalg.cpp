#include <benchmark/benchmark.h>

#include "decoh/linalg.hpp"
#include "decoh/schmidt.hpp"
#include "support/random.hpp"

using namespace decoh;

static void BM_HermitianEigh(benchmark::State& state) {
  decoh::testing::Rng rng(7);
  const auto h = rng.hermitian(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eigh(h));
}
BENCHMARK(BM_HermitianEigh)->RangeMultiplier(2)->Range(4, 64);

static void BM_Svd(benchmark::State& state) {
  decoh::testing::Rng rng(8);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = rng.matrix(n, 2 * n);
  for (auto _ : state) benchmark::DoNotOptimize(svd(m));
}
BENCHMARK(BM_Svd)->RangeMultiplier(2)->Range(2, 32);

static void BM_SchmidtDecompose(benchmark::State& state) {
  decoh::testing::Rng rng(9);
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto psi = rng.state(d, d);
  for (auto _ : state) benchmark::DoNotOptimize(schmidt_decompose(psi));
}
BENCHMARK(BM_SchmidtDecompose)->DenseRange(2, 8, 2);
