#include <benchmark/benchmark.h>

#include "decoh/dynamics.hpp"
#include "decoh/models.hpp"
#include "support/random.hpp"

using namespace decoh;

// Steps per second of the tracked Schmidt trajectory.
static void BM_TrackSchmidt(benchmark::State& state) {
  decoh::testing::Rng rng(10);
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto psi = rng.state(d, d);
  EvolutionConfig cfg;
  cfg.hamiltonian = rng.hermitian(d * d);
  cfg.t_max = 1.0;
  cfg.dt = 1e-2;
  for (auto _ : state) benchmark::DoNotOptimize(track_schmidt(psi, cfg));
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_TrackSchmidt)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

static void BM_VonNeumannStructured(benchmark::State& state) {
  const ComplexVector c{0.6, 0.8};
  const auto n_env = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(models::von_neumann_state_at(c, n_env, 1.0, 0.7));
}
BENCHMARK(BM_VonNeumannStructured)->DenseRange(4, 20, 8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
