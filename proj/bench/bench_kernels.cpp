#include <benchmark/benchmark.h>

#include "friedrichs/kernels.hpp"

using namespace friedrichs;

namespace {

Exec mode(const benchmark::State& s) { return s.range(0) ? Exec::Parallel : Exec::Serial; }

void BM_SpectralDensity(benchmark::State& state) {
  ResolventEvaluator ev(model_b(0.3));
  auto w = linear_grid(0.01, 40.0, 2000);
  for (auto _ : state) benchmark::DoNotOptimize(spectral_density_sweep(ev, w, mode(state)));
  state.SetItemsProcessed(state.iterations() * w.size());
}

void BM_OracleEvolution(benchmark::State& state) {
  DiscretizedHamiltonian dh(model_b(0.3), DiscretizationParams{2000});
  Vec psi = Vec::Unit(1, 0);
  dh.eigenvalues();
  auto t = linear_grid(0.0, 50.0, 600);
  for (auto _ : state) benchmark::DoNotOptimize(oracle_evolution_sweep(dh, psi, t, mode(state)));
}

void BM_ReducedEvolution(benchmark::State& state) {
  ResolventEvaluator ev(model_b(0.3));
  auto t = linear_grid(1.0, 50.0, 16);
  EvolutionOptions opt;
  opt.check_spectrum = false;
  for (auto _ : state) benchmark::DoNotOptimize(reduced_evolution(ev, t, 1e-8, opt, mode(state)));
}

}  // namespace

BENCHMARK(BM_SpectralDensity)->Arg(0)->Arg(1)->ArgName("parallel");
BENCHMARK(BM_OracleEvolution)->Arg(0)->Arg(1)->ArgName("parallel");
BENCHMARK(BM_ReducedEvolution)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
