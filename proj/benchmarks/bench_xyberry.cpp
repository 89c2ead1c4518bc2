#include <benchmark/benchmark.h>

#include "xyberry/berry.hpp"
#include "xyberry/ed.hpp"
#include "xyberry/model.hpp"
#include "xyberry/scaling.hpp"

using namespace xyberry;

static void BM_GroundPhase(benchmark::State& state) {
  const auto p = XYParams::make(0.5, 0.5, 0.0, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ground_phase(p).value);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GroundPhase)->RangeMultiplier(4)->Range(16, 16384)->Complexity(benchmark::oN);

static void BM_RelativePhaseFinite(benchmark::State& state) {
  const auto p = XYParams::make(0.5, 0.5, 0.0, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(relative_phase_finite(p).value);
}
BENCHMARK(BM_RelativePhaseFinite)->Arg(2000);

static void BM_BuildHamiltonian(benchmark::State& state) {
  const XYParams p{0.5, 0.5, 0.3, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(ed::build_hamiltonian(p).dim());
}
BENCHMARK(BM_BuildHamiltonian)->DenseRange(4, 10, 2);

static void BM_LowestStates(benchmark::State& state) {
  const auto h = ed::build_hamiltonian({0.5, 0.5, 0.3, static_cast<int>(state.range(0))});
  for (auto _ : state) benchmark::DoNotOptimize(ed::lowest_states(h, 2, ed::ParitySector::Even).splitting);
}
BENCHMARK(BM_LowestStates)->DenseRange(4, 10, 2)->Unit(benchmark::kMillisecond);

static void BM_DiscreteLoop(benchmark::State& state) {
  const auto p = XYParams::make(0.5, 0.5, 0.0, 6);
  const ed::LoopDiscretization loop{static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(ed::discrete_loop_phase(p, ed::Level::Ground, loop).phase.value);
}
BENCHMARK(BM_DiscreteLoop)->Arg(250)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_GapSweepFit(benchmark::State& state) {
  auto spec = SweepSpec::ising();
  if (state.range(0) > 0) spec.n_sites = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fit_exponent(gap_sweep(spec), 1.0, spec.offsets).exponent);
}
BENCHMARK(BM_GapSweepFit)->Arg(0)->Arg(4000);

BENCHMARK_MAIN();
