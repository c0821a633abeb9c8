#include <benchmark/benchmark.h>

#include "matchmix/coupling.hpp"
#include "matchmix/graphproc.hpp"
#include "matchmix/sampling.hpp"
#include "matchmix/walk.hpp"

using namespace matchmix;

static void BM_StepRound(benchmark::State& state) {
  const auto n = static_cast<std::int32_t>(state.range(0));
  const auto k = static_cast<std::int32_t>(state.range(1));
  Rng rng = derive_stream(1, 0);
  auto st = walk::WalkState::start(n);
  for (auto _ : state) benchmark::DoNotOptimize(walk::advance_round(st, k, rng));
}
BENCHMARK(BM_StepRound)->Args({1000, 2})->Args({1000, 10})->Args({100000, 10})->Args({100000, 100});

static void BM_CycleStructure(benchmark::State& state) {
  Rng rng = derive_stream(2, 0);
  auto pm = sampling::sample_uniform_matching(static_cast<std::int32_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(core::cycle_structure(pm));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CycleStructure)->RangeMultiplier(10)->Range(100, 1000000)->Complexity();

static void BM_GraphStep(benchmark::State& state) {
  const auto n = static_cast<std::int32_t>(state.range(0));
  Rng rng = derive_stream(3, 0);
  graphproc::CliqueGraph g(n);
  for (auto _ : state) g.step(sampling::sample_rematch_structure(10, rng), rng);
}
BENCHMARK(BM_GraphStep)->Arg(100000);

static void BM_DpSwapStep(benchmark::State& state) {
  const auto n = static_cast<std::int32_t>(state.range(0));
  Rng rng = derive_stream(4, 0);
  auto mu = sampling::sample_uniform_matching(n, rng), nu = sampling::sample_uniform_matching(n, rng);
  for (auto _ : state) coupling::dp_swap_step(mu, nu, rng);
}
BENCHMARK(BM_DpSwapStep)->Arg(100)->Arg(1000);

static void BM_DpRoundStepNeighbours(benchmark::State& state) {
  const auto n = static_cast<std::int32_t>(state.range(0));
  Rng rng = derive_stream(5, 0);
  auto [mu, nu] = coupling::neighbour_start(n);
  for (auto _ : state) benchmark::DoNotOptimize(coupling::dp_round_step(mu, nu, 10, rng));
}
BENCHMARK(BM_DpRoundStepNeighbours)->Arg(500)->Arg(5000);

BENCHMARK_MAIN();
