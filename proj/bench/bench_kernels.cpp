// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "nsgame/sensitivity.hpp"
#include "nsgame/sim.hpp"
#include "nsgame/values.hpp"

using namespace nsgame;

namespace {

const Game& classical_game() {
  static const Game g = builtin("random_free", {2, 4, 3});
  return g;
}

Matrix delta_matrix() {
  Game g = builtin("chsh");
  return inequality_form(build_ns_lp(g)).a;
}

SimConfig sim_config(const Game& g) {
  return SimConfig::product_of(ns_value(g).witness, 4, 1, 20000);
}

void BM_classical_parallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(classical_value(classical_game()).value);
}
void BM_classical_serial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(classical_value_serial(classical_game()).value);
}

void BM_delta_parallel(benchmark::State& st) {
  Matrix a = delta_matrix();
  for (auto _ : st) benchmark::DoNotOptimize(sensitivity_delta_exact(a, 3, 10'000'000));
}
void BM_delta_serial(benchmark::State& st) {
  Matrix a = delta_matrix();
  for (auto _ : st) benchmark::DoNotOptimize(sensitivity_delta_exact_serial(a, 3, 10'000'000));
}

void BM_simulate_parallel(benchmark::State& st) {
  Game g = builtin("guess_other");
  SimConfig cfg = sim_config(g);
  for (auto _ : st) benchmark::DoNotOptimize(simulate(g, cfg).histogram);
}
void BM_simulate_serial(benchmark::State& st) {
  Game g = builtin("guess_other");
  SimConfig cfg = sim_config(g);
  for (auto _ : st) benchmark::DoNotOptimize(simulate_serial(g, cfg).histogram);
}

}  // namespace

BENCHMARK(BM_classical_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_classical_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_delta_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_delta_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_simulate_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_simulate_serial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
