#include <benchmark/benchmark.h>

#include "qnet/qnet.hpp"

using namespace qnet;

static void BM_GbsaQuarter(benchmark::State& state) {
  const auto input = prepare_swap_input(4);
  const auto U = quarter();
  for (auto _ : state) benchmark::DoNotOptimize(run_gbsa(input, U));
}
BENCHMARK(BM_GbsaQuarter)->Unit(benchmark::kMillisecond);

static void BM_GbsaTritter(benchmark::State& state) {
  const auto input = prepare_swap_input(3);
  const auto U = tritter();
  for (auto _ : state) benchmark::DoNotOptimize(run_gbsa(input, U));
}
BENCHMARK(BM_GbsaTritter)->Unit(benchmark::kMicrosecond);

static void BM_SuppressedQuarter(benchmark::State& state) {
  const auto input = prepare_swap_input(4);
  const auto U = quarter();
  for (auto _ : state) benchmark::DoNotOptimize(suppressed_patterns(input, U, 4));
}
BENCHMARK(BM_SuppressedQuarter)->Unit(benchmark::kMillisecond);

static void BM_SymmetricMultiport(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(symmetric_multiport(d));
}
BENCHMARK(BM_SymmetricMultiport)->DenseRange(1, 5);

// Swap through the 8-port butterfly: m pairs, 8^m substitutions per term.
static void BM_SubnetworkButterfly(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto U = symmetric_multiport(3);
  for (auto _ : state) benchmark::DoNotOptimize(subnetwork_swap(m, U));
}
BENCHMARK(BM_SubnetworkButterfly)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

static void BM_SimulateWpe(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const auto U = default_eraser(N);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_wpe(1, N, 0.06, U, DetectorModel::Threshold));
}
BENCHMARK(BM_SimulateWpe)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

static void BM_ItinerantSim(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(itinerant_ghz_fidelity_sim(N, 0.99));
}
BENCHMARK(BM_ItinerantSim)->DenseRange(2, 8, 2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
