#include <benchmark/benchmark.h>

#include "qbd/quadrature.hpp"
#include "qbd/recurrence.hpp"
#include "qbd/simulation.hpp"
#include "qbd/spectral.hpp"
#include "qbd/stochastic.hpp"

namespace {

const qbd::ModelParameters kParams = qbd::ModelParameters::make(0.5, 1.5, 0.2);

void BM_QuadratureDouble(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qbd::build_quadrature<double>(m, kParams));
}
BENCHMARK(BM_QuadratureDouble)->Arg(10)->Arg(20)->Arg(40)->Arg(80);

void BM_QuadratureExtended(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qbd::build_quadrature<qbd::Extended>(m, kParams));
}
BENCHMARK(BM_QuadratureExtended)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_TransitionMatrix(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const auto p = kParams.with_tau(0.4);
  for (auto _ : state) benchmark::DoNotOptimize(qbd::build_P(p, N));
}
BENCHMARK(BM_TransitionMatrix)->Arg(15)->Arg(60)->Arg(240);

void BM_ValidateStochastic(benchmark::State& state) {
  const auto P = qbd::build_P(kParams.with_tau(0.4), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(qbd::validate_stochastic(P));
}
BENCHMARK(BM_ValidateStochastic)->Arg(15)->Arg(60);

void BM_GramSchmidt(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const auto rule = qbd::build_quadrature<qbd::Extended>(2 * N + 6, kParams);
  for (auto _ : state) benchmark::DoNotOptimize(qbd::gram_schmidt_table<qbd::Extended>(N, kParams, rule));
}
BENCHMARK(BM_GramSchmidt)->Arg(4)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_KarlinMcGregor(benchmark::State& state) {
  const auto p = kParams.with_tau(0.5);
  for (auto _ : state) {
    const qbd::KarlinMcGregor km(p, 3, 4, 24);
    benchmark::DoNotOptimize(km.transition(1, 0, 2, 1, 3));
  }
}
BENCHMARK(BM_KarlinMcGregor)->Unit(benchmark::kMillisecond);

void BM_Replications(benchmark::State& state) {
  const auto p = kParams.with_tau(0.4);
  qbd::ReplicationConfig cfg;
  cfg.initial = {2, 1};
  cfg.steps = 100;
  cfg.replications = 1000;
  cfg.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qbd::run_replications(cfg, p));
  state.SetItemsProcessed(state.iterations() * cfg.steps * cfg.replications);
}
BENCHMARK(BM_Replications)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_UrnReplications(benchmark::State& state) {
  const auto p = qbd::ModelParameters::make(1, 1, 1);
  qbd::ReplicationConfig cfg;
  cfg.initial = {1, 0};
  cfg.steps = 1;
  cfg.replications = 100000;
  cfg.mode = qbd::SimulationMode::urn;
  for (auto _ : state) benchmark::DoNotOptimize(qbd::run_replications(cfg, p));
  state.SetItemsProcessed(state.iterations() * cfg.replications);
}
BENCHMARK(BM_UrnReplications)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
