#include <benchmark/benchmark.h>

#include "sbq/channels.hpp"
#include "sbq/dme.hpp"
#include "sbq/wml.hpp"

namespace {

void BM_MatrixExpPade(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  sbq::SplitMix64 rng(1);
  const sbq::ComplexMatrix a = sbq::random_ginibre(d, d, rng);
  for (auto _ : state) benchmark::DoNotOptimize(sbq::matrix_exp(a));
}
BENCHMARK(BM_MatrixExpPade)->Arg(4)->Arg(16)->Arg(64);

void BM_DmeChannel(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto sigma = sbq::random_density(d, 3);
  const auto sched = sbq::dme_schedule(1.0, 200);
  for (auto _ : state) benchmark::DoNotOptimize(sbq::dme_channel(sigma, sched));
}
BENCHMARK(BM_DmeChannel)->Arg(2)->Arg(3)->Arg(4);

void BM_DiamondAscent(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto sigma = sbq::random_density(d, 5);
  const auto diff = sbq::ideal_unitary_channel(sigma, 1.0) - sbq::dme_channel(sigma, sbq::dme_schedule(1.0, 10));
  sbq::AscentOptions opts;
  opts.restarts = 4;
  for (auto _ : state) benchmark::DoNotOptimize(sbq::diamond_lower_ascent(diff, opts));
}
BENCHMARK(BM_DiamondAscent)->Arg(2)->Arg(4);

void BM_WmlGeneratorExp(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const sbq::ComplexMatrix gen = 0.01 * sbq::lindblad_form_superop(sbq::m_operator(d).m);
  for (auto _ : state) benchmark::DoNotOptimize(sbq::matrix_exp(gen));
}
BENCHMARK(BM_WmlGeneratorExp)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_WmlStepCached(benchmark::State& state) {
  const auto spec = sbq::random_lindblad(2, 9);
  for (auto _ : state) benchmark::DoNotOptimize(sbq::wml_step_channel(spec, 0.01));
}
BENCHMARK(BM_WmlStepCached);

}  // namespace

BENCHMARK_MAIN();
