#include <benchmark/benchmark.h>

#include <numbers>

#include "tbh/analytic.hpp"
#include "tbh/metrics.hpp"
#include "tbh/scheme.hpp"

namespace {

tbh::NetworkConfig operating(double alpha, tbh::EngineKind engine) {
  auto cfg = tbh::NetworkConfig::with_r_alpha(alpha, 0.075 * std::numbers::sqrt2, 0.95);
  cfg.cv = tbh::CVSourceSpec::cat(alpha);
  cfg.engine = engine;
  return cfg;
}

void BM_BranchNetwork(benchmark::State& state) {
  const auto cfg = operating(static_cast<double>(state.range(0)) / 4.0, tbh::EngineKind::branch);
  for (auto _ : state) benchmark::DoNotOptimize(tbh::run(cfg).outcome.probability);
}
BENCHMARK(BM_BranchNetwork)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_DenseNetwork(benchmark::State& state) {
  const auto cfg = operating(static_cast<double>(state.range(0)) / 4.0, tbh::EngineKind::dense);
  for (auto _ : state) benchmark::DoNotOptimize(tbh::run(cfg).outcome.probability);
}
BENCHMARK(BM_DenseNetwork)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_VacuumSeries(benchmark::State& state) {
  const double r = 0.075 * std::numbers::sqrt2 / 0.25;
  for (auto _ : state) benchmark::DoNotOptimize(tbh::analytic::p0_squeezed(-0.061, r, 0.25, 0.95));
}
BENCHMARK(BM_VacuumSeries)->Unit(benchmark::kMillisecond);

void BM_WignerGrid(benchmark::State& state) {
  const auto target = tbh::target_state(2.0, 40);
  const auto cat = tbh::project_dv(target, tbh::timebin_projector(1.0)).state;
  const auto grid = tbh::PhaseSpaceGrid::around(2.0, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(tbh::wigner(cat, grid).min());
}
BENCHMARK(BM_WignerGrid)->Arg(51)->Arg(101)->Unit(benchmark::kMillisecond);

void BM_NPT(benchmark::State& state) {
  const auto target = tbh::target_state(2.0, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(tbh::npt(target, {tbh::early("A"), tbh::late("A")}));
}
BENCHMARK(BM_NPT)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
