#include <schwarzian_lab/expr.hpp>
#include <schwarzian_lab/probe.hpp>
#include <schwarzian_lab/schwarzian.hpp>

#include <benchmark/benchmark.h>

namespace sl = schwarzian_lab;

static void BM_EvalJet(benchmark::State& state) {
  const sl::FamilyExpr f = sl::parse("exp(z/(n*z+1))");
  const sl::Complex z(0.3, -0.2);
  for (auto _ : state) benchmark::DoNotOptimize(sl::eval_jet(f, 7.0, z));
}
BENCHMARK(BM_EvalJet);

static void BM_Schwarzian(benchmark::State& state) {
  const sl::FamilyExpr f = sl::parse("exp(n*z)+z^3");
  const sl::Complex z(0.4, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(sl::schwarzian(sl::eval_jet(f, 3.0, z)));
}
BENCHMARK(BM_Schwarzian);

static void BM_Parse(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sl::parse("exp(z/(n*z+1)) - (z+i)^-2*log(n+z)"));
}
BENCHMARK(BM_Parse);

static void BM_MartyScan(benchmark::State& state) {
  const sl::FamilyExpr f = sl::parse("exp(n*z)");
  sl::GridSpec grid;
  grid.nx = grid.ny = static_cast<int>(state.range(0));
  sl::ScanOptions opts;
  opts.workers = 1;
  const auto ns = sl::n_range(1, 16);
  for (auto _ : state) benchmark::DoNotOptimize(sl::marty_scan(f, grid, ns, opts));
  state.SetItemsProcessed(state.iterations() * grid.size() * ns.size() * grid.neighborhood_samples);
}
BENCHMARK(BM_MartyScan)->Arg(11)->Arg(21)->Unit(benchmark::kMillisecond);

static void BM_SdScan(benchmark::State& state) {
  const sl::FamilyExpr f = sl::parse("exp(z/(n*z+1))");
  sl::GridSpec grid;
  grid.nx = grid.ny = 11;
  sl::ScanOptions opts;
  opts.workers = 1;
  const auto ns = sl::n_range(1, 16);
  for (auto _ : state) benchmark::DoNotOptimize(sl::sd_family_scan(f, grid, ns, opts));
}
BENCHMARK(BM_SdScan)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
