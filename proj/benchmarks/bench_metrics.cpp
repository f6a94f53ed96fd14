#include "bench_data.hpp"

#include "qstrat/kelly.hpp"
#include "qstrat/metrics.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace qstrat;

void BM_MaxDrawdown(benchmark::State& state) {
  const auto v = bench::walk(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(max_drawdown(v));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MaxDrawdown)->Arg(2000)->Arg(1000000);

void BM_Sharpe(benchmark::State& state) {
  const auto r = daily_returns(bench::walk(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(sharpe_annual(r, 0.0, 252));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sharpe)->Arg(3000)->Arg(1000000);

void BM_BuildReport(benchmark::State& state) {
  const auto eq = bench::walk(static_cast<std::size_t>(state.range(0)), 1);
  const auto bm = bench::walk(static_cast<std::size_t>(state.range(0)), 2);
  ReportInputs in;
  in.equity = eq;
  in.benchmark = bm;
  in.initial_price = eq.front();
  in.buy_count = 10;
  for (auto _ : state) benchmark::DoNotOptimize(build_report(in));
}
BENCHMARK(BM_BuildReport)->Arg(3000);

void BM_KellyCurve(benchmark::State& state) {
  const KellyParams k{0.9, 1.1, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(kelly_curve(k, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_KellyCurve)->Arg(101)->Arg(10001);

} // namespace
