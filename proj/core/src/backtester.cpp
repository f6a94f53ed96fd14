#include "qstrat/backtester.hpp"

#include "qstrat/error.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace qstrat {

BacktestResult run_backtest(const OhlcvSeries& series, std::span<const SignalEvent> signals,
                            const BacktestOptions& options) {
  validate_signals(signals, series.size());
  if (options.trading_days == 0) {
    throw Error(ErrorKind::InvalidParams, "trading_days must be >= 1");
  }
  const auto& close = series.closes();
  const std::size_t len = close.size();
  if (!options.benchmark.empty() && options.benchmark.size() != len) {
    throw Error(ErrorKind::LengthMismatch,
                fmt::format("benchmark has {} bars, series has {}", options.benchmark.size(),
                            len));
  }

  BacktestResult result;
  const double initial = signals.empty() ? close[0] : close[signals.front().bar_index];
  result.equity.initial_price = initial;
  result.equity.values.resize(len);

  double eq = initial;
  bool long_position = false;
  std::size_t next = 0;
  for (std::size_t i = 0; i < len; ++i) {
    if (i > 0 && long_position) eq *= close[i] / close[i - 1];
    if (next < signals.size() && signals[next].bar_index == i) {
      if (signals[next].action == Action::Buy) {
        long_position = true;
        Trade t;
        t.entry_index = i;
        t.entry_price = close[i];
        result.trades.push_back(t);
      } else {
        long_position = false;
        Trade& t = result.trades.back();
        t.exit_index = i;
        t.exit_price = close[i];
        t.return_factor = t.exit_price / t.entry_price;
      }
      ++next;
    }
    result.equity.values[i] = eq;
  }
  if (!result.trades.empty() && result.trades.back().is_open()) {
    Trade& t = result.trades.back();
    t.exit_price = close.back();
    t.return_factor = t.exit_price / t.entry_price;
  }
  result.equity.final_price = result.equity.values.back();

  ReportInputs in;
  in.equity = result.equity.values;
  in.initial_price = initial;
  in.buy_count = result.trades.size();
  in.benchmark = options.benchmark.empty() ? std::span<const double>(close)
                                           : std::span<const double>(options.benchmark);
  in.trading_days = options.trading_days;
  result.report = build_report(in);
  return result;
}

BacktestResult run_strategy(const OhlcvSeries& series, const StrategyConfig& config,
                            const BacktestOptions& options) {
  const SignalList signals = generate_signals(series, config);
  return run_backtest(series, signals, options);
}

std::vector<double> align_benchmark(const OhlcvSeries& series, const OhlcvSeries& benchmark) {
  std::vector<double> out;
  out.reserve(series.size());
  const auto& bench = benchmark.bars();
  auto it = bench.begin();
  for (std::size_t i = 0; i < series.size(); ++i) {
    const Date d = series[i].date;
    it = std::lower_bound(it, bench.end(), d,
                          [](const Bar& b, const Date& x) { return b.date < x; });
    if (it == bench.end() || it->date != d) {
      throw Error(ErrorKind::LengthMismatch,
                  fmt::format("benchmark has no bar for {}", format_date(d)), i + 1);
    }
    out.push_back(it->close);
  }
  return out;
}

} // namespace qstrat
