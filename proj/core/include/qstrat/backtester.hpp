#pragma once

#include "qstrat/market_data.hpp"
#include "qstrat/metrics.hpp"
#include "qstrat/strategies.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace qstrat {

struct Trade {
  std::size_t entry_index = 0;
  /// Empty while the position is still open at the last bar.
  std::optional<std::size_t> exit_index;
  double entry_price = 0.0;
  /// Exit fill, or the last close for an open trade.
  double exit_price = 0.0;
  double return_factor = 1.0;

  bool is_open() const noexcept { return !exit_index.has_value(); }
};

/// Strategy "price" per bar. Before the first Buy it holds the first Buy's
/// close (or close[0] without any Buy); while long it moves with the close;
/// while flat it is frozen.
struct EquityCurve {
  std::vector<double> values;
  double initial_price = 0.0;
  double final_price = 0.0;
};

struct BacktestResult {
  EquityCurve equity;
  std::vector<Trade> trades;
  MetricReport report;

  std::size_t buy_count() const noexcept { return trades.size(); }
};

struct BacktestOptions {
  std::size_t trading_days = kTradingDaysPerYear;
  /// Benchmark closes aligned bar-for-bar with the series; empty means the
  /// series itself.
  std::vector<double> benchmark;
};

/// All-in/all-out long-only simulation at zero cost, filling at the signal
/// bar's close. Throws IndexOutOfRange / NonAlternatingSignals for invalid
/// signal lists.
BacktestResult run_backtest(const OhlcvSeries& series, std::span<const SignalEvent> signals,
                            const BacktestOptions& options = {});

/// generate_signals followed by run_backtest.
BacktestResult run_strategy(const OhlcvSeries& series, const StrategyConfig& config,
                            const BacktestOptions& options = {});

/// Closes of `benchmark` on every date of `series`. Throws LengthMismatch when
/// a date is missing from the benchmark.
std::vector<double> align_benchmark(const OhlcvSeries& series, const OhlcvSeries& benchmark);

} // namespace qstrat
