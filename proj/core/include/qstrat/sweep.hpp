#pragma once

#include "qstrat/backtester.hpp"
#include "qstrat/config.hpp"
#include "qstrat/market_data.hpp"
#include "qstrat/metrics.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qstrat {

enum class Objective { SharpeAnnual, IrAnnual, RrWhole };

std::string_view to_string(Objective objective) noexcept;

/// Accepts sharpe|ir|rr. Throws InvalidConfig otherwise.
Objective parse_objective(std::string_view text);

/// One swept strategy parameter: `key` is relative to "strategy." and
/// `values` are the literal config values to try, in order.
struct ParamRange {
  std::string key;
  std::vector<std::string> values;
};

/// Expands "start:stop:step" (inclusive, step > 0) or a comma list
/// "a,b,c". Integer bounds and step give integer values. Throws InvalidConfig.
ParamRange parse_param_range(std::string key, std::string_view text);

struct SweepSpec {
  /// Base configuration; each cell overrides "strategy.<key>" entries.
  ConfigTree base;
  std::vector<ParamRange> ranges;
  Objective objective = Objective::SharpeAnnual;
  std::size_t min_trades = 0;
  /// Worker count; 0 picks the hardware concurrency.
  std::size_t threads = 1;
};

/// Reads the "sweep.*" keys of `tree`:
///   sweep.objective = sharpe|ir|rr
///   sweep.min_trades = <n>
///   sweep.threads = <n>
///   sweep.range.<strategy key> = start:stop:step | a,b,c
SweepSpec sweep_spec_from_config(const ConfigTree& tree);

struct SweepRow {
  std::vector<std::pair<std::string, std::string>> params;
  MetricReport report;
  /// Empty when the objective is undefined (zero volatility); ranks last.
  std::optional<double> objective;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::size_t cells = 0;
  /// Cells rejected by parameter validation or too long for the series.
  std::size_t skipped = 0;
  /// Evaluated cells dropped by min_trades.
  std::size_t filtered = 0;
};

/// Number of cells in the Cartesian grid.
std::size_t grid_size(const SweepSpec& spec) noexcept;

/// Evaluates every cell, filters by min_trades and ranks by objective
/// descending with a lexicographic tie-break on parameter values. Output is
/// independent of the thread count. Throws EmptyGridAfterFilter when no row
/// survives and InvalidConfig for an empty grid.
SweepResult run_sweep(const OhlcvSeries& series, const SweepSpec& spec,
                      const BacktestOptions& options = {});

} // namespace qstrat
