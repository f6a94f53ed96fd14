#pragma once

#include "qstrat/backtester.hpp"
#include "qstrat/kelly.hpp"
#include "qstrat/metrics.hpp"
#include "qstrat/strategies.hpp"
#include "qstrat/sweep.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qstrat {

/// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

/// Run description written next to the metrics in report JSON.
struct ReportContext {
  std::string symbol;
  std::string strategy;
  std::size_t bars = 0;
  std::string first_date;
  std::string last_date;
  std::size_t trading_days = kTradingDaysPerYear;
  std::string benchmark = "self";
};

/// Pretty-printed JSON object with the metric keys initial_price,
/// final_price, rr_whole, rr_per_year, rr_by_year, buy_count, max_rate,
/// min_rate, mdd, sr, ir, vol_annual, return_fit_mean, return_fit_std (sr and
/// ir are null when undefined) plus the context fields. Ends with a newline.
std::string report_to_json(const MetricReport& report, const ReportContext& context);

/// Reads the metric keys back. Throws InvalidConfig for missing keys or
/// malformed JSON.
MetricReport report_from_json(std::string_view json);

/// Human-readable block: Initial Price, Final Price, RR of whole period,
/// RR/year, RR of year-k, buy count, MAX/MIN rate, MDD, SR, IR.
std::string report_text(const MetricReport& report);

/// bar_index,date,close,equity
std::string equity_csv(const OhlcvSeries& series, const EquityCurve& equity);

/// bar_index,date,action
std::string signals_csv(const OhlcvSeries& series, std::span<const SignalEvent> signals);

/// bar_index,entry_index,exit_index,entry_price,exit_price,return_factor
std::string trades_csv(std::span<const Trade> trades);

struct IndicatorColumn {
  std::string name;
  std::vector<double> values;
};

/// index,close,<name...>. Throws LengthMismatch if a column's length differs
/// from closes.
std::string indicator_csv(std::span<const double> closes,
                          std::span<const IndicatorColumn> columns);

struct IndicatorTable {
  std::vector<double> closes;
  std::vector<IndicatorColumn> columns;
};

/// Parses text written by indicator_csv. Throws UnparsableRow.
IndicatorTable read_indicator_csv(std::string_view text);

/// x,expected_log_return
std::string kelly_curve_csv(std::span<const KellyPoint> curve);

/// <param keys...>,buy_count,rr_whole,rr_per_year,mdd,sr,ir,vol_annual,objective
std::string sweep_csv(const SweepResult& result);

} // namespace qstrat
