#include "qstrat/report_io.hpp"

#include "qstrat/error.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>

namespace qstrat {

namespace {

using nlohmann::ordered_json;

ordered_json optional_number(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::string optional_text(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string{};
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const std::size_t p = line.find(sep);
    out.push_back(line.substr(0, p));
    if (p == std::string_view::npos) break;
    line.remove_prefix(p + 1);
  }
  return out;
}

double parse_cell(std::string_view cell, std::size_t row) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size()) {
    throw Error(ErrorKind::UnparsableRow, fmt::format("'{}' is not a number", cell), row);
  }
  return v;
}

double number_at(const ordered_json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw Error(ErrorKind::InvalidConfig, fmt::format("report JSON lacks numeric '{}'", key));
  }
  return j.at(key).get<double>();
}

std::optional<double> optional_at(const ordered_json& j, const char* key) {
  if (!j.contains(key)) {
    throw Error(ErrorKind::InvalidConfig, fmt::format("report JSON lacks '{}'", key));
  }
  if (j.at(key).is_null()) return std::nullopt;
  return number_at(j, key);
}

} // namespace

std::string format_number(double value) { return fmt::format("{}", value); }

std::string report_to_json(const MetricReport& r, const ReportContext& ctx) {
  ordered_json j;
  j["symbol"] = ctx.symbol;
  j["strategy"] = ctx.strategy;
  j["bars"] = ctx.bars;
  j["first_date"] = ctx.first_date;
  j["last_date"] = ctx.last_date;
  j["trading_days"] = ctx.trading_days;
  j["benchmark"] = ctx.benchmark;
  j["initial_price"] = r.initial_price;
  j["final_price"] = r.final_price;
  j["rr_whole"] = r.rr_whole;
  j["rr_per_year"] = r.rr_per_year;
  j["rr_by_year"] = r.rr_by_year;
  j["buy_count"] = r.buy_count;
  j["max_rate"] = r.max_year_rr;
  j["min_rate"] = r.min_year_rr;
  j["mdd"] = r.mdd;
  j["sr"] = optional_number(r.sharpe_annual);
  j["ir"] = optional_number(r.ir_annual);
  j["vol_annual"] = r.vol_annual;
  j["return_fit_mean"] = r.return_fit_mean;
  j["return_fit_std"] = r.return_fit_std;
  return j.dump(2) + "\n";
}

MetricReport report_from_json(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidConfig, fmt::format("malformed report JSON: {}", e.what()));
  }
  if (!j.is_object()) throw Error(ErrorKind::InvalidConfig, "report JSON is not an object");
  MetricReport r;
  r.initial_price = number_at(j, "initial_price");
  r.final_price = number_at(j, "final_price");
  r.rr_whole = number_at(j, "rr_whole");
  r.rr_per_year = number_at(j, "rr_per_year");
  if (!j.contains("rr_by_year") || !j.at("rr_by_year").is_array()) {
    throw Error(ErrorKind::InvalidConfig, "report JSON lacks array 'rr_by_year'");
  }
  for (const auto& v : j.at("rr_by_year")) {
    if (!v.is_number()) throw Error(ErrorKind::InvalidConfig, "rr_by_year holds a non-number");
    r.rr_by_year.push_back(v.get<double>());
  }
  if (!j.contains("buy_count") || !j.at("buy_count").is_number_unsigned()) {
    throw Error(ErrorKind::InvalidConfig, "report JSON lacks integer 'buy_count'");
  }
  r.buy_count = j.at("buy_count").get<std::size_t>();
  r.max_year_rr = number_at(j, "max_rate");
  r.min_year_rr = number_at(j, "min_rate");
  r.mdd = number_at(j, "mdd");
  r.sharpe_annual = optional_at(j, "sr");
  r.ir_annual = optional_at(j, "ir");
  r.vol_annual = number_at(j, "vol_annual");
  r.return_fit_mean = number_at(j, "return_fit_mean");
  r.return_fit_std = number_at(j, "return_fit_std");
  return r;
}

std::string report_text(const MetricReport& r) {
  std::string out;
  fmt::format_to(std::back_inserter(out), "Initial Price:        {}\n", r.initial_price);
  fmt::format_to(std::back_inserter(out), "Final Price:          {}\n", r.final_price);
  fmt::format_to(std::back_inserter(out), "RR of whole period:   {}\n", r.rr_whole);
  fmt::format_to(std::back_inserter(out), "RR/year:              {}\n", r.rr_per_year);
  for (std::size_t k = 0; k < r.rr_by_year.size(); ++k) {
    fmt::format_to(std::back_inserter(out), "RR of year-{}: {}\n", k + 1, r.rr_by_year[k]);
  }
  fmt::format_to(std::back_inserter(out), "Total number of buy count:  {}\n", r.buy_count);
  fmt::format_to(std::back_inserter(out), "MAX rate:  {}  MIN rate:  {}\n", r.max_year_rr,
                 r.min_year_rr);
  fmt::format_to(std::back_inserter(out), "MDD:  {}\n", r.mdd);
  fmt::format_to(std::back_inserter(out), "SR:  {}\n",
                 r.sharpe_annual ? format_number(*r.sharpe_annual) : "undefined");
  fmt::format_to(std::back_inserter(out), "IR:  {}\n",
                 r.ir_annual ? format_number(*r.ir_annual) : "undefined");
  return out;
}

std::string equity_csv(const OhlcvSeries& series, const EquityCurve& equity) {
  if (equity.values.size() != series.size()) {
    throw Error(ErrorKind::LengthMismatch, "equity curve and series differ in length");
  }
  std::string out = "bar_index,date,close,equity\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    fmt::format_to(std::back_inserter(out), "{},{},{},{}\n", i, format_date(series[i].date),
                   series[i].close, equity.values[i]);
  }
  return out;
}

std::string signals_csv(const OhlcvSeries& series, std::span<const SignalEvent> signals) {
  std::string out = "bar_index,date,action\n";
  for (const SignalEvent& s : signals) {
    if (s.bar_index >= series.size()) {
      throw Error(ErrorKind::IndexOutOfRange, "signal outside the series");
    }
    fmt::format_to(std::back_inserter(out), "{},{},{}\n", s.bar_index,
                   format_date(series[s.bar_index].date), to_string(s.action));
  }
  return out;
}

std::string trades_csv(std::span<const Trade> trades) {
  std::string out = "trade,entry_index,exit_index,entry_price,exit_price,return_factor\n";
  for (std::size_t k = 0; k < trades.size(); ++k) {
    const Trade& t = trades[k];
    fmt::format_to(std::back_inserter(out), "{},{},{},{},{},{}\n", k, t.entry_index,
                   t.exit_index ? fmt::format("{}", *t.exit_index) : std::string{},
                   t.entry_price, t.exit_price, t.return_factor);
  }
  return out;
}

std::string indicator_csv(std::span<const double> closes,
                          std::span<const IndicatorColumn> columns) {
  std::string out = "index,close";
  for (const IndicatorColumn& c : columns) {
    if (c.values.size() != closes.size()) {
      throw Error(ErrorKind::LengthMismatch,
                  fmt::format("indicator column '{}' has {} values, series has {}", c.name,
                              c.values.size(), closes.size()));
    }
    out += ',';
    out += c.name;
  }
  out += '\n';
  for (std::size_t i = 0; i < closes.size(); ++i) {
    fmt::format_to(std::back_inserter(out), "{},{}", i, closes[i]);
    for (const IndicatorColumn& c : columns) {
      fmt::format_to(std::back_inserter(out), ",{}", c.values[i]);
    }
    out += '\n';
  }
  return out;
}

IndicatorTable read_indicator_csv(std::string_view text) {
  IndicatorTable table;
  std::size_t row = 0;
  bool header = true;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (header) {
      if (cells.size() < 2 || cells[0] != "index" || cells[1] != "close") {
        throw Error(ErrorKind::MissingColumn, "indicator CSV must start with index,close");
      }
      for (std::size_t k = 2; k < cells.size(); ++k) {
        table.columns.push_back({std::string(cells[k]), {}});
      }
      header = false;
      continue;
    }
    ++row;
    if (cells.size() != table.columns.size() + 2) {
      throw Error(ErrorKind::UnparsableRow, "wrong number of cells", row);
    }
    table.closes.push_back(parse_cell(cells[1], row));
    for (std::size_t k = 0; k < table.columns.size(); ++k) {
      table.columns[k].values.push_back(parse_cell(cells[k + 2], row));
    }
  }
  if (header) throw Error(ErrorKind::MissingColumn, "indicator CSV has no header");
  return table;
}

std::string kelly_curve_csv(std::span<const KellyPoint> curve) {
  std::string out = "x,expected_log_return\n";
  for (const KellyPoint& p : curve) {
    fmt::format_to(std::back_inserter(out), "{},{}\n", p.x, p.value);
  }
  return out;
}

std::string sweep_csv(const SweepResult& result) {
  std::string out;
  if (!result.rows.empty()) {
    for (const auto& [key, value] : result.rows.front().params) {
      out += key;
      out += ',';
    }
  }
  out += "buy_count,rr_whole,rr_per_year,mdd,sr,ir,vol_annual,objective\n";
  for (const SweepRow& row : result.rows) {
    for (const auto& [key, value] : row.params) {
      out += value;
      out += ',';
    }
    const MetricReport& r = row.report;
    fmt::format_to(std::back_inserter(out), "{},{},{},{},{},{},{},{}\n", r.buy_count, r.rr_whole,
                   r.rr_per_year, r.mdd, optional_text(r.sharpe_annual),
                   optional_text(r.ir_annual), r.vol_annual, optional_text(row.objective));
  }
  return out;
}

} // namespace qstrat
