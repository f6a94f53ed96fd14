#include "qstrat_cli/cli.hpp"

#include "qstrat/backtester.hpp"
#include "qstrat/config.hpp"
#include "qstrat/error.hpp"
#include "qstrat/kelly.hpp"
#include "qstrat/market_data.hpp"
#include "qstrat/report_io.hpp"
#include "qstrat/sweep.hpp"
#include "qstrat_cli/indicator_spec.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace qstrat::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct GlobalOptions {
  std::string data;
  std::string config;
  std::string out_dir;
  std::size_t trading_days = kTradingDaysPerYear;
  bool strict = false;
  bool lenient = false;
  bool use_adjusted = false;
  std::string benchmark = "self";
  std::vector<std::string> sets;
  std::optional<std::size_t> threads;
};

struct CommandOptions {
  std::vector<std::string> indicators;
  std::string strategy;
  std::string objective;
  std::optional<std::size_t> min_trades;
  double kelly_p = 0.9;
  double kelly_l = 1.1;
  double kelly_m = 1.0;
  std::size_t kelly_grid = 101;
  std::string report;
};

ParseOptions parse_options(const GlobalOptions& g) {
  if (g.strict && g.lenient) {
    throw Error(ErrorKind::InvalidConfig, "--strict and --lenient are mutually exclusive");
  }
  ParseOptions opts;
  opts.mode = g.lenient ? ParseMode::Lenient : ParseMode::Strict;
  opts.use_adjusted = g.use_adjusted;
  return opts;
}

ParseResult load_series(const GlobalOptions& g) {
  if (g.data.empty()) throw Error(ErrorKind::MissingInput, "--data is required");
  return parse_csv(g.data, parse_options(g));
}

ConfigTree load_tree(const GlobalOptions& g) {
  ConfigTree tree = g.config.empty() ? ConfigTree{} : ConfigTree::load(g.config);
  for (const std::string& s : g.sets) tree.apply_override(s);
  return tree;
}

BacktestOptions backtest_options(const GlobalOptions& g, const OhlcvSeries& series) {
  if (g.trading_days == 0) throw Error(ErrorKind::InvalidConfig, "--trading-days must be >= 1");
  BacktestOptions opts;
  opts.trading_days = g.trading_days;
  if (g.benchmark != "self") {
    const ParseResult bench = parse_csv(g.benchmark, parse_options(g));
    opts.benchmark = align_benchmark(series, bench.series);
  }
  return opts;
}

ReportContext report_context(const GlobalOptions& g, const OhlcvSeries& series,
                             std::string_view strategy) {
  ReportContext ctx;
  ctx.symbol = series.symbol();
  ctx.strategy = std::string(strategy);
  ctx.bars = series.size();
  ctx.first_date = format_date(series[0].date);
  ctx.last_date = format_date(series[series.size() - 1].date);
  ctx.trading_days = g.trading_days;
  ctx.benchmark = g.benchmark == "self" ? "self" : fs::path(g.benchmark).stem().string();
  return ctx;
}

void write_file(const GlobalOptions& g, const std::string& name, const std::string& content) {
  const fs::path dir(g.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path path = dir / name;
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << content;
  f.close();
  if (!f) {
    throw Error(ErrorKind::MissingInput, fmt::format("cannot write '{}'", path.string()));
  }
}

int cmd_ingest(const GlobalOptions& g, std::ostream& out) {
  const ParseResult parsed = load_series(g);
  const OhlcvSeries& s = parsed.series;
  const std::string csv = to_csv(s);
  if (g.out_dir.empty()) {
    out << csv;
    return kExitOk;
  }
  write_file(g, s.symbol() + ".csv", csv);
  ordered_json j;
  j["symbol"] = s.symbol();
  j["bars"] = s.size();
  j["first_date"] = format_date(s[0].date);
  j["last_date"] = format_date(s[s.size() - 1].date);
  j["warnings"] = parsed.warnings;
  j["years"] = slice_years(s, g.trading_days).size();
  out << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_indicators(const GlobalOptions& g, const CommandOptions& c, std::ostream& out) {
  if (c.indicators.empty()) {
    throw Error(ErrorKind::InvalidConfig, "indicators: give at least one --indicator spec");
  }
  const ParseResult parsed = load_series(g);
  std::vector<IndicatorColumn> columns;
  for (const std::string& spec : c.indicators) {
    auto cols = evaluate_indicator(parsed.series, spec);
    for (auto& col : cols) columns.push_back(std::move(col));
  }
  const std::string csv = indicator_csv(parsed.series.closes(), columns);
  if (g.out_dir.empty()) {
    out << csv;
  } else {
    write_file(g, "indicators.csv", csv);
  }
  return kExitOk;
}

int cmd_backtest(const GlobalOptions& g, const CommandOptions& c, std::ostream& out) {
  ConfigTree tree = load_tree(g);
  if (!c.strategy.empty()) tree.set("strategy.kind", c.strategy);
  const StrategyConfig config = strategy_from_config(tree);
  validate(config);
  const ParseResult parsed = load_series(g);
  const OhlcvSeries& series = parsed.series;
  const BacktestOptions opts = backtest_options(g, series);
  const SignalList signals = generate_signals(series, config);
  const BacktestResult result = run_backtest(series, signals, opts);
  const std::string json =
      report_to_json(result.report, report_context(g, series, strategy_name(config)));
  if (g.out_dir.empty()) {
    out << json;
    return kExitOk;
  }
  write_file(g, "report.json", json);
  write_file(g, "equity.csv", equity_csv(series, result.equity));
  write_file(g, "signals.csv", signals_csv(series, signals));
  write_file(g, "trades.csv", trades_csv(result.trades));
  out << report_text(result.report);
  return kExitOk;
}

int cmd_sweep(const GlobalOptions& g, const CommandOptions& c, std::ostream& out) {
  ConfigTree tree = load_tree(g);
  if (!c.strategy.empty()) tree.set("strategy.kind", c.strategy);
  SweepSpec spec = sweep_spec_from_config(tree);
  if (!c.objective.empty()) spec.objective = parse_objective(c.objective);
  if (c.min_trades) spec.min_trades = *c.min_trades;
  if (g.threads) spec.threads = *g.threads;
  // Surface config mistakes before touching the data.
  strategy_from_config(tree);
  const ParseResult parsed = load_series(g);
  const BacktestOptions opts = backtest_options(g, parsed.series);
  const SweepResult result = run_sweep(parsed.series, spec, opts);
  const std::string csv = sweep_csv(result);
  if (g.out_dir.empty()) {
    out << csv;
  } else {
    write_file(g, "sweep.csv", csv);
    ordered_json j;
    j["cells"] = result.cells;
    j["skipped"] = result.skipped;
    j["filtered"] = result.filtered;
    j["rows"] = result.rows.size();
    j["objective"] = std::string(to_string(spec.objective));
    out << j.dump(2) << "\n";
  }
  return kExitOk;
}

int cmd_kelly(const GlobalOptions& g, const CommandOptions& c, std::ostream& out) {
  const KellyParams params{c.kelly_p, c.kelly_l, c.kelly_m};
  params.validate();
  const double x = optimal_fraction(params);
  const auto curve = kelly_curve(params, c.kelly_grid);
  ordered_json j;
  j["p"] = params.p;
  j["l_gain"] = params.l_gain;
  j["m_loss"] = params.m_loss;
  j["optimal_fraction"] = x;
  j["expected_log_return"] = expected_log_return(x, params);
  j["half_kelly_expected_log_return"] = expected_log_return(x / 2.0, params);
  j["grid_points"] = curve.size();
  if (g.out_dir.empty()) {
    ordered_json pts = ordered_json::array();
    for (const KellyPoint& p : curve) pts.push_back({p.x, p.value});
    j["curve"] = std::move(pts);
  } else {
    write_file(g, "kelly_curve.csv", kelly_curve_csv(curve));
  }
  out << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_report(const GlobalOptions&, const CommandOptions& c, std::ostream& out) {
  if (c.report.empty()) throw Error(ErrorKind::MissingInput, "report: --report is required");
  std::ifstream in(c.report, std::ios::binary);
  if (!in) throw Error(ErrorKind::MissingInput, fmt::format("cannot read '{}'", c.report));
  std::ostringstream buf;
  buf << in.rdbuf();
  out << report_text(report_from_json(buf.str()));
  return kExitOk;
}

void write_error(std::ostream& err, std::string_view kind, std::string_view message,
                 std::optional<std::size_t> row) {
  ordered_json e;
  e["kind"] = kind;
  e["message"] = message;
  e["row"] = row ? ordered_json(*row) : ordered_json(nullptr);
  ordered_json j;
  j["error"] = std::move(e);
  err << j.dump() << "\n";
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  GlobalOptions g;
  CommandOptions c;

  CLI::App app{"qstrat: technical-analysis backtesting toolkit", "qstrat"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--data", g.data, "OHLCV CSV input");
  app.add_option("--config", g.config, "Key-value config file (strategy and sweep)");
  app.add_option("--out-dir", g.out_dir, "Directory for output artifacts (default: stdout)");
  app.add_option("--trading-days", g.trading_days, "Bars per year")->capture_default_str();
  app.add_flag("--strict", g.strict, "Reject malformed rows (default)");
  app.add_flag("--lenient", g.lenient, "Repair OHLC inconsistencies with warnings");
  app.add_flag("--use-adjusted", g.use_adjusted, "Use adj_close as the close");
  app.add_option("--benchmark", g.benchmark, "'self' or a benchmark CSV path")
      ->capture_default_str();
  app.add_option("--set", g.sets, "Config override key=value (repeatable)");
  app.add_option("--threads", g.threads, "Sweep worker threads (0 = all cores)");

  auto* ingest = app.add_subcommand("ingest", "Validate and normalize a CSV");
  auto* indicators = app.add_subcommand("indicators", "Dump indicator columns");
  indicators->add_option("-i,--indicator", c.indicators, "Indicator spec, e.g. sma:50")
      ->required();
  auto* backtest = app.add_subcommand("backtest", "Run one strategy");
  backtest->add_option("--strategy", c.strategy, "Strategy kind (overrides strategy.kind)");
  auto* sweep = app.add_subcommand("sweep", "Parameter grid search");
  sweep->add_option("--strategy", c.strategy, "Strategy kind (overrides strategy.kind)");
  sweep->add_option("--objective", c.objective, "sharpe|ir|rr");
  sweep->add_option("--min-trades", c.min_trades, "Minimum buy count");
  auto* kelly = app.add_subcommand("kelly", "Kelly fraction and log-return curve");
  kelly->add_option("--p", c.kelly_p, "Win probability")->capture_default_str();
  kelly->add_option("--gain", c.kelly_l, "Gain multiple L")->capture_default_str();
  kelly->add_option("--loss", c.kelly_m, "Loss multiple M")->capture_default_str();
  kelly->add_option("--grid", c.kelly_grid, "Curve grid points")->capture_default_str();
  auto* report = app.add_subcommand("report", "Render a report JSON as text");
  report->add_option("--report", c.report, "Report JSON written by backtest");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    write_error(err, "InvalidConfig", e.what(), std::nullopt);
    return kExitInputError;
  }

  try {
    if (ingest->parsed()) return cmd_ingest(g, out);
    if (indicators->parsed()) return cmd_indicators(g, c, out);
    if (backtest->parsed()) return cmd_backtest(g, c, out);
    if (sweep->parsed()) return cmd_sweep(g, c, out);
    if (kelly->parsed()) return cmd_kelly(g, c, out);
    if (report->parsed()) return cmd_report(g, c, out);
  } catch (const Error& e) {
    write_error(err, to_string(e.kind()), e.what(), e.row());
    return is_input_error(e.kind()) ? kExitInputError : kExitDomainError;
  } catch (const fs::filesystem_error& e) {
    write_error(err, "MissingInput", e.what(), std::nullopt);
    return kExitInputError;
  } catch (const std::exception& e) {
    write_error(err, "DomainError", e.what(), std::nullopt);
    return kExitDomainError;
  }
  return kExitInputError;
}

} // namespace qstrat::cli
