#include "qstrat/sweep.hpp"

#include "qstrat/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

namespace qstrat {

namespace {

constexpr std::size_t kMaxGridCells = 1'000'000;

bool looks_integral(std::string_view s) {
  return s.find_first_of(".eE") == std::string_view::npos;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

// Numeric order when both values parse as numbers, string order otherwise.
bool value_less(const std::string& a, const std::string& b) {
  double x = 0.0;
  double y = 0.0;
  const auto ra = std::from_chars(a.data(), a.data() + a.size(), x);
  const auto rb = std::from_chars(b.data(), b.data() + b.size(), y);
  const bool na = ra.ec == std::errc{} && ra.ptr == a.data() + a.size();
  const bool nb = rb.ec == std::errc{} && rb.ptr == b.data() + b.size();
  if (na && nb && x != y) return x < y;
  if (na != nb) return na;
  return a < b;
}

bool params_less(const SweepRow& a, const SweepRow& b) {
  for (std::size_t k = 0; k < a.params.size(); ++k) {
    const auto& x = a.params[k].second;
    const auto& y = b.params[k].second;
    if (value_less(x, y)) return true;
    if (value_less(y, x)) return false;
  }
  return false;
}

std::optional<double> objective_value(const MetricReport& r, Objective objective) {
  switch (objective) {
  case Objective::SharpeAnnual: return r.sharpe_annual;
  case Objective::IrAnnual: return r.ir_annual;
  case Objective::RrWhole: return r.rr_whole;
  }
  return std::nullopt;
}

bool skippable(ErrorKind kind) {
  return kind == ErrorKind::InvalidParams || kind == ErrorKind::ZeroPeriod ||
         kind == ErrorKind::TooShort;
}

struct CellOutcome {
  std::optional<SweepRow> row;
  bool skipped = false;
  std::exception_ptr error;
};

} // namespace

std::string_view to_string(Objective objective) noexcept {
  switch (objective) {
  case Objective::SharpeAnnual: return "sharpe";
  case Objective::IrAnnual: return "ir";
  case Objective::RrWhole: return "rr";
  }
  return "?";
}

Objective parse_objective(std::string_view text) {
  if (text == "sharpe") return Objective::SharpeAnnual;
  if (text == "ir") return Objective::IrAnnual;
  if (text == "rr") return Objective::RrWhole;
  throw Error(ErrorKind::InvalidConfig,
              fmt::format("unknown sweep objective '{}' (sharpe|ir|rr)", text));
}

ParamRange parse_param_range(std::string key, std::string_view text) {
  ParamRange out{std::move(key), {}};
  text = trim(text);
  if (text.find(':') == std::string_view::npos) {
    while (true) {
      const std::size_t comma = text.find(',');
      const std::string_view item = trim(text.substr(0, comma));
      if (item.empty()) {
        throw Error(ErrorKind::InvalidConfig,
                    fmt::format("sweep range '{}' has an empty list item", out.key));
      }
      out.values.emplace_back(item);
      if (comma == std::string_view::npos) break;
      text.remove_prefix(comma + 1);
    }
    return out;
  }

  std::vector<std::string_view> parts;
  while (true) {
    const std::size_t colon = text.find(':');
    parts.push_back(trim(text.substr(0, colon)));
    if (colon == std::string_view::npos) break;
    text.remove_prefix(colon + 1);
  }
  if (parts.size() != 3) {
    throw Error(ErrorKind::InvalidConfig,
                fmt::format("sweep range '{}' must be start:stop:step", out.key));
  }
  const std::string label = "sweep.range." + out.key;
  const double start = parse_real(label, parts[0]);
  const double stop = parse_real(label, parts[1]);
  const double step = parse_real(label, parts[2]);
  if (!(step > 0.0) || stop < start) {
    throw Error(ErrorKind::InvalidConfig,
                fmt::format("sweep range '{}' needs step > 0 and stop >= start", out.key));
  }
  const double span = (stop - start) / step;
  if (span >= static_cast<double>(kMaxGridCells)) {
    throw Error(ErrorKind::InvalidConfig, fmt::format("sweep range '{}' is too large", out.key));
  }
  const auto steps = static_cast<std::size_t>(std::floor(span + 1e-9));
  const bool integral = looks_integral(parts[0]) && looks_integral(parts[1]) &&
                        looks_integral(parts[2]);
  for (std::size_t k = 0; k <= steps; ++k) {
    const double v = start + static_cast<double>(k) * step;
    out.values.push_back(integral ? fmt::format("{}", static_cast<long long>(std::llround(v)))
                                  : fmt::format("{:.12g}", v));
  }
  return out;
}

SweepSpec sweep_spec_from_config(const ConfigTree& tree) {
  SweepSpec spec;
  spec.base = tree;
  const std::string range_prefix = "sweep.range.";
  for (const std::string& key : tree.keys_under("sweep")) {
    const std::string value = *tree.get(key);
    if (key == "sweep.objective") {
      spec.objective = parse_objective(value);
    } else if (key == "sweep.min_trades") {
      spec.min_trades = parse_count(key, value);
    } else if (key == "sweep.threads") {
      spec.threads = parse_count(key, value);
    } else if (key.starts_with(range_prefix) && key.size() > range_prefix.size()) {
      spec.ranges.push_back(parse_param_range(key.substr(range_prefix.size()), value));
    } else {
      throw Error(ErrorKind::InvalidConfig, fmt::format("unknown config key '{}'", key));
    }
  }
  return spec;
}

std::size_t grid_size(const SweepSpec& spec) noexcept {
  std::size_t n = 1;
  for (const ParamRange& r : spec.ranges) {
    if (r.values.empty()) return 0;
    if (n > kMaxGridCells / r.values.size()) return kMaxGridCells + 1;
    n *= r.values.size();
  }
  return n;
}

SweepResult run_sweep(const OhlcvSeries& series, const SweepSpec& spec,
                      const BacktestOptions& options) {
  const std::size_t cells = grid_size(spec);
  if (cells == 0) throw Error(ErrorKind::InvalidConfig, "sweep grid is empty");
  if (cells > kMaxGridCells) {
    throw Error(ErrorKind::InvalidConfig,
                fmt::format("sweep grid exceeds {} cells", kMaxGridCells));
  }

  // Cell c maps to one value per range, the first range varying slowest.
  const auto cell_params = [&](std::size_t c) {
    std::vector<std::pair<std::string, std::string>> params(spec.ranges.size());
    for (std::size_t k = spec.ranges.size(); k-- > 0;) {
      const ParamRange& r = spec.ranges[k];
      params[k] = {r.key, r.values[c % r.values.size()]};
      c /= r.values.size();
    }
    return params;
  };

  std::vector<CellOutcome> outcomes(cells);
  const auto evaluate = [&](std::size_t c) {
    CellOutcome& out = outcomes[c];
    try {
      auto params = cell_params(c);
      ConfigTree tree = spec.base;
      for (const auto& [key, value] : params) tree.set("strategy." + key, value);
      const StrategyConfig config = strategy_from_config(tree);
      try {
        validate(config);
        BacktestResult result = run_strategy(series, config, options);
        SweepRow row;
        row.params = std::move(params);
        row.objective = objective_value(result.report, spec.objective);
        row.report = std::move(result.report);
        out.row = std::move(row);
      } catch (const Error& e) {
        if (!skippable(e.kind())) throw;
        out.skipped = true;
      }
    } catch (...) {
      out.error = std::current_exception();
    }
  };

  std::size_t workers = spec.threads == 0 ? std::thread::hardware_concurrency() : spec.threads;
  workers = std::clamp<std::size_t>(workers, 1, cells);
  if (workers == 1) {
    for (std::size_t c = 0; c < cells; ++c) evaluate(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t c = next.fetch_add(1); c < cells; c = next.fetch_add(1)) evaluate(c);
      });
    }
  }

  SweepResult result;
  result.cells = cells;
  for (CellOutcome& out : outcomes) {
    if (out.error) std::rethrow_exception(out.error);
    if (out.skipped) {
      ++result.skipped;
      continue;
    }
    if (out.row->report.buy_count < spec.min_trades) {
      ++result.filtered;
      continue;
    }
    result.rows.push_back(std::move(*out.row));
  }
  if (result.rows.empty()) {
    throw Error(ErrorKind::EmptyGridAfterFilter,
                fmt::format("no sweep cell left: {} cells, {} skipped, {} below min_trades={}",
                            cells, result.skipped, result.filtered, spec.min_trades));
  }

  std::stable_sort(result.rows.begin(), result.rows.end(),
                   [](const SweepRow& a, const SweepRow& b) {
                     const double x = a.objective.value_or(-std::numeric_limits<double>::infinity());
                     const double y = b.objective.value_or(-std::numeric_limits<double>::infinity());
                     if (x != y) return x > y;
                     return params_less(a, b);
                   });
  return result;
}

} // namespace qstrat
