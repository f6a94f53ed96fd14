#include "qstrat/strategies.hpp"

#include "qstrat/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace qstrat {

namespace {

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

// Long-only position state shared by every strategy.
class Position {
public:
  bool is_long() const noexcept { return long_; }

  void buy(std::size_t i) {
    if (long_) return;
    signals_.push_back({i, Action::Buy});
    long_ = true;
  }
  void sell(std::size_t i) {
    if (!long_) return;
    signals_.push_back({i, Action::Sell});
    long_ = false;
  }
  SignalList take() { return std::move(signals_); }

private:
  bool long_ = false;
  SignalList signals_;
};

// Strict crossover of `a` over `b` on bars [start, end): Buy when a moves from
// below to above, Sell on the mirror.
SignalList cross_signals(std::span<const double> a, std::span<const double> b,
                         std::size_t start) {
  Position pos;
  for (std::size_t i = std::max<std::size_t>(start, 1); i < a.size(); ++i) {
    if (a[i - 1] < b[i - 1] && a[i] > b[i]) {
      pos.buy(i);
    } else if (a[i - 1] > b[i - 1] && a[i] < b[i]) {
      pos.sell(i);
    }
  }
  return pos.take();
}

void require_length(const OhlcvSeries& series, std::size_t start, std::string_view name) {
  if (series.size() <= start) {
    throw Error(ErrorKind::TooShort,
                fmt::format("{}: need more than {} bars, got {}", name, start, series.size()));
  }
}

void require_listing_length(const OhlcvSeries& series, std::string_view name) {
  if (series.size() <= kListingScanStart + 1) {
    throw Error(ErrorKind::TooShort, fmt::format("{}: need more than {} bars, got {}", name,
                                                 kListingScanStart + 1, series.size()));
  }
}

void invalid(std::string_view message) { throw Error(ErrorKind::InvalidParams, std::string(message)); }

void require_nonnegative(double v, std::string_view what) {
  if (!std::isfinite(v) || v < 0.0) invalid(fmt::format("{} must be finite and >= 0", what));
}

std::size_t band_start(const MaSpec& ma) {
  return std::max(ma_warmup(ma), ma_period(ma) - 1) + 1;
}

} // namespace

std::string_view to_string(Action action) noexcept {
  return action == Action::Buy ? "Buy" : "Sell";
}

void validate_signals(std::span<const SignalEvent> signals, std::size_t series_len) {
  for (std::size_t k = 0; k < signals.size(); ++k) {
    const SignalEvent& e = signals[k];
    if (e.bar_index >= series_len) {
      throw Error(ErrorKind::IndexOutOfRange,
                  fmt::format("signal {} at bar {} outside series of {} bars", k, e.bar_index,
                              series_len));
    }
    const Action expected = k % 2 == 0 ? Action::Buy : Action::Sell;
    if (e.action != expected) {
      throw Error(ErrorKind::NonAlternatingSignals,
                  fmt::format("signal {} should be {}", k, to_string(expected)));
    }
    if (k > 0 && e.bar_index <= signals[k - 1].bar_index) {
      throw Error(ErrorKind::NonAlternatingSignals,
                  fmt::format("signal {} does not advance past bar {}", k,
                              signals[k - 1].bar_index));
    }
  }
}

std::string_view strategy_name(const StrategyConfig& config) noexcept {
  return std::visit(overloaded{
                        [](const strategy::TwoAverage&) { return "two_average"; },
                        [](const strategy::PriceCross&) { return "price_cross"; },
                        [](const strategy::Keltner&) { return "keltner"; },
                        [](const strategy::Rsi&) { return "rsi"; },
                        [](const strategy::Aroon&) { return "aroon"; },
                        [](const strategy::Bollinger&) { return "bollinger"; },
                        [](const strategy::Macd&) { return "macd"; },
                        [](const strategy::BuyAndHold&) { return "buy_and_hold"; },
                    },
                    config);
}

void validate(const StrategyConfig& config) {
  std::visit(overloaded{
                 [](const strategy::TwoAverage& c) {
                   validate(c.fast);
                   validate(c.slow);
                 },
                 [](const strategy::PriceCross& c) { validate(c.ma); },
                 [](const strategy::Keltner& c) {
                   validate(c.ma);
                   require_nonnegative(c.mult, "keltner mult");
                 },
                 [](const strategy::Rsi& c) {
                   if (c.n == 0) throw Error(ErrorKind::ZeroPeriod, "rsi: period must be >= 1");
                   if (!(c.down_thres >= 0.0 && c.down_thres < c.upper_thres &&
                         c.upper_thres <= 100.0)) {
                     invalid("rsi: need 0 <= down_thres < upper_thres <= 100");
                   }
                   require_nonnegative(c.diff_rate, "rsi diff_rate");
                   if (c.rsitype != 1 && c.rsitype != 2) invalid("rsi: rsitype must be 1 or 2");
                   if (c.rsitype == 2 && c.sma_n == 0) {
                     throw Error(ErrorKind::ZeroPeriod, "rsi: sma_n must be >= 1");
                   }
                   require_nonnegative(c.sma_rate, "rsi sma_rate");
                 },
                 [](const strategy::Aroon& c) {
                   if (c.n == 0) throw Error(ErrorKind::ZeroPeriod, "aroon: period must be >= 1");
                   if (c.aroon_type != 1 && c.aroon_type != 2) {
                     invalid("aroon: aroon_type must be 1 or 2");
                   }
                   if (!(c.weak_thres > 0.0 && c.weak_thres < 100.0)) {
                     invalid("aroon: weak_thres must lie in (0, 100)");
                   }
                 },
                 [](const strategy::Bollinger& c) {
                   validate(c.ma);
                   require_nonnegative(c.dev, "bollinger dev");
                 },
                 [](const strategy::Macd& c) {
                   if (c.short_n == 0 || c.long_n == 0 || c.signal_n == 0) {
                     throw Error(ErrorKind::ZeroPeriod, "macd: periods must be >= 1");
                   }
                 },
                 [](const strategy::BuyAndHold&) {},
             },
             config);
}

std::size_t scan_start(const StrategyConfig& config) noexcept {
  return std::visit(
      overloaded{
          [](const strategy::TwoAverage& c) -> std::size_t {
            return std::max(ma_warmup(c.fast), ma_warmup(c.slow)) + 1;
          },
          [](const strategy::PriceCross& c) -> std::size_t { return ma_warmup(c.ma) + 1; },
          [](const strategy::Keltner& c) -> std::size_t { return band_start(c.ma); },
          [](const strategy::Rsi&) -> std::size_t { return kListingScanStart; },
          [](const strategy::Aroon&) -> std::size_t { return kListingScanStart; },
          [](const strategy::Bollinger& c) -> std::size_t { return band_start(c.ma); },
          [](const strategy::Macd& c) -> std::size_t {
            return std::max(c.short_n, c.long_n) - 1 + c.signal_n - 1 + 1;
          },
          [](const strategy::BuyAndHold&) -> std::size_t { return 0; },
      },
      config);
}

SignalList two_average_signals(const OhlcvSeries& series, const strategy::TwoAverage& cfg) {
  validate(StrategyConfig{cfg});
  const std::size_t start = scan_start(cfg);
  require_length(series, start, "two_average");
  const auto fast = moving_average(series.closes(), cfg.fast);
  const auto slow = moving_average(series.closes(), cfg.slow);
  return cross_signals(fast.values, slow.values, start);
}

SignalList price_cross_signals(const OhlcvSeries& series, const strategy::PriceCross& cfg) {
  validate(StrategyConfig{cfg});
  const std::size_t start = scan_start(cfg);
  require_length(series, start, "price_cross");
  const auto ma = moving_average(series.closes(), cfg.ma);
  return cross_signals(series.closes(), ma.values, start);
}

SignalList keltner_signals(const OhlcvSeries& series, const strategy::Keltner& cfg) {
  validate(StrategyConfig{cfg});
  const std::size_t start = scan_start(cfg);
  require_length(series, start, "keltner");
  const BandSet bands = keltner(series, cfg.ma, cfg.mult);
  const auto close = series.closes();
  Position pos;
  for (std::size_t i = start; i < series.size(); ++i) {
    if (!pos.is_long() && close[i - 1] <= bands.upper[i - 1] && close[i] > bands.upper[i]) {
      pos.buy(i);
    } else if (pos.is_long() && close[i - 1] >= bands.lower[i - 1] &&
               close[i] < bands.lower[i]) {
      pos.sell(i);
    }
  }
  return pos.take();
}

SignalList rsi_signals(const OhlcvSeries& series, const strategy::Rsi& cfg) {
  validate(StrategyConfig{cfg});
  require_listing_length(series, "rsi");
  const auto close = series.closes();
  const IndicatorSeries strength = rsi(close, cfg.n);
  IndicatorSeries average;
  if (cfg.rsitype == 2) average = sma(close, cfg.sma_n);

  Position pos;
  for (std::size_t i = kListingScanStart; i + 1 < series.size(); ++i) {
    bool oversold_gate = true;
    bool overbought_gate = true;
    if (cfg.rsitype == 2) {
      oversold_gate = close[i] < (1.0 - cfg.sma_rate) * average[i];
      overbought_gate = close[i] > (1.0 + cfg.sma_rate) * average[i];
    }
    if (strength[i] < cfg.down_thres && oversold_gate) {
      const double downrate = (close[i - 1] - close[i]) / close[i - 1];
      if (downrate <= cfg.diff_rate && downrate >= 0.0) pos.buy(i);
    } else if (strength[i] > cfg.upper_thres && overbought_gate) {
      const double uprate = (close[i] - close[i - 1]) / close[i - 1];
      if (uprate <= cfg.diff_rate && uprate >= 0.0) pos.sell(i);
    }
  }
  return pos.take();
}

SignalList aroon_signals(const OhlcvSeries& series, const strategy::Aroon& cfg) {
  validate(StrategyConfig{cfg});
  require_listing_length(series, "aroon");
  const AroonLines lines = aroon(series, cfg.n);
  const auto& up = lines.up;
  const auto& down = lines.down;

  Position pos;
  for (std::size_t i = kListingScanStart; i + 1 < series.size(); ++i) {
    bool buy_gate = true;
    bool sell_gate = true;
    if (cfg.aroon_type == 2) {
      buy_gate = down[i] < cfg.weak_thres;
      sell_gate = up[i] < cfg.weak_thres;
    }
    if (up[i - 1] < down[i - 1] && up[i] > down[i] && buy_gate && !pos.is_long()) {
      pos.buy(i);
    } else if (up[i - 1] > down[i - 1] && up[i] < down[i] && sell_gate && pos.is_long()) {
      pos.sell(i);
    }
  }
  return pos.take();
}

SignalList bollinger_signals(const OhlcvSeries& series, const strategy::Bollinger& cfg) {
  validate(StrategyConfig{cfg});
  const std::size_t start = scan_start(cfg);
  require_length(series, start, "bollinger");
  const BandSet bands = bollinger(series, cfg.ma, cfg.dev);
  const auto close = series.closes();
  Position pos;
  for (std::size_t i = start; i < series.size(); ++i) {
    if (!pos.is_long() && close[i - 1] >= bands.lower[i - 1] && close[i] < bands.lower[i]) {
      pos.buy(i);
    } else if (pos.is_long() && close[i - 1] <= bands.upper[i - 1] &&
               close[i] > bands.upper[i]) {
      pos.sell(i);
    }
  }
  return pos.take();
}

SignalList macd_signals(const OhlcvSeries& series, const strategy::Macd& cfg) {
  validate(StrategyConfig{cfg});
  const std::size_t start = scan_start(cfg);
  require_length(series, start, "macd");
  const MacdLines lines = macd(series.closes(), cfg.short_n, cfg.long_n, cfg.signal_n);
  return cross_signals(lines.macd.values, lines.signal.values, start);
}

SignalList generate_signals(const OhlcvSeries& series, const StrategyConfig& config) {
  return std::visit(
      overloaded{
          [&](const strategy::TwoAverage& c) { return two_average_signals(series, c); },
          [&](const strategy::PriceCross& c) { return price_cross_signals(series, c); },
          [&](const strategy::Keltner& c) { return keltner_signals(series, c); },
          [&](const strategy::Rsi& c) { return rsi_signals(series, c); },
          [&](const strategy::Aroon& c) { return aroon_signals(series, c); },
          [&](const strategy::Bollinger& c) { return bollinger_signals(series, c); },
          [&](const strategy::Macd& c) { return macd_signals(series, c); },
          [&](const strategy::BuyAndHold&) { return SignalList{{0, Action::Buy}}; },
      },
      config);
}

} // namespace qstrat
