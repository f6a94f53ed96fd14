#include "error_capture.hpp"

#include "qstrat/config.hpp"

#include <gtest/gtest.h>

namespace qstrat {
namespace {

using testing::kind_of;
using testing::row_of;

TEST(ConfigTree, SectionsCommentsAndQuotes) {
  const auto t = ConfigTree::parse(
      "\xEF\xBB\xBF# top comment\n"
      "; also a comment\n"
      "title = \"demo run\"\n"
      "[strategy]\n"
      "kind = two_average   # inline\n"
      "fast.period=5\r\n"
      "\n"
      "[sweep.range]\n"
      "fast.period = 3:6:1\n");
  EXPECT_EQ(t.get("title"), "demo run");
  EXPECT_EQ(t.get("strategy.kind"), "two_average");
  EXPECT_EQ(t.get("strategy.fast.period"), "5");
  EXPECT_EQ(t.get("sweep.range.fast.period"), "3:6:1");
  EXPECT_FALSE(t.contains("kind"));
  EXPECT_EQ(t.keys_under("strategy"),
            (std::vector<std::string>{"strategy.fast.period", "strategy.kind"}));
}

TEST(ConfigTree, LaterAssignmentWins) {
  auto t = ConfigTree::parse("a = 1\na = 2\n");
  EXPECT_EQ(t.get("a"), "2");
  t.apply_override("a=3");
  EXPECT_EQ(t.get("a"), "3");
  t.apply_override(" b.c = x y ");
  EXPECT_EQ(t.get("b.c"), "x y");
}

TEST(ConfigTree, MalformedLinesReportLineNumber) {
  EXPECT_EQ(kind_of([] { ConfigTree::parse("a = 1\nnot an assignment\n"); }),
            ErrorKind::InvalidConfig);
  EXPECT_EQ(row_of([] { ConfigTree::parse("a = 1\nnot an assignment\n"); }), 2u);
  EXPECT_EQ(row_of([] { ConfigTree::parse("\n\n[strategy\n"); }), 3u);
  EXPECT_EQ(kind_of([] { ConfigTree::parse("= 4\n"); }), ErrorKind::InvalidConfig);
  ConfigTree t;
  EXPECT_EQ(kind_of([&] { t.apply_override("novalue"); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([&] { t.apply_override("=1"); }), ErrorKind::InvalidConfig);
}

TEST(ConfigTree, MissingFile) {
  EXPECT_EQ(kind_of([] { ConfigTree::load("/nonexistent/qstrat.conf"); }),
            ErrorKind::MissingInput);
}

TEST(ConfigValues, StrictNumbers) {
  EXPECT_EQ(parse_count("k", "12"), 12u);
  EXPECT_EQ(parse_int("k", "-3"), -3);
  EXPECT_DOUBLE_EQ(parse_real("k", "0.0024"), 0.0024);
  EXPECT_EQ(kind_of([] { parse_count("k", "-1"); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] { parse_count("k", "12x"); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] { parse_int("k", ""); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] { parse_real("k", "nan"); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] { parse_real("k", "1.5.2"); }), ErrorKind::InvalidConfig);
}

TEST(StrategyConfig, TwoAverageWithAdaptiveSlow) {
  const auto t = ConfigTree::parse(
      "[strategy]\nkind = two_average\nfast.type = sma\nfast.period = 5\n"
      "slow.type = ama\nslow.long = 51\nslow.short = 5\nslow.ada_win = 12\nslow.matype = sma\n");
  const auto cfg = strategy_from_config(t);
  const auto& c = std::get<strategy::TwoAverage>(cfg);
  EXPECT_EQ(std::get<PlainMa>(c.fast).period, 5u);
  const auto& a = std::get<AmaParams>(c.slow);
  EXPECT_EQ(a.timeperiod_long, 51u);
  EXPECT_EQ(a.timeperiod_short, 5u);
  EXPECT_EQ(a.ada_win, 12u);
  EXPECT_EQ(a.matype, AmaType::Sma);
}

TEST(StrategyConfig, DefaultsFillUnsetKeys) {
  const auto cfg = strategy_from_config(ConfigTree::parse("strategy.kind = rsi\n"));
  const auto& r = std::get<strategy::Rsi>(cfg);
  const strategy::Rsi def;
  EXPECT_EQ(r.n, def.n);
  EXPECT_EQ(r.down_thres, def.down_thres);
  EXPECT_EQ(r.diff_rate, def.diff_rate);
}

TEST(StrategyConfig, Rejections) {
  EXPECT_EQ(kind_of([] { strategy_from_config(ConfigTree{}); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] { strategy_from_config(ConfigTree::parse("strategy.kind = turtle\n")); }),
            ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] {
              strategy_from_config(ConfigTree::parse("strategy.kind = macd\nstrategy.fast = 3\n"));
            }),
            ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] {
              strategy_from_config(
                  ConfigTree::parse("strategy.kind = price_cross\nstrategy.ma.type = wma\n"));
            }),
            ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] {
              strategy_from_config(
                  ConfigTree::parse("strategy.kind = keltner\nstrategy.mult = two\n"));
            }),
            ErrorKind::InvalidConfig);
}

TEST(StrategyConfig, RoundTripEveryKind) {
  const std::vector<StrategyConfig> configs = {
      strategy::TwoAverage{PlainMa{MaKind::Ema, 7}, AmaParams{40, 3, 9, AmaType::Sma}},
      strategy::PriceCross{AmaParams{}},
      strategy::Keltner{PlainMa{MaKind::Sma, 11}, 1.25},
      strategy::Rsi{10, 25.0, 75.0, 0.003, 2, 30, 0.002},
      strategy::Aroon{20, 2, 40.0},
      strategy::Bollinger{PlainMa{MaKind::Ema, 15}, 1.5},
      strategy::Macd{8, 21, 5},
      strategy::BuyAndHold{},
  };
  for (const auto& cfg : configs) {
    const ConfigTree once = strategy_to_config(cfg);
    const ConfigTree twice = strategy_to_config(strategy_from_config(once));
    EXPECT_EQ(once, twice) << strategy_name(cfg);
    EXPECT_EQ(once.get("strategy.kind"), std::string(strategy_name(cfg)));
  }
}

} // namespace
} // namespace qstrat
