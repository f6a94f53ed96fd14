#include "generators.hpp"

#include "qstrat/report_io.hpp"
#include "qstrat_cli/cli.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace qstrat {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  Run r;
  r.code = cli::run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

class CliTest : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qstrat_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& content) {
    const fs::path p = dir_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p.string();
  }

  fs::path dir_;
  const std::string v_ = testing::fixture_path("v_fixture.csv");
};

TEST_F(CliTest, MissingDataFileIsAnInputError) {
  const auto r = run({"backtest", "--data", (dir_ / "absent.csv").string(), "--strategy", "macd"});
  EXPECT_EQ(r.code, cli::kExitInputError);
  const auto j = json::parse(r.err);
  EXPECT_EQ(j.at("error").at("kind"), "MissingInput");
  EXPECT_TRUE(r.out.empty());
}

TEST_F(CliTest, UnknownOptionIsAnInputError) {
  const auto r = run({"backtest", "--frobnicate"});
  EXPECT_EQ(r.code, cli::kExitInputError);
  EXPECT_EQ(json::parse(r.err).at("error").at("kind"), "InvalidConfig");
}

TEST_F(CliTest, BadRowReportsRow) {
  const auto r = run({"ingest", "--data", testing::fixture_path("close_above_high.csv")});
  EXPECT_EQ(r.code, cli::kExitInputError);
  const auto j = json::parse(r.err);
  EXPECT_EQ(j.at("error").at("row"), 2);
}

TEST_F(CliTest, InvalidKellyParamsIsADomainError) {
  const auto r = run({"kelly", "--p", "1.5"});
  EXPECT_EQ(r.code, cli::kExitDomainError);
}

TEST_F(CliTest, IngestRoundTrips) {
  const auto first = run({"ingest", "--data", v_});
  ASSERT_EQ(first.code, 0) << first.err;
  const std::string copy = write("copy.csv", first.out);
  const auto second = run({"ingest", "--data", copy});
  ASSERT_EQ(second.code, 0) << second.err;
  EXPECT_EQ(first.out, second.out);
}

TEST_F(CliTest, IndicatorDumpColumns) {
  const auto r = run({"indicators", "--data", v_, "-i", "sma:50", "-i", "ema:50", "-i",
                      "ama:30:2:10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto table = read_indicator_csv(r.out);
  ASSERT_EQ(table.columns.size(), 3u);
  EXPECT_EQ(table.columns[0].name, "sma_50");
  EXPECT_EQ(table.columns[1].name, "ema_50");
  EXPECT_EQ(table.columns[2].name, "ama_30_2_10");
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "index,close,sma_50,ema_50,ama_30_2_10");
  // Re-serializing the parsed dump reproduces it byte for byte.
  EXPECT_EQ(indicator_csv(table.closes, table.columns), r.out);
}

TEST_F(CliTest, ConstantSeriesIndicatorsEqualClose) {
  const std::vector<double> closes(120, 42.5);
  const std::string path = write("flat.csv", to_csv(testing::series_from_closes(closes)));
  const auto r = run({"indicators", "--data", path, "-i", "sma:50", "-i", "ema:50", "-i",
                      "ama:30:2:10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto table = read_indicator_csv(r.out);
  for (const auto& col : table.columns) {
    for (std::size_t i = 0; i < col.values.size(); ++i) EXPECT_EQ(col.values[i], 42.5) << col.name;
  }
}

TEST_F(CliTest, BacktestWritesArtifacts) {
  const auto r = run({"--out-dir", dir_.string(), "backtest", "--data", v_, "--set",
                      "strategy.kind=two_average"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"report.json", "equity.csv", "signals.csv", "trades.csv"}) {
    EXPECT_TRUE(fs::exists(dir_ / f)) << f;
  }
  const auto report = report_from_json(slurp(dir_ / "report.json"));
  EXPECT_EQ(r.out, report_text(report));
  const auto rendered = run({"report", "--report", (dir_ / "report.json").string()});
  ASSERT_EQ(rendered.code, 0) << rendered.err;
  EXPECT_EQ(rendered.out, r.out);
}

TEST_F(CliTest, StrategyFlagOverridesConfig) {
  const std::string conf = write("s.conf", "[strategy]\nkind = rsi\n");
  const auto r = run({"--config", conf, "backtest", "--data", v_, "--strategy", "buy_and_hold"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j.at("strategy"), "buy_and_hold");
  EXPECT_EQ(j.at("buy_count"), 1);
}

TEST_F(CliTest, SweepRanksRows) {
  const auto r = run({"sweep", "--data", v_, "--strategy", "two_average", "--set",
                      "sweep.range.fast.period=2:5:1", "--objective", "rr"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "fast.period,buy_count,rr_whole,rr_per_year,mdd,sr,ir,vol_annual,objective");
  std::vector<double> objective;
  while (std::getline(lines, line)) objective.push_back(std::stod(line.substr(line.rfind(',') + 1)));
  ASSERT_EQ(objective.size(), 4u);
  for (std::size_t i = 1; i < objective.size(); ++i) EXPECT_GE(objective[i - 1], objective[i]);
}

TEST_F(CliTest, KellyJson) {
  const auto r = run({"kelly"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j.at("optimal_fraction").get<double>(), 0.809090909, 1e-8);
  EXPECT_EQ(j.at("curve").size(), 101u);
}

TEST_F(CliTest, OutputIsDeterministic) {
  const std::vector<std::vector<std::string>> commands = {
      {"ingest", "--data", v_},
      {"indicators", "--data", v_, "-i", "rsi:14", "-i", "bollinger:20:2"},
      {"backtest", "--data", v_, "--strategy", "macd"},
      {"--threads", "3", "sweep", "--data", v_, "--strategy", "price_cross", "--set",
       "sweep.range.ma.period=10:30:5"},
      {"kelly", "--grid", "11"},
  };
  for (const auto& cmd : commands) {
    const auto a = run(cmd);
    const auto b = run(cmd);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
  }
}

} // namespace
} // namespace qstrat
