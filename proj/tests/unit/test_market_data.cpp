#include "error_capture.hpp"
#include "generators.hpp"

#include "qstrat/error.hpp"
#include "qstrat/market_data.hpp"

#include <gtest/gtest.h>

#include <chrono>

namespace qstrat {
namespace {

using namespace std::chrono;

using testing::kind_of;
using testing::row_of;

TEST(ParseDate, AcceptsIsoDates) {
  EXPECT_EQ(parse_date("2020-02-29"), year{2020} / February / 29);
  EXPECT_EQ(format_date(year{2011} / January / 3), "2011-01-03");
}

TEST(ParseDate, RejectsMalformedOrNonexistentDays) {
  EXPECT_FALSE(parse_date("2021-02-29"));
  EXPECT_FALSE(parse_date("2021-2-01"));
  EXPECT_FALSE(parse_date("01/02/2021"));
  EXPECT_FALSE(parse_date("2021-01-01x"));
  EXPECT_FALSE(parse_date(""));
}

TEST(ParseCsv, ThreeRowFileGivesThreeBarsAndNoWarnings) {
  const ParseResult r = parse_csv(testing::fixture_path("three_rows.csv"));
  EXPECT_EQ(r.series.size(), 3u);
  EXPECT_EQ(r.warnings, 0u);
  EXPECT_EQ(r.series.symbol(), "three_rows");
  EXPECT_DOUBLE_EQ(r.series[1].close, 11.0);
  EXPECT_EQ(r.series[2].volume, 900u);
}

TEST(ParseCsv, UseAdjustedReplacesClose) {
  ParseOptions opts;
  opts.use_adjusted = true;
  const ParseResult r = parse_csv(testing::fixture_path("three_rows.csv"), opts);
  EXPECT_DOUBLE_EQ(r.series[0].close, 10.4);
  EXPECT_DOUBLE_EQ(r.series[0].open, 10.0);
}

TEST(ParseCsv, StrictCloseAboveHighReportsRow2) {
  const auto path = testing::fixture_path("close_above_high.csv");
  EXPECT_EQ(kind_of([&] { parse_csv(path); }), ErrorKind::InvariantViolation);
  EXPECT_EQ(row_of([&] { parse_csv(path); }), std::optional<std::size_t>(2));
}

TEST(ParseCsv, LenientClampsCloseToHighWithOneWarning) {
  ParseOptions opts;
  opts.mode = ParseMode::Lenient;
  const ParseResult r = parse_csv(testing::fixture_path("close_above_high.csv"), opts);
  EXPECT_EQ(r.warnings, 1u);
  EXPECT_EQ(r.series[1].close, r.series[1].high);
  EXPECT_EQ(r.series[1].close, 11.5);
  // Re-serialized and re-read strictly, the repaired series is stable.
  const ParseResult again = parse_csv_text(to_csv(r.series), "close_above_high");
  EXPECT_EQ(again.series, r.series);
  EXPECT_EQ(again.warnings, 0u);
}

TEST(ParseCsv, LenientSwapsInvertedLowHigh) {
  ParseOptions opts;
  opts.mode = ParseMode::Lenient;
  const auto r = parse_csv_text("date,open,high,low,close,volume\n2020-01-02,10,9,11,10,1\n",
                                "X", opts);
  EXPECT_EQ(r.series[0].low, 9.0);
  EXPECT_EQ(r.series[0].high, 11.0);
  EXPECT_GE(r.warnings, 1u);
  EXPECT_EQ(kind_of([] {
              parse_csv_text("date,open,high,low,close,volume\n2020-01-02,10,9,11,10,1\n", "X");
            }),
            ErrorKind::InvariantViolation);
}

TEST(ParseCsv, MissingFileIsMissingInput) {
  EXPECT_EQ(kind_of([] { parse_csv("/nonexistent/none.csv"); }), ErrorKind::MissingInput);
}

TEST(ParseCsv, MissingColumn) {
  EXPECT_EQ(kind_of([] { parse_csv_text("date,open,high,low,volume\n", "X"); }),
            ErrorKind::MissingColumn);
}

TEST(ParseCsv, HeaderOnlyIsEmptySeries) {
  EXPECT_EQ(kind_of([] { parse_csv_text("date,open,high,low,close,volume\n", "X"); }),
            ErrorKind::EmptySeries);
}

TEST(ParseCsv, UnparsableFieldReportsRow) {
  const std::string text =
      "date,open,high,low,close,volume\n2020-01-02,1,2,1,1.5,10\n2020-01-03,1,2,x,1.5,10\n";
  EXPECT_EQ(kind_of([&] { parse_csv_text(text, "X"); }), ErrorKind::UnparsableRow);
  EXPECT_EQ(row_of([&] { parse_csv_text(text, "X"); }), std::optional<std::size_t>(2));
}

TEST(ParseCsv, AllEmptyPriceCellsRejected) {
  const std::string text = "date,open,high,low,close,volume\n2020-01-02,,,,,10\n";
  EXPECT_EQ(kind_of([&] { parse_csv_text(text, "X"); }), ErrorKind::UnparsableRow);
}

TEST(ParseCsv, NonPositivePriceRejectedInBothModes) {
  const std::string text = "date,open,high,low,close,volume\n2020-01-02,0,1,0,1,10\n";
  EXPECT_EQ(kind_of([&] { parse_csv_text(text, "X"); }), ErrorKind::InvariantViolation);
  ParseOptions lenient;
  lenient.mode = ParseMode::Lenient;
  EXPECT_EQ(kind_of([&] { parse_csv_text(text, "X", lenient); }),
            ErrorKind::InvariantViolation);
}

TEST(ParseCsv, DuplicateDateIsNonMonotonic) {
  const std::string text = "date,open,high,low,close,volume\n"
                           "2020-01-02,1,2,1,1.5,10\n2020-01-03,1,2,1,1.5,10\n"
                           "2020-01-03,1,2,1,1.5,10\n";
  EXPECT_EQ(kind_of([&] { parse_csv_text(text, "X"); }), ErrorKind::NonMonotonicDates);
  EXPECT_EQ(row_of([&] { parse_csv_text(text, "X"); }), std::optional<std::size_t>(3));
}

TEST(ParseCsv, DescendingFileIsReversed) {
  const std::string text = "date,open,high,low,close,volume\n"
                           "2020-01-06,3,3,3,3,1\n2020-01-03,2,2,2,2,1\n2020-01-02,1,1,1,1,1\n";
  const auto r = parse_csv_text(text, "X");
  ASSERT_EQ(r.series.size(), 3u);
  EXPECT_EQ(r.series[0].close, 1.0);
  EXPECT_EQ(r.series[2].close, 3.0);
}

TEST(ParseCsv, HandlesBomCrlfAndBlankLines) {
  const std::string text = "\xEF\xBB\xBF" "Date,Open,High,Low,Close,Volume\r\n"
                           "2020-01-02,1,2,1,1.5,10\r\n\r\n2020-01-03,1,2,1,1.25,11\r\n";
  const auto r = parse_csv_text(text, "X");
  ASSERT_EQ(r.series.size(), 2u);
  EXPECT_EQ(r.series[1].close, 1.25);
}

TEST(ParseCsv, RoundTripsRandomSeries) {
  testing::Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const OhlcvSeries s = testing::random_series(rng, testing::uniform_index(rng, 1, 300));
    const ParseResult r = parse_csv_text(to_csv(s), s.symbol());
    EXPECT_EQ(r.series, s);
    EXPECT_EQ(r.warnings, 0u);
  }
}

TEST(OhlcvSeries, ConstructorEnforcesInvariants) {
  const auto days = testing::business_days(2);
  EXPECT_EQ(kind_of([] { OhlcvSeries("X", {}); }), ErrorKind::EmptySeries);
  EXPECT_EQ(kind_of([&] {
              OhlcvSeries("X", {Bar{days[1], 1, 1, 1, 1, 0}, Bar{days[0], 1, 1, 1, 1, 0}});
            }),
            ErrorKind::NonMonotonicDates);
  EXPECT_EQ(kind_of([&] { OhlcvSeries("X", {Bar{days[0], 1, 1, 2, 1, 0}}); }),
            ErrorKind::InvariantViolation);
}

TEST(SliceYears, SpecExamples) {
  const auto r = slice_years(2769, 252);
  ASSERT_EQ(r.size(), 11u);
  for (std::size_t k = 0; k < 10; ++k) EXPECT_EQ(r[k].size(), 252u);
  EXPECT_EQ(r[10].size(), 249u);
  EXPECT_EQ(slice_years(252, 252).size(), 1u);
  const auto short_run = slice_years(10, 252);
  ASSERT_EQ(short_run.size(), 1u);
  EXPECT_EQ(short_run[0], (IndexRange{0, 10}));
  EXPECT_EQ(kind_of([] { slice_years(10, 0); }), ErrorKind::InvalidParams);
}

TEST(SliceYears, PartitionsEveryLength) {
  for (std::size_t len = 1; len <= 300; ++len) {
    for (std::size_t per : {1u, 2u, 7u, 50u, 252u}) {
      const auto ranges = slice_years(len, per);
      std::size_t expect_begin = 0;
      for (std::size_t k = 0; k < ranges.size(); ++k) {
        ASSERT_EQ(ranges[k].begin, expect_begin);
        ASSERT_GT(ranges[k].size(), 0u);
        if (k + 1 < ranges.size()) ASSERT_EQ(ranges[k].size(), per);
        expect_begin = ranges[k].end;
      }
      ASSERT_EQ(expect_begin, len);
    }
  }
}

} // namespace
} // namespace qstrat
