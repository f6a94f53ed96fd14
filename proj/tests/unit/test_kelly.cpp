#include "error_capture.hpp"
#include "generators.hpp"

#include "qstrat/kelly.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace qstrat {
namespace {

using testing::kind_of;

const KellyParams kBlackjack{0.9, 1.1, 1.0};

double direct(double x, double p, double l, double m) {
  return p * std::log(1 + l * x) + (1 - p) * std::log(1 - m * x);
}

// Root of the derivative p L / (1 + L x) - q M / (1 - M x), which is strictly
// decreasing on [0, 1/M).
double derivative_root(const KellyParams& k, double lo, double hi) {
  const auto g = [&](double x) {
    return k.p * k.l_gain / (1 + k.l_gain * x) - (1 - k.p) * k.m_loss / (1 - k.m_loss * x);
  };
  for (int it = 0; it < 200; ++it) {
    const double mid = (lo + hi) / 2;
    if (mid == lo || mid == hi) break;
    (g(mid) > 0 ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

TEST(ExpectedLogReturn, Examples) {
  EXPECT_EQ(expected_log_return(0.0, kBlackjack), 0.0);
  EXPECT_EQ(expected_log_return(0.0, KellyParams{0.3, 2.0, 0.5}), 0.0);
  EXPECT_DOUBLE_EQ(expected_log_return(0.5, KellyParams{1.0, 1.0, 1.0}), std::log(1.5));
  const double at81 = expected_log_return(0.81, kBlackjack);
  EXPECT_NEAR(at81, direct(0.81, 0.9, 1.1, 1.0), 1e-15);
  EXPECT_GT(at81, expected_log_return(0.5, kBlackjack));
  EXPECT_GT(at81, expected_log_return(0.95, kBlackjack));
}

TEST(ExpectedLogReturn, DomainErrors) {
  EXPECT_EQ(kind_of([] { expected_log_return(1.0, kBlackjack); }), ErrorKind::DomainError);
  EXPECT_EQ(kind_of([] { expected_log_return(-0.1, kBlackjack); }), ErrorKind::DomainError);
  EXPECT_NO_THROW(expected_log_return(1.0, KellyParams{0.5, 1.0, 0.5}));
  EXPECT_EQ(kind_of([] { expected_log_return(0.1, KellyParams{1.1, 1.0, 1.0}); }),
            ErrorKind::InvalidParams);
  EXPECT_EQ(kind_of([] { expected_log_return(0.1, KellyParams{0.5, 1.0, 1.5}); }),
            ErrorKind::InvalidParams);
  EXPECT_EQ(kind_of([] { expected_log_return(0.1, KellyParams{0.5, 0.0, 1.0}); }),
            ErrorKind::InvalidParams);
}

TEST(OptimalFraction, Examples) {
  EXPECT_NEAR(optimal_fraction(kBlackjack), 0.89 / 1.1, 1e-12);
  EXPECT_EQ(std::round(optimal_fraction(kBlackjack) * 100) / 100, 0.81);
  EXPECT_EQ(optimal_fraction(KellyParams{0.5, 1.0, 1.0}), 0.0);
  EXPECT_DOUBLE_EQ(optimal_fraction(KellyParams{0.5, 2.0, 1.0}), 0.25);
  EXPECT_EQ(optimal_fraction(KellyParams{0.1, 1.0, 1.0}), 0.0);
  EXPECT_EQ(optimal_fraction(KellyParams{1.0, 1.0, 0.5}), 1.0);
}

TEST(KellyCurve, GridArgmaxNearClosedForm) {
  const auto curve = kelly_curve(kBlackjack, 1001);
  ASSERT_EQ(curve.size(), 1001u);
  EXPECT_EQ(curve.front().x, 0.0);
  EXPECT_LT(curve.back().x, 1.0);
  const auto best = std::max_element(curve.begin(), curve.end(),
                                     [](const auto& a, const auto& b) { return a.value < b.value; });
  const double step = curve[1].x - curve[0].x;
  EXPECT_LE(std::abs(best->x - optimal_fraction(kBlackjack)), step);
  EXPECT_EQ(kind_of([] { kelly_curve(kBlackjack, 1); }), ErrorKind::InvalidParams);
}

TEST(KellyCurve, PureLossIsDecreasing) {
  const auto curve = kelly_curve(KellyParams{0.0, 1.0, 1.0}, 200);
  for (std::size_t i = 1; i < curve.size(); ++i) EXPECT_LT(curve[i].value, curve[i - 1].value);
}

TEST(KellyCurve, HalfKellyRatioForBlackjackParams) {
  // Direct evaluation: f(x*/2) / f(x*) = 0.279455 / 0.407323.
  const double x = optimal_fraction(kBlackjack);
  const double ratio = expected_log_return(x / 2, kBlackjack) / expected_log_return(x, kBlackjack);
  EXPECT_NEAR(ratio, direct(x / 2, 0.9, 1.1, 1.0) / direct(x, 0.9, 1.1, 1.0), 1e-14);
  EXPECT_NEAR(ratio, 0.68608, 5e-5);
}

TEST(KellyProperties, GradientVanishesAtInteriorOptimum) {
  const double x = optimal_fraction(kBlackjack);
  const double h = 1e-6;
  const double grad =
      (expected_log_return(x + h, kBlackjack) - expected_log_return(x - h, kBlackjack)) / (2 * h);
  EXPECT_NEAR(grad, 0.0, 1e-6);
}

TEST(KellyProperties, ConcaveAndClosedFormMatchesNumericArgmax) {
  testing::Rng rng(42);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int interior = 0;
  for (int t = 0; t < 100; ++t) {
    const KellyParams k{unit(rng), 0.1 + 3.0 * unit(rng), 0.05 + 0.95 * unit(rng)};
    const auto curve = kelly_curve(k, 400);
    for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
      const double second = curve[i + 1].value - 2 * curve[i].value + curve[i - 1].value;
      EXPECT_LE(second, 1e-12);
    }
    const double closed = optimal_fraction(k);
    const double numeric = derivative_root(k, 0.0, kelly_x_max(k));
    if (closed > 0.0 && closed < kelly_x_max(k)) {
      ++interior;
      EXPECT_NEAR(closed, numeric, 1e-12);
    } else {
      // Clamped optimum: the numeric search sits on the same boundary.
      EXPECT_NEAR(std::min(closed, kelly_x_max(k)), numeric, 1e-5);
    }
  }
  EXPECT_GT(interior, 20);
}

} // namespace
} // namespace qstrat
