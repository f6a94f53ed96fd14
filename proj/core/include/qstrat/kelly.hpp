#pragma once

#include <cstddef>
#include <vector>

namespace qstrat {

/// A bet that gains L per unit staked with probability p and loses M per unit
/// otherwise.
struct KellyParams {
  double p = 0.5;
  double l_gain = 1.0;
  double m_loss = 1.0;

  double q() const noexcept { return 1.0 - p; }
  /// Odds L / M.
  double b() const noexcept { return l_gain / m_loss; }

  /// Throws InvalidParams unless 0 <= p <= 1, L > 0 and 0 < M <= 1.
  void validate() const;
};

/// p*ln(1 + L x) + q*ln(1 - M x). Throws DomainError when x is outside [0, 1]
/// or 1 - M x <= 0.
double expected_log_return(double x, const KellyParams& params);

/// (L p - M q) / (L M), clamped to [0, 1].
double optimal_fraction(const KellyParams& params);

struct KellyPoint {
  double x = 0.0;
  double value = 0.0;
};

/// Uniform grid on [0, x_max], where x_max stops just short of 1 / M when that
/// bound is inside [0, 1]. Throws InvalidParams when grid_points < 2.
std::vector<KellyPoint> kelly_curve(const KellyParams& params, std::size_t grid_points);

/// Upper end of the grid used by kelly_curve.
double kelly_x_max(const KellyParams& params);

} // namespace qstrat
