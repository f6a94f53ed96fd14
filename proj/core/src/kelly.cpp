#include "qstrat/kelly.hpp"

#include "qstrat/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace qstrat {

namespace {

constexpr double kBoundaryGap = 1e-6;

} // namespace

void KellyParams::validate() const {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::InvalidParams, fmt::format("kelly: p = {} outside [0, 1]", p));
  }
  if (!(l_gain > 0.0) || !std::isfinite(l_gain)) {
    throw Error(ErrorKind::InvalidParams, fmt::format("kelly: L = {} must be > 0", l_gain));
  }
  if (!(m_loss > 0.0 && m_loss <= 1.0)) {
    throw Error(ErrorKind::InvalidParams, fmt::format("kelly: M = {} outside (0, 1]", m_loss));
  }
}

double expected_log_return(double x, const KellyParams& params) {
  params.validate();
  if (!(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorKind::DomainError, fmt::format("kelly: fraction {} outside [0, 1]", x));
  }
  const double loss_side = 1.0 - params.m_loss * x;
  if (!(loss_side > 0.0)) {
    throw Error(ErrorKind::DomainError,
                fmt::format("kelly: 1 - M x = {} is not positive", loss_side));
  }
  const double win = params.p == 0.0 ? 0.0 : params.p * std::log1p(params.l_gain * x);
  const double lose = params.q() == 0.0 ? 0.0 : params.q() * std::log(loss_side);
  return win + lose;
}

double optimal_fraction(const KellyParams& params) {
  params.validate();
  const double x = (params.l_gain * params.p - params.m_loss * params.q()) /
                   (params.l_gain * params.m_loss);
  return std::clamp(x, 0.0, 1.0);
}

double kelly_x_max(const KellyParams& params) {
  params.validate();
  const double bound = 1.0 / params.m_loss;
  return bound <= 1.0 ? bound * (1.0 - kBoundaryGap) : 1.0;
}

std::vector<KellyPoint> kelly_curve(const KellyParams& params, std::size_t grid_points) {
  if (grid_points < 2) {
    throw Error(ErrorKind::InvalidParams, "kelly: grid_points must be >= 2");
  }
  const double x_max = kelly_x_max(params);
  std::vector<KellyPoint> out(grid_points);
  const double last = static_cast<double>(grid_points - 1);
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double x = i + 1 == grid_points ? x_max : x_max * (static_cast<double>(i) / last);
    out[i] = {x, expected_log_return(x, params)};
  }
  return out;
}

} // namespace qstrat
