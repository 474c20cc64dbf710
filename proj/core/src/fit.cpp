#include "vwl/fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vwl {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("fit_line: need at least two matching points");
  }
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  LineFit fit;
  if (std::abs(denom) < 1e-300) {
    fit.slope = 0.0;
    fit.intercept = sy / n;
  } else {
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
  }
  double ss_res = 0, ss_tot = 0;
  const double ybar = sy / n;
  fit.max_residual = -HUGE_VAL;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ss_res += r * r;
    ss_tot += (y[i] - ybar) * (y[i] - ybar);
    fit.max_residual = std::max(fit.max_residual, r);
  }
  fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

LineFit upper_envelope(std::span<const double> x, std::span<const double> y,
                       const LineFit& base) {
  LineFit env = base;
  env.intercept += std::max(0.0, base.max_residual);
  env.max_residual = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    env.max_residual =
        std::max(env.max_residual, y[i] - (env.slope * x[i] + env.intercept));
  }
  return env;
}

}  // namespace vwl
