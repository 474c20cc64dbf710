#pragma once

#include <span>
#include <vector>

namespace vwl {

/// Ordinary least-squares line y = slope * x + intercept.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
  double max_residual = 0.0;  // max of (y - fit), signed
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Raises the intercept of a line fit until no data point lies above the
/// line (an upper envelope with the fitted slope).
LineFit upper_envelope(std::span<const double> x, std::span<const double> y,
                       const LineFit& base);

}  // namespace vwl
