#pragma once

#include <functional>
#include <vector>

namespace vwl {

/// Adaptive Gauss-Legendre quadrature on [a, b]. Panels are bisected until
/// the G7/G15 difference falls below tol (absolute, scaled by the running
/// estimate for large integrals).
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-12, int max_depth = 40);

/// Same, but the integrand is split at the given interior breakpoints first
/// so each panel sees a smooth piece.
double integrate_split(const std::function<double(double)>& f, double a, double b,
                       std::vector<double> breakpoints, double tol = 1e-12);

}  // namespace vwl
