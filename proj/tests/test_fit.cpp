#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "vwl/fit.hpp"

using vwl::fit_line;
using vwl::upper_envelope;

TEST_CASE("exact line is recovered") {
  std::vector<double> x{0, 1, 2, 3, 4}, y;
  for (double xi : x) y.push_back(2.5 * xi - 1.0);
  const auto f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(f.intercept == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0));
  CHECK(std::abs(f.max_residual) < 1e-12);
}

TEST_CASE("symmetric noise leaves the slope alone") {
  // residuals orthogonal to both the constant and the linear trend
  std::vector<double> x{0, 1, 2, 3}, y{0.1, 0.9, 1.9, 3.1};
  const auto f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(f.r_squared > 0.98);
}

TEST_CASE("degenerate inputs") {
  std::vector<double> x{1.0}, y{2.0};
  CHECK_THROWS_AS(fit_line(x, y), std::invalid_argument);
  std::vector<double> xc{2.0, 2.0, 2.0}, yc{1.0, 2.0, 3.0};
  const auto f = fit_line(xc, yc);  // vertical data: slope degenerates to 0
  CHECK(f.slope == doctest::Approx(0.0));
  CHECK(f.intercept == doctest::Approx(2.0));
}

TEST_CASE("upper envelope dominates every point") {
  std::vector<double> x{0, 1, 2, 3, 4}, y{0.0, 1.4, 1.8, 3.3, 3.9};
  const auto base = fit_line(x, y);
  const auto env = upper_envelope(x, y, base);
  CHECK(env.slope == doctest::Approx(base.slope));
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(y[i] <= env.slope * x[i] + env.intercept + 1e-12);
  }
  CHECK(env.max_residual <= 1e-12);
}
