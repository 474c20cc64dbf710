#include <doctest.h>

#include <cmath>

#include "vwl/quadrature.hpp"

using vwl::integrate;
using vwl::integrate_split;

TEST_CASE("polynomials are exact") {
  CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(integrate([](double x) { return 3 * x * x - 2 * x + 1; }, -1.0, 2.0) ==
        doctest::Approx(9.0 - 3.0 + 3.0).epsilon(1e-14));
}

TEST_CASE("transcendental oracles") {
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, M_PI) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0) ==
        doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
}

TEST_CASE("orientation and degenerate interval") {
  CHECK(integrate([](double x) { return x; }, 1.0, 0.0) ==
        doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(integrate([](double x) { return x; }, 2.0, 2.0) == doctest::Approx(0.0));
}

TEST_CASE("kink handled by splitting") {
  const auto f = [](double x) { return std::abs(x); };
  CHECK(integrate_split(f, -1.0, 1.0, {0.0}) ==
        doctest::Approx(1.0).epsilon(1e-13));
  // breakpoints outside the interval are ignored
  CHECK(integrate_split(f, -1.0, 1.0, {-5.0, 0.0, 7.0}) ==
        doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("rapid oscillation still converges") {
  const double got = integrate([](double x) { return std::cos(200.0 * x); }, 0.0, 1.0);
  CHECK(got == doctest::Approx(std::sin(200.0) / 200.0).epsilon(1e-10));
}
