#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "vwl/quadrature.hpp"
#include "vwl/rough.hpp"

using namespace vwl;

namespace {
Mollifier bump() { return make_mollifier(MollifierShape::Bump, 1e-10); }
Mollifier cosine2() { return make_mollifier(MollifierShape::CosineSq, 1e-10); }
Mollifier triangle() { return make_mollifier(MollifierShape::Triangle, 1e-10); }
}  // namespace

TEST_CASE("mollifiers are normalized probability densities") {
  for (const Mollifier& psi : {bump(), cosine2(), triangle()}) {
    CHECK(psi.integral() == doctest::Approx(1.0).epsilon(1e-9));
    // independent Riemann check, away from the library quadrature
    double riemann = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      riemann += psi.density(-1.0 + 2.0 * (i + 0.5) / n) * 2.0 / n;
    }
    CHECK(riemann == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(psi.density(-1.0) == 0.0);
    CHECK(psi.density(1.0) == 0.0);
    CHECK(psi.density(0.3) > 0.0);
    CHECK(psi.cdf(-1.0) == 0.0);
    CHECK(psi.cdf(1.0) == 1.0);
    CHECK(psi.cdf(0.0) == doctest::Approx(0.5).epsilon(1e-9));  // even shapes
  }
}

TEST_CASE("bump derivatives match finite differences") {
  const Mollifier psi = bump();
  const double h = 1e-5;
  for (int k = 1; k <= 4; ++k) {
    for (double t : {-0.6, -0.2, 0.1, 0.5}) {
      const double fd =
          (psi.derivative(t + h, k - 1) - psi.derivative(t - h, k - 1)) / (2 * h);
      CHECK(psi.derivative(t, k) == doctest::Approx(fd).epsilon(1e-5));
    }
  }
}

TEST_CASE("cdf differentiates back to the density") {
  for (const Mollifier& psi : {cosine2(), triangle()}) {
    const double h = 1e-6;
    for (double t : {-0.7, -0.1, 0.4, 0.9}) {
      const double fd = (psi.cdf(t + h) - psi.cdf(t - h)) / (2 * h);
      CHECK(fd == doctest::Approx(psi.density(t)).epsilon(1e-6));
    }
  }
}

TEST_CASE("derivative depth per shape") {
  CHECK_THROWS_AS(triangle().derivative(0.3, 2), ValidationError);
  CHECK_THROWS_AS(cosine2().derivative(0.3, 3), ValidationError);
  CHECK_NOTHROW(bump().derivative(0.3, 12));
}

TEST_CASE("scale schedules") {
  CHECK(schedule_omega({ScaleSchedule::Kind::Identity}, 0.25) == 0.25);
  CHECK(schedule_omega({ScaleSchedule::Kind::Power, 0.5}, 0.25) ==
        doctest::Approx(0.5));
  ScaleSchedule log_sched{ScaleSchedule::Kind::Log, 1.0, 1};
  CHECK(schedule_omega(log_sched, std::exp(-4.0)) ==
        doctest::Approx(std::pow(4.0, -0.5)));
  CHECK_THROWS_AS(schedule_omega({}, 0.0), std::domain_error);
  CHECK_THROWS_AS(schedule_omega({}, 1.5), std::domain_error);
  CHECK_THROWS_AS(schedule_omega(log_sched, 1.0), std::domain_error);
}

TEST_CASE("constants are fixed points of mollification") {
  RoughCoefficient a;
  a.smooth.c0 = 2.5;
  const TimeGrid grid{0.0, 1.0, 200};
  const SampledCoefficient c = mollify(a, bump(), 0.1, grid, 2);
  for (int i = 0; i < grid.size(); ++i) {
    CHECK(c.deriv[0][i] == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(std::abs(c.deriv[1][i]) < 1e-12);
    CHECK(std::abs(c.deriv[2][i]) < 1e-12);
  }
}

TEST_CASE("smooth mollification converges quadratically in omega") {
  RoughCoefficient a;
  a.smooth.family = SmoothFamily::Sinusoid;
  a.smooth.c0 = 2.0;
  a.smooth.c1 = 0.5;
  a.smooth.kappa = 3.0;
  const TimeGrid grid{0.0, 1.0, 2000};
  double prev = 0.0;
  for (double omega : {0.04, 0.02}) {
    const SampledCoefficient c = mollify(a, bump(), omega, grid, 1);
    double err = 0.0;
    // interior only: the boundary clamp extension costs an O(omega) layer
    for (int i = 0; i < grid.size(); ++i) {
      const double t = grid.time(i);
      if (t < 0.1 || t > 0.9) continue;
      err = std::max(err, std::abs(c.deriv[0][i] - a.smooth.value(t)));
    }
    if (prev > 0.0) CHECK(prev / err > 3.0);  // ~4 expected for O(omega^2)
    prev = err;
  }
}

TEST_CASE("heaviside jump mollifies to a smoothed step") {
  RoughCoefficient a;
  a.smooth.c0 = 1.0;
  a.jumps.push_back({0.5, 2.0});
  a.declared_order = 1;
  const double omega = 0.05;
  const TimeGrid grid{0.0, 1.0, 1000};
  const SampledCoefficient c = mollify(a, cosine2(), omega, grid, 1);
  CHECK(c.value_at(0.2) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(c.value_at(0.8) == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(c.value_at(0.5) == doctest::Approx(2.0).epsilon(1e-6));  // midpoint
  // d/dt a_eps at the jump is h * psi(0) / omega
  CHECK(c.derivative_at(0.5) ==
        doctest::Approx(2.0 * cosine2().density(0.0) / omega).epsilon(1e-4));
}

TEST_CASE("dirac atom obeys the exact scaling identity") {
  RoughCoefficient a;
  a.smooth.c0 = 0.0;
  a.atoms.push_back({0.5, 1.5, 0});
  a.declared_order = 1;
  const TimeGrid grid{0.0, 1.0, 4000};
  const Mollifier psi = bump();
  const SampledCoefficient c1 = mollify(a, psi, 0.1, grid, 1);
  const SampledCoefficient c2 = mollify(a, psi, 0.05, grid, 1);
  // peak value = mass * psi(0) / omega
  CHECK(c1.value_at(0.5) == doctest::Approx(1.5 * psi.density(0.0) / 0.1).epsilon(1e-10));
  CHECK(c2.value_at(0.5) / c1.value_at(0.5) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("interior derivative samples agree with finite differences") {
  RoughCoefficient a;
  a.smooth.family = SmoothFamily::Affine;
  a.smooth.c0 = 1.0;
  a.smooth.c1 = 0.5;
  a.jumps.push_back({0.4, 1.0});
  a.declared_order = 1;
  const TimeGrid grid{0.0, 1.0, 4000};
  const SampledCoefficient c = mollify(a, cosine2(), 0.08, grid, 2);
  const double dt = grid.dt();
  for (int i = 100; i < grid.size() - 100; i += 37) {
    const double fd = (c.deriv[0][i + 1] - c.deriv[0][i - 1]) / (2 * dt);
    CHECK(c.deriv[1][i] == doctest::Approx(fd).epsilon(5e-4));
  }
}

TEST_CASE("mollify guards") {
  RoughCoefficient a;
  const TimeGrid grid{0.0, 1.0, 100};
  CHECK_THROWS_AS(mollify(a, bump(), 0.001, grid, 1), ResolutionError);
  RoughCoefficient d;
  d.atoms.push_back({0.5, 1.0, 1});
  d.declared_order = 2;
  CHECK_THROWS_AS(mollify(d, triangle(), 0.1, grid, 1), ValidationError);
}

TEST_CASE("validation catches structural lies") {
  RoughCoefficient a;
  a.smooth.family = SmoothFamily::Affine;
  a.smooth.c0 = 1.0;
  a.smooth.c1 = -2.0;  // dips negative on [0, 1]
  a.claimed_floor = 0.5;
  CHECK_THROWS_AS(a.validate(), ValidationError);

  RoughCoefficient b;
  b.jumps.push_back({1.5, 1.0});  // outside [0, T]
  b.declared_order = 1;
  CHECK_THROWS_AS(b.validate(), ValidationError);

  RoughCoefficient c;
  c.atoms.push_back({0.5, -1.0, 0});  // negative mass under a positive floor
  c.claimed_floor = 1.0;
  c.declared_order = 1;
  CHECK_THROWS_AS(c.validate(), ValidationError);

  RoughCoefficient d;
  d.atoms.push_back({0.5, 1.0, 2});
  d.declared_order = 1;  // below the structural order
  CHECK_THROWS_AS(d.validate(), ValidationError);

  RoughCoefficient ok;
  ok.smooth.c0 = 1.0;
  ok.jumps.push_back({0.5, 1.0});
  ok.claimed_floor = 1.0;
  ok.declared_order = 1;
  CHECK_NOTHROW(ok.validate());
}

TEST_CASE("derivative growth slopes for a jump") {
  RoughCoefficient a;
  a.smooth.c0 = 1.0;
  a.jumps.push_back({0.5, 1.0});
  a.declared_order = 1;
  const std::vector<double> eps{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  const auto fits = fit_derivative_growth(a, cosine2(), {}, eps, 1);
  REQUIRE(fits.size() == 2);
  CHECK(fits[0].slope == doctest::Approx(0.0).epsilon(0.05));
  CHECK(fits[1].slope == doctest::Approx(1.0).epsilon(0.05));
  CHECK(fits[1].moderate);
}

TEST_CASE("derivative growth guards") {
  RoughCoefficient a;
  const std::vector<double> short_net{0.1, 0.05, 0.01};
  CHECK_THROWS_AS(fit_derivative_growth(a, bump(), {}, short_net, 1),
                  ValidationError);
  const std::vector<double> narrow{0.1, 0.08, 0.06, 0.04, 0.02};
  CHECK_THROWS_AS(fit_derivative_growth(a, bump(), {}, narrow, 1),
                  ValidationError);
}

TEST_CASE("constant coefficient has undefined growth slope") {
  RoughCoefficient a;
  a.smooth.c0 = 0.0;
  const std::vector<double> eps{1e-1, 3e-2, 1e-2, 1e-3};
  const auto fits = fit_derivative_growth(a, bump(), {}, eps, 1);
  CHECK_FALSE(fits[0].defined);
  CHECK(fits[0].moderate);
  CHECK(fits[0].note.find("undefined") != std::string::npos);
}

TEST_CASE("lower bound certificate") {
  RoughCoefficient a;
  a.smooth.c0 = 1.0;
  a.jumps.push_back({0.5, 1.0});
  a.claimed_floor = 1.0;
  a.declared_order = 1;
  const TimeGrid grid{0.0, 1.0, 1000};
  const auto c = mollify(a, bump(), 0.05, grid, 1);
  const auto lb = lower_bound_check(c, 1.0);
  CHECK(lb.holds);
  CHECK(lb.min_value >= 1.0 - 1e-8);
}

TEST_CASE("weierstrass part is a bounded Holder wiggle") {
  SmoothPart w;
  w.family = SmoothFamily::Weierstrass;
  w.c0 = 1.0;
  w.c1 = 0.1;
  w.alpha = 0.5;
  // two-point oscillation certificate: |a(t)-a(s)| <= C |t-s|^alpha
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double t = i / 200.0;
    for (double h : {1e-3, 1e-2, 1e-1}) {
      worst = std::max(worst,
                       std::abs(w.value(t + h) - w.value(t)) / std::pow(h, 0.5));
    }
  }
  CHECK(worst < 2.0);
  CHECK(w.max_frequency() == doctest::Approx(65536.0));
}
