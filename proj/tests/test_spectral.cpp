#include <doctest.h>

#include <cmath>

#include "vwl/spectral.hpp"

using namespace vwl;

TEST_CASE("power family") {
  const SpectralModel m = build_model(SpectralFamily::Power, 5, 2.0);
  REQUIRE(m.size() == 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(m.pi[i] == doctest::Approx(double(i + 1)));  // m^{nu/2}, nu = 2
    CHECK(m.mu[i] == 1.0);
  }
  const SpectralModel m4 = build_model(SpectralFamily::Power, 3, 4.0);
  CHECK(m4.pi[2] == doctest::Approx(9.0));  // 3^2
}

TEST_CASE("table family validation") {
  SpectralParams p;
  p.table = {{1.0, 1.0}, {2.0, 0.5}};
  CHECK_NOTHROW(build_model(SpectralFamily::Table, 2, 2.0, p));
  p.table = {{2.0, 1.0}, {1.0, 0.5}};  // not increasing
  CHECK_THROWS_AS(build_model(SpectralFamily::Table, 2, 2.0, p), ValidationError);
  p.table = {{1.0, 1.0}, {2.0, -0.5}};  // bad weight
  CHECK_THROWS_AS(build_model(SpectralFamily::Table, 2, 2.0, p), ValidationError);
  CHECK_THROWS_AS(build_model(SpectralFamily::Power, 0, 2.0), ValidationError);
  CHECK_THROWS_AS(build_model(SpectralFamily::Power, 4, -1.0), ValidationError);
}

TEST_CASE("heisenberg-like family is strictly increasing with merged weights") {
  const SpectralModel m = build_model(SpectralFamily::HeisenbergLike, 6, 2.0);
  REQUIRE(m.size() > 4);
  for (int i = 1; i < m.size(); ++i) {
    CHECK(m.pi[i] > m.pi[i - 1]);
    CHECK(m.mu[i] > 0.0);
  }
}

TEST_CASE("sobolev norm against a direct sum") {
  const SpectralModel m = build_model(SpectralFamily::Power, 6, 2.0);
  ModeField u;
  u.coeff = {{1, 0}, {0.5, 0.5}, {0, -2}, {0.1, 0}, {0, 0}, {3, 4}};
  const double s = 1.25;
  double expect = 0.0;
  for (int i = 0; i < 6; ++i) {
    expect += std::pow(1.0 + m.pi[i] * m.pi[i], s) * std::norm(u.coeff[i]);
  }
  CHECK(sobolev_norm(u, m, s) == doctest::Approx(std::sqrt(expect)).epsilon(1e-14));

  // homogeneity and s = 0 reduction
  ModeField u2 = u;
  for (auto& c : u2.coeff) c *= 3.0;
  CHECK(sobolev_norm(u2, m, s) == doctest::Approx(3.0 * sobolev_norm(u, m, s)));
  double l2 = 0.0;
  for (const auto& c : u.coeff) l2 += std::norm(c);
  CHECK(sobolev_norm(u, m, 0.0) == doctest::Approx(std::sqrt(l2)));

  ModeField wrong;
  wrong.coeff.resize(3);
  CHECK_THROWS_AS(sobolev_norm(wrong, m, s), ValidationError);
}

TEST_CASE("gevrey norm weights and overflow guard") {
  const SpectralModel m = build_model(SpectralFamily::Power, 8, 2.0);
  ModeField u;
  u.coeff.assign(8, 1.0);
  CHECK(gevrey_norm(u, m, 1.5, 0.0, +1) ==
        doctest::Approx(std::sqrt(8.0)).epsilon(1e-14));
  // +A and -A weights multiply to one mode-wise
  const double plus = gevrey_norm(u, m, 1.5, 0.3, +1);
  const double minus = gevrey_norm(u, m, 1.5, 0.3, -1);
  CHECK(plus > std::sqrt(8.0));
  CHECK(minus < std::sqrt(8.0));
  CHECK_THROWS_AS(gevrey_norm(u, m, 0.5, 0.1, +1), ValidationError);
  try {
    gevrey_norm(u, m, 1.0, 100.0, +1);
    FAIL("expected overflow");
  } catch (const GevreyOverflow& e) {
    CHECK(e.mode >= 0);
    CHECK(std::string(e.what()).find("mode") != std::string::npos);
  }
}

TEST_CASE("plancherel assembly") {
  const SpectralModel m = build_model(SpectralFamily::Power, 4, 2.0);
  std::vector<double> sq{1.0, 2.0, 3.0, 4.0};
  CHECK(plancherel_assemble(sq, m) == doctest::Approx(10.0));
  sq[2] = -1.0;
  CHECK_THROWS_AS(plancherel_assemble(sq, m), ValidationError);
  std::vector<double> bad{1.0};
  CHECK_THROWS_AS(plancherel_assemble(bad, m), ValidationError);
}

TEST_CASE("ultradistribution fit round trip") {
  const SpectralModel m = build_model(SpectralFamily::Power, 24, 2.0);
  const double s = 1.5;

  ModeFieldDescriptor grow;
  grow.kind = ModeFieldDescriptor::Kind::GevreyGrowth;
  grow.eta = 0.25;
  grow.s = s;
  const GrowthFit beurling = ultradistribution_fit(make_mode_field(m, grow), m, s);
  CHECK(beurling.verdict == GrowthVerdict::BeurlingType);
  CHECK(beurling.eta == doctest::Approx(0.25).epsilon(0.05));
  for (double r : beurling.residuals) CHECK(r <= 1e-9);  // genuine envelope

  ModeFieldDescriptor decay;
  decay.kind = ModeFieldDescriptor::Kind::ExpDecay;
  decay.rate = 1.0;
  const GrowthFit roumieu = ultradistribution_fit(make_mode_field(m, decay), m, s);
  CHECK(roumieu.verdict == GrowthVerdict::RoumieuType);

  ModeField wild;
  wild.coeff.resize(m.size());
  for (int i = 0; i < m.size(); ++i) {
    wild.coeff[i] = std::exp(0.05 * m.pi[i] * m.pi[i]);  // beats every e^{eta pi^{1/s}}
  }
  CHECK(ultradistribution_fit(wild, m, s).verdict == GrowthVerdict::Unbounded);

  ModeField zero;
  zero.coeff.resize(m.size());
  CHECK(ultradistribution_fit(zero, m, s).verdict == GrowthVerdict::TriviallyBoth);

  CHECK_THROWS_AS(ultradistribution_fit(zero, m, 0.9), ValidationError);
  const SpectralModel tiny = build_model(SpectralFamily::Power, 4, 2.0);
  ModeField four;
  four.coeff.resize(4);
  CHECK_THROWS_AS(ultradistribution_fit(four, tiny, s), ValidationError);
}

TEST_CASE("mode field descriptors") {
  const SpectralModel m = build_model(SpectralFamily::Power, 4, 2.0);
  ModeFieldDescriptor d;
  CHECK(make_mode_field(m, d).coeff == std::vector<std::complex<double>>(4, 0.0));
  d.kind = ModeFieldDescriptor::Kind::PolyDecay;
  d.rate = 1.0;
  const ModeField u = make_mode_field(m, d);
  CHECK(u.coeff[1].real() == doctest::Approx(1.0 / 5.0));
  d.kind = ModeFieldDescriptor::Kind::Explicit;
  d.values = {1.0, 2.0};
  CHECK_THROWS_AS(make_mode_field(m, d), ValidationError);
}
