#include <doctest.h>

#include <cmath>

#include "vwl/lab.hpp"

using namespace vwl;

namespace {

ScenarioProblem base_problem() {
  ScenarioProblem p;
  p.a.smooth.family = SmoothFamily::Affine;
  p.a.smooth.c0 = 1.0;
  p.a.smooth.c1 = 0.5;
  p.a.claimed_floor = 1.0;
  p.model = build_model(SpectralFamily::Power, 8, 2.0);
  p.u0.kind = ModeFieldDescriptor::Kind::ExpDecay;
  p.u0.rate = 1.0;
  p.s = 0.0;
  p.base_step = 2e-3;
  return p;
}

const std::vector<double> kNet{0.25, 0.125, 0.0625, 0.03125, 0.015625};

}  // namespace

TEST_CASE("net solve is complete and norm-coherent") {
  const ScenarioProblem p = base_problem();
  const Mollifier psi = make_mollifier(MollifierShape::Bump, 1e-10);
  const NetSolution net = solve_regularized_net(p, psi, {}, kNet, 2);
  CHECK(net.complete());
  REQUIRE(net.eps.size() == kNet.size());
  REQUIRE(net.sup_norms[0].size() == 3);

  // independent recomputation of the p = 0 norm from raw trajectories
  for (std::size_t i = 0; i < net.eps.size(); ++i) {
    double sup = 0.0;
    for (int j = 0; j < net.grid.size(); ++j) {
      double sum = 0.0;
      for (int m = 0; m < net.model.size(); ++m) {
        const auto& traj = net.modes[i][m];
        const double w = net.model.mu[m] *
                         std::pow(1.0 + net.model.pi[m] * net.model.pi[m],
                                  2.0 * (net.s + 1.0) / net.model.nu);
        sum += w * std::norm(traj.v[j * traj.substeps]);
      }
      sup = std::max(sup, sum);
    }
    CHECK(std::sqrt(sup) ==
          doctest::Approx(net.sup_norms[i][0]).epsilon(1e-12));
  }
}

TEST_CASE("derivative recursion closes under the equation") {
  const ScenarioProblem p = base_problem();
  const Mollifier psi = make_mollifier(MollifierShape::Bump, 1e-10);
  const NetSolution net = solve_regularized_net(p, psi, {}, kNet, 3);
  const auto series = net.derivative_series(0, 3);
  // d^2 v must equal -beta^2 a_eps v exactly (no source here)
  const int j = net.grid.size() / 2;
  for (int m = 0; m < net.model.size(); ++m) {
    const double b2 = net.model.pi[m] * net.model.pi[m];
    const std::complex<double> expect =
        -b2 * net.a_eps[0].deriv[0][j] * series[0][j][m];
    CHECK(std::abs(series[2][j][m] - expect) < 1e-12 * (1.0 + std::abs(expect)));
  }
  // moderateness closure: exponent of d^{p+1} at most exponent of d^p + slack
  const ModeratenessReport rep = moderateness_report(net, 3);
  for (int q = 0; q + 1 <= 3; ++q) {
    CHECK(rep.per_p[q + 1].slope <= rep.per_p[q].slope + 1.0 + 0.5);
  }
}

TEST_CASE("smooth speeds yield flat (already-converged) nets") {
  const ScenarioProblem p = base_problem();
  const Mollifier psi = make_mollifier(MollifierShape::Bump, 1e-10);
  const NetSolution net = solve_regularized_net(p, psi, {}, kNet, 2);
  const ModeratenessReport rep = moderateness_report(net, 2);
  CHECK(rep.moderate);
  CHECK(rep.N <= 0.5);
  for (const auto& f : rep.per_p) CHECK(f.envelope_valid);
  // envelope constants actually dominate the data
  for (int q = 0; q <= 2; ++q) {
    for (std::size_t i = 0; i < net.eps.size(); ++i) {
      CHECK(net.sup_norms[i][q] <=
            rep.c_p[q] * std::pow(net.eps[i], -(rep.N + q)) * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("fit_power_law recovers synthetic exponents") {
  std::vector<double> eps{0.1, 0.05, 0.025, 0.0125, 0.00625};
  std::vector<double> vals;
  for (double e : eps) vals.push_back(3.0 * std::pow(e, -2.5));
  const PowerLawFit f = fit_power_law(eps, vals);
  CHECK(f.slope == doctest::Approx(2.5).epsilon(1e-10));
  CHECK(f.envelope_valid);
  CHECK(std::exp(f.log_c) == doctest::Approx(3.0).epsilon(1e-8));

  std::vector<double> wild;
  for (double e : eps) wild.push_back(std::exp(1.0 / e));  // super-polynomial
  CHECK_FALSE(fit_power_law(eps, wild).envelope_valid);

  std::vector<double> zeros(eps.size(), 0.0);
  const PowerLawFit z = fit_power_law(eps, zeros);
  CHECK(z.envelope_valid);
  CHECK(z.slope == 0.0);

  std::vector<double> tiny{1.0, 2.0};
  CHECK_THROWS_AS(fit_power_law(std::span<const double>(tiny),
                                std::span<const double>(tiny)),
                  ValidationError);
}

TEST_CASE("negligibility: a net minus itself vanishes") {
  const ScenarioProblem p = base_problem();
  const Mollifier psi = make_mollifier(MollifierShape::Bump, 1e-10);
  const NetSolution n1 = solve_regularized_net(p, psi, {}, kNet, 1);
  const NetSolution n2 = solve_regularized_net(p, psi, {}, kNet, 1);
  const std::vector<int> ells{1, 2, 3, 7};
  const NegligibilityReport rep = negligibility_test(n1, n2, ells);
  for (bool ok : rep.negligible) CHECK(ok);
  for (double d : rep.diff_norms) CHECK(d == 0.0);

  const std::vector<double> other{0.5, 0.25, 0.125, 0.0625};
  const NetSolution n3 = solve_regularized_net(p, psi, {}, other, 1);
  CHECK_THROWS_AS(negligibility_test(n1, n3, ells), ValidationError);
}

TEST_CASE("uniqueness across mollifiers on a smooth speed") {
  const ScenarioProblem p = base_problem();
  const Mollifier b = make_mollifier(MollifierShape::Bump, 1e-10);
  const Mollifier c = make_mollifier(MollifierShape::CosineSq, 1e-10);
  const UniquenessReport rep = uniqueness_experiment(p, b, c, {}, kNet);
  REQUIRE(rep.pass.has_value());
  CHECK(*rep.pass);
  CHECK(rep.sol_slope >= 0.8);
  // and mollifier-order symmetry
  const UniquenessReport rev = uniqueness_experiment(p, c, b, {}, kNet);
  for (std::size_t i = 0; i < rep.eps.size(); ++i) {
    CHECK(rev.sol_diff[i] == doctest::Approx(rep.sol_diff[i]).epsilon(1e-12));
  }
}

TEST_CASE("uniqueness verdict is withheld for distributional speeds") {
  ScenarioProblem p = base_problem();
  p.a.smooth = SmoothPart{};  // constant 1
  p.a.jumps.push_back({0.5, 1.0});
  p.a.declared_order = 1;
  const Mollifier b = make_mollifier(MollifierShape::Bump, 1e-10);
  const Mollifier c = make_mollifier(MollifierShape::CosineSq, 1e-10);
  const UniquenessReport rep = uniqueness_experiment(p, b, c, {}, kNet);
  CHECK_FALSE(rep.pass.has_value());
  CHECK(rep.sol_diff.size() == kNet.size());
}

TEST_CASE("consistency wants a classical speed") {
  ScenarioProblem p = base_problem();
  p.a.atoms.push_back({0.5, 1.0, 0});
  p.a.declared_order = 1;
  const Mollifier psi = make_mollifier(MollifierShape::Bump, 1e-10);
  CHECK_THROWS_AS(consistency_experiment(p, psi, {}, kNet), ValidationError);
}

TEST_CASE("regularity collapse: regularized nets approach the classical solve") {
  const ScenarioProblem p = base_problem();
  const Mollifier psi = make_mollifier(MollifierShape::Bump, 1e-10);
  const ConsistencyReport rep = consistency_experiment(p, psi, {}, kNet);
  CHECK(rep.monotone);
  CHECK(rep.slope >= 0.8);
  CHECK(rep.final_error < rep.err_CH.front() + rep.err_C1H.front());
}

TEST_CASE("amplification scan stays flat for constant speeds") {
  SmoothPart one;
  one.c0 = 1.0;
  const std::vector<double> betas{2.0, 5.0, 12.0, 30.0, 70.0};
  const AmplificationScan scan = gevrey_amplification_scan(one, 1.5, betas);
  CHECK(scan.bounded);
  CHECK(scan.K_prime < 0.05);
  for (double A : scan.amplification) CHECK(A == doctest::Approx(1.0).epsilon(1e-4));
  const std::vector<double> few{1.0, 2.0};
  CHECK_THROWS_AS(gevrey_amplification_scan(one, 1.5, few), ValidationError);
  CHECK_THROWS_AS(gevrey_amplification_scan(one, 0.5, betas), ValidationError);
}

TEST_CASE("advisor totality and boundaries") {
  using K = CoefficientClass::Kind;
  CHECK(regime_advisor({K::LipschitzPositive, 0, 0}).sobolev);
  CHECK(regime_advisor({K::HolderPositive, 0.5, 0}).s_sup == doctest::Approx(2.0));
  CHECK(regime_advisor({K::SmoothDegenerate, 0, 2}).s_sup == doctest::Approx(2.0));
  CHECK(regime_advisor({K::SmoothDegenerate, 0, 6}).s_sup == doctest::Approx(4.0));
  CHECK(regime_advisor({K::HolderDegenerate, 1.5, 0}).s_sup == doctest::Approx(1.75));
  CHECK_THROWS_AS(regime_advisor({K::HolderPositive, 1.0, 0}), ConfigError);
  CHECK_THROWS_AS(regime_advisor({K::HolderDegenerate, 2.0, 0}), ConfigError);
  CHECK_THROWS_AS(regime_advisor({K::SmoothDegenerate, 0, 1}), ConfigError);
  // exactly one regime per canonical class
  int regimes[4] = {
      regime_advisor({K::LipschitzPositive, 0.5, 2}).regime,
      regime_advisor({K::HolderPositive, 0.5, 2}).regime,
      regime_advisor({K::SmoothDegenerate, 0.5, 2}).regime,
      regime_advisor({K::HolderDegenerate, 0.5, 2}).regime};
  for (int i = 0; i < 4; ++i) CHECK(regimes[i] == i + 1);
}

TEST_CASE("energy inequality audit") {
  ScenarioProblem p = base_problem();
  const EnergyAudit audit = energy_inequality_audit(p);
  CHECK(audit.C_emp > 0.0);
  CHECK(audit.C_emp < 100.0);
  CHECK_FALSE(audit.solver_bug);

  ScenarioProblem zero = base_problem();
  zero.u0 = ModeFieldDescriptor{};
  const EnergyAudit za = energy_inequality_audit(zero);
  CHECK(za.C_emp == 0.0);
  CHECK_FALSE(za.solver_bug);

  // stability under mode doubling
  ScenarioProblem big = base_problem();
  big.model = build_model(SpectralFamily::Power, 16, 2.0);
  const EnergyAudit ba = energy_inequality_audit(big);
  CHECK(ba.C_emp / audit.C_emp < 2.0);
  CHECK(audit.C_emp / ba.C_emp < 2.0);
}

TEST_CASE("gevrey moderateness certifies a smooth net at some eta") {
  ScenarioProblem p = base_problem();
  p.u0.kind = ModeFieldDescriptor::Kind::ExpDecay;
  const Mollifier psi = make_mollifier(MollifierShape::Bump, 1e-10);
  const NetSolution net = solve_regularized_net(p, psi, {}, kNet, 2);
  const std::vector<double> etas{0.05, 0.2, 0.8};
  const GevreyModeratenessReport rep =
      gevrey_moderateness_report(net, 1.5, etas, 2);
  CHECK(rep.certified);
  CHECK(rep.eta == doctest::Approx(0.05));  // smooth case certifies immediately
}

TEST_CASE("eps helpers") {
  const auto net = geometric_eps_net(2.0, 2, 5);
  REQUIRE(net.size() == 4);
  CHECK(net[0] == doctest::Approx(0.25));
  CHECK(net[3] == doctest::Approx(1.0 / 32.0));
  CHECK_THROWS_AS(geometric_eps_net(0.5, 1, 3), ConfigError);
  const auto ls = logspace(1.0, 100.0, 3);
  CHECK(ls[1] == doctest::Approx(10.0));
  CHECK_THROWS_AS(logspace(-1.0, 2.0, 3), ConfigError);
}
