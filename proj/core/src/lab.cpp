#include "vwl/lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

namespace vwl {

namespace {

std::vector<double> sobolev_weights(const SpectralModel& model, double s) {
  std::vector<double> w(model.size());
  for (int m = 0; m < model.size(); ++m) {
    w[m] = model.mu[m] * std::pow(1.0 + model.pi[m] * model.pi[m], 2.0 * s / model.nu);
  }
  return w;
}

// ||x||^2 under precomputed weights
double weighted_sq(std::span<const std::complex<double>> x,
                   std::span<const double> w) {
  double sum = 0.0;
  for (std::size_t m = 0; m < x.size(); ++m) sum += w[m] * std::norm(x[m]);
  return sum;
}

void parallel_for(int n, int jobs, const std::function<void(int)>& body) {
  jobs = std::max(1, std::min(jobs, n));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(jobs);
  for (int t = 0; t < jobs; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

bool NetSolution::complete() const {
  return std::all_of(failures.begin(), failures.end(),
                     [](const std::string& f) { return f.empty(); });
}

std::vector<std::vector<std::vector<std::complex<double>>>>
NetSolution::derivative_series(int i_eps, int p_max_wanted) const {
  if (i_eps < 0 || i_eps >= static_cast<int>(eps.size())) {
    throw ValidationError("derivative_series: eps index out of range");
  }
  if (!failures[i_eps].empty()) {
    throw ValidationError("derivative_series: solve failed for this eps: " +
                          failures[i_eps]);
  }
  const int n = grid.size();
  const int n_modes = model.size();
  const auto& trajs = modes[i_eps];
  const auto& ae = a_eps[i_eps];
  const int a_orders = static_cast<int>(ae.deriv.size());
  if (p_max_wanted >= 2 && a_orders < p_max_wanted - 1) {
    throw ValidationError(
        "derivative_series: coefficient derivatives were not sampled deep "
        "enough for the requested order");
  }

  std::vector series(p_max_wanted + 1,
                     std::vector(n, std::vector<std::complex<double>>(n_modes)));
  for (int m = 0; m < n_modes; ++m) {
    const int r = trajs[m].substeps;
    for (int j = 0; j < n; ++j) {
      series[0][j][m] = trajs[m].v[j * r];
      if (p_max_wanted >= 1) series[1][j][m] = trajs[m].vt[j * r];
    }
  }

  ModeField h = make_mode_field(model, source_h_);
  for (int p = 2; p <= p_max_wanted; ++p) {
    for (int j = 0; j < n; ++j) {
      for (int m = 0; m < n_modes; ++m) {
        // d^p v = d^{p-2} f - beta^2 sum_k C(p-2,k) a^(k) d^{p-2-k} v
        std::complex<double> acc = 0.0;
        if (!g_eps.empty() && p - 2 < static_cast<int>(g_eps[i_eps].deriv.size())) {
          acc = h.coeff[m] * g_eps[i_eps].deriv[p - 2][j];
        }
        const double b2 = model.pi[m] * model.pi[m];
        for (int k = 0; k <= p - 2; ++k) {
          acc -= b2 * binom(p - 2, k) * ae.deriv[k][j] * series[p - 2 - k][j][m];
        }
        series[p][j][m] = acc;
      }
    }
  }
  return series;
}

NetSolution solve_regularized_net(const ScenarioProblem& p, const Mollifier& psi,
                                  const ScaleSchedule& sched,
                                  std::span<const double> eps_net, int p_max) {
  p.a.validate();
  if (eps_net.empty()) throw ConfigError("solve_regularized_net: empty eps net");
  for (std::size_t i = 1; i < eps_net.size(); ++i) {
    if (eps_net[i] >= eps_net[i - 1]) {
      throw ConfigError("solve_regularized_net: eps net must be strictly decreasing");
    }
  }
  if (p_max < 1) throw ConfigError("solve_regularized_net: p_max must be >= 1");

  NetSolution net;
  net.model = p.model;
  net.s = p.s;
  net.p_max = p_max;
  net.source_h_ = p.has_source ? p.source_h : ModeFieldDescriptor{};
  net.eps.assign(eps_net.begin(), eps_net.end());
  for (double e : net.eps) net.omega.push_back(schedule_omega(sched, e));

  const double T = p.a.horizon;
  const double omega_min = *std::min_element(net.omega.begin(), net.omega.end());
  const double dt = std::min(p.base_step, omega_min / 4.0);
  net.grid = TimeGrid{0.0, T, std::max(16, static_cast<int>(std::ceil(T / dt)))};

  const int k_max = std::max(1, p_max - 2);
  const ModeField u0 = make_mode_field(p.model, p.u0);
  const ModeField u1 = make_mode_field(p.model, p.u1);
  const ModeField h =
      p.has_source ? make_mode_field(p.model, p.source_h) : ModeField{};
  const auto w_top = sobolev_weights(p.model, p.s + p.model.nu / 2.0);
  const auto w_s = sobolev_weights(p.model, p.s);

  const int n_eps = static_cast<int>(net.eps.size());
  const int n_modes = p.model.size();
  net.a_eps.resize(n_eps);
  if (p.has_source) net.g_eps.resize(n_eps);
  net.modes.assign(n_eps, std::vector<ModeTrajectory>(n_modes));
  net.failures.assign(n_eps, "");
  net.sup_norms.assign(n_eps, std::vector<double>(p_max + 1, 0.0));

  for (int i = 0; i < n_eps; ++i) {
    try {
      net.a_eps[i] = mollify(p.a, psi, net.omega[i], net.grid, k_max);
      if (p.has_source) {
        RoughCoefficient g;
        g.smooth = p.source_g;
        g.horizon = T;
        net.g_eps[i] = mollify(g, psi, net.omega[i], net.grid, k_max);
      }
      const CoefficientView a_view = CoefficientView::sampled(net.a_eps[i]);
      const CoefficientView g_view =
          p.has_source ? CoefficientView::sampled(net.g_eps[i])
                       : CoefficientView::zero();
      parallel_for(n_modes, p.jobs, [&](int m) {
        ModeProblem mp;
        mp.beta = p.model.pi[m];
        mp.a = a_view;
        if (p.has_source) {
          mp.source_profile = g_view;
          mp.source_coeff = h.coeff[m];
        }
        mp.v0 = u0.coeff[m];
        mp.v1 = u1.coeff[m];
        mp.grid = net.grid;
        net.modes[i][m] = solve_mode(mp, p.solve);
      });
      const auto series = net.derivative_series(i, p_max);
      for (int q = 0; q <= p_max; ++q) {
        double sup = 0.0;
        for (int j = 0; j < net.grid.size(); ++j) {
          sup = std::max(sup, weighted_sq(series[q][j], q == 0 ? w_top : w_s));
        }
        net.sup_norms[i][q] = std::sqrt(sup);
      }
    } catch (const std::exception& e) {
      net.failures[i] = e.what();
      std::fill(net.sup_norms[i].begin(), net.sup_norms[i].end(),
                std::numeric_limits<double>::quiet_NaN());
    }
  }
  return net;
}

PowerLawFit fit_power_law(std::span<const double> eps,
                          std::span<const double> values) {
  if (eps.size() != values.size() || eps.size() < 3) {
    throw ValidationError("fit_power_law: need matching nets of at least 3 points");
  }
  PowerLawFit f;
  bool all_tiny = true;
  for (double v : values) {
    if (!std::isfinite(v)) return f;  // envelope_valid = false
    if (v > 1e-300) all_tiny = false;
  }
  if (all_tiny) {
    f.slope = 0.0;
    f.log_c = -690.0;
    f.envelope_valid = true;
    return f;
  }
  std::vector<double> x, y;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (values[i] > 1e-300) {
      x.push_back(std::log(1.0 / eps[i]));
      y.push_back(std::log(values[i]));
    }
  }
  if (x.size() < 3) return f;
  const LineFit all = fit_line(x, y);
  f.slope = all.slope;
  f.r_squared = all.r_squared;
  // value <= c eps^{-slope}  <=>  log c = max(log v + slope log eps)
  double log_c = -HUGE_VAL;
  for (std::size_t i = 0; i < x.size(); ++i) {
    log_c = std::max(log_c, y[i] - f.slope * x[i]);
  }
  f.log_c = log_c;
  // power-law validity: the local slope on the fine-eps half must not run
  // away from the global one (a super-polynomial net accelerates)
  const std::size_t half = x.size() / 2;
  const LineFit fine =
      fit_line(std::span(x).subspan(half), std::span(y).subspan(half));
  f.envelope_valid =
      fine.slope <= all.slope + std::max(1.0, 0.5 * std::abs(all.slope));
  return f;
}

ModeratenessReport moderateness_report(const NetSolution& net, int p_max) {
  if (p_max > net.p_max) {
    throw ValidationError("moderateness_report: net was not solved to this order");
  }
  ModeratenessReport rep;
  rep.moderate = net.complete();
  rep.N = 0.0;
  for (int p = 0; p <= p_max; ++p) {
    std::vector<double> vals;
    for (const auto& row : net.sup_norms) vals.push_back(row[p]);
    PowerLawFit f = fit_power_law(net.eps, vals);
    rep.N = std::max(rep.N, f.slope - p);
    rep.moderate = rep.moderate && f.envelope_valid;
    rep.per_p.push_back(std::move(f));
  }
  for (int p = 0; p <= p_max; ++p) {
    double c = 0.0;
    for (std::size_t i = 0; i < net.eps.size(); ++i) {
      c = std::max(c, net.sup_norms[i][p] * std::pow(net.eps[i], rep.N + p));
    }
    rep.c_p.push_back(c);
  }
  return rep;
}

GevreyModeratenessReport gevrey_moderateness_report(
    const NetSolution& net, double s, std::span<const double> eta_grid,
    int p_max) {
  if (s < 1.0) throw ValidationError("gevrey_moderateness_report: s must be >= 1");
  if (eta_grid.empty()) {
    throw ConfigError("gevrey_moderateness_report: empty eta grid");
  }
  if (!net.complete()) {
    throw ValidationError("gevrey_moderateness_report: net has failed solves");
  }
  std::vector<double> etas(eta_grid.begin(), eta_grid.end());
  std::sort(etas.begin(), etas.end());

  const int n_eps = static_cast<int>(net.eps.size());
  const int n_modes = net.model.size();
  std::vector<double> pi_pow(n_modes);
  for (int m = 0; m < n_modes; ++m) {
    pi_pow[m] = std::pow(net.model.pi[m], 1.0 / s);
  }
  // vals[i_eta][p][i_eps] = sup_t || e^{-eta R^{1/(2s)}} d_t^p u ||
  std::vector vals(etas.size(),
                   std::vector(p_max + 1, std::vector<double>(n_eps, 0.0)));
  for (int i = 0; i < n_eps; ++i) {
    const auto series = net.derivative_series(i, p_max);
    for (std::size_t ie = 0; ie < etas.size(); ++ie) {
      std::vector<double> w(n_modes);
      for (int m = 0; m < n_modes; ++m) {
        w[m] = net.model.mu[m] * std::exp(-2.0 * etas[ie] * pi_pow[m]);
      }
      for (int p = 0; p <= p_max; ++p) {
        double sup = 0.0;
        for (int j = 0; j < net.grid.size(); ++j) {
          sup = std::max(sup, weighted_sq(series[p][j], w));
        }
        vals[ie][p][i] = std::sqrt(sup);
      }
    }
  }

  GevreyModeratenessReport rep;
  for (std::size_t ie = 0; ie < etas.size(); ++ie) {
    std::vector<PowerLawFit> fits;
    bool ok = true;
    for (int p = 0; p <= p_max; ++p) {
      fits.push_back(fit_power_law(net.eps, vals[ie][p]));
      ok = ok && fits.back().envelope_valid;
    }
    if (ok) {
      rep.certified = true;
      rep.eta = etas[ie];
      rep.per_p = std::move(fits);
      return rep;
    }
    if (ie + 1 == etas.size()) rep.per_p = std::move(fits);  // largest eta, for diagnosis
  }
  rep.eta = etas.back();
  return rep;
}

namespace {

// C-H x C1-H distance between two nets at one eps, sampled on the shared grid.
double net_distance(const NetSolution& a, const NetSolution& b, int i) {
  const auto wa = sobolev_weights(a.model, a.s + a.model.nu / 2.0);
  const auto ws = sobolev_weights(a.model, a.s);
  const int n_modes = a.model.size();
  double sup_u = 0.0, sup_ut = 0.0;
  std::vector<std::complex<double>> du(n_modes), dut(n_modes);
  for (int j = 0; j < a.grid.size(); ++j) {
    for (int m = 0; m < n_modes; ++m) {
      const int ra = a.modes[i][m].substeps;
      const int rb = b.modes[i][m].substeps;
      du[m] = a.modes[i][m].v[j * ra] - b.modes[i][m].v[j * rb];
      dut[m] = a.modes[i][m].vt[j * ra] - b.modes[i][m].vt[j * rb];
    }
    sup_u = std::max(sup_u, weighted_sq(du, wa));
    sup_ut = std::max(sup_ut, weighted_sq(dut, ws));
  }
  return std::sqrt(sup_u) + std::sqrt(sup_ut);
}

double decay_slope_of(std::span<const double> eps, std::span<const double> vals,
                      double scale) {
  bool all_tiny = true;
  std::vector<double> x, y;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (vals[i] > 1e-14 * std::max(scale, 1.0)) all_tiny = false;
    if (vals[i] > 1e-300) {
      x.push_back(std::log(eps[i]));
      y.push_back(std::log(vals[i]));
    }
  }
  if (all_tiny) return HUGE_VAL;  // below noise floor: beats every power
  if (x.size() < 2) return 0.0;
  return fit_line(x, y).slope;
}

}  // namespace

NegligibilityReport negligibility_test(const NetSolution& net_a,
                                       const NetSolution& net_b,
                                       std::span<const int> ell_list) {
  if (net_a.eps.size() != net_b.eps.size() ||
      net_a.model.size() != net_b.model.size() ||
      !(net_a.grid == net_b.grid)) {
    throw ValidationError("negligibility_test: nets are not comparable");
  }
  for (std::size_t i = 0; i < net_a.eps.size(); ++i) {
    if (std::abs(net_a.eps[i] - net_b.eps[i]) > 1e-12 * net_a.eps[i]) {
      throw ValidationError("negligibility_test: eps nets differ");
    }
  }
  if (!net_a.complete() || !net_b.complete()) {
    throw ValidationError("negligibility_test: net has failed solves");
  }

  NegligibilityReport rep;
  rep.eps = net_a.eps;
  double scale = 0.0;
  for (std::size_t i = 0; i < net_a.eps.size(); ++i) {
    rep.diff_norms.push_back(net_distance(net_a, net_b, static_cast<int>(i)));
    scale = std::max(scale, net_a.sup_norms[i][0] + net_a.sup_norms[i][1]);
  }
  rep.decay_slope = decay_slope_of(rep.eps, rep.diff_norms, scale);
  for (int ell : ell_list) {
    rep.ell.push_back(ell);
    rep.negligible.push_back(rep.decay_slope >= ell - 0.05);
  }
  return rep;
}

UniquenessReport uniqueness_experiment(const ScenarioProblem& p,
                                       const Mollifier& psi1,
                                       const Mollifier& psi2,
                                       const ScaleSchedule& sched,
                                       std::span<const double> eps_net,
                                       double slope_threshold,
                                       double final_threshold) {
  const NetSolution n1 = solve_regularized_net(p, psi1, sched, eps_net, 1);
  const NetSolution n2 = solve_regularized_net(p, psi2, sched, eps_net, 1);
  if (!n1.complete() || !n2.complete()) {
    throw ValidationError("uniqueness_experiment: a regularised solve failed");
  }

  UniquenessReport rep;
  rep.eps = n1.eps;
  double scale = 0.0;
  for (std::size_t i = 0; i < n1.eps.size(); ++i) {
    double cd = 0.0;
    for (int j = 0; j < n1.grid.size(); ++j) {
      cd = std::max(cd, std::abs(n1.a_eps[i].values()[j] - n2.a_eps[i].values()[j]));
    }
    rep.coeff_diff.push_back(cd);
    rep.sol_diff.push_back(net_distance(n1, n2, static_cast<int>(i)));
    scale = std::max(scale, n1.sup_norms[i][0] + n1.sup_norms[i][1]);
  }
  rep.coeff_slope = decay_slope_of(rep.eps, rep.coeff_diff, 1.0);
  rep.sol_slope = decay_slope_of(rep.eps, rep.sol_diff, scale);
  rep.final_diff = rep.sol_diff.back();
  if (!p.a.is_distributional()) {
    rep.pass = rep.sol_slope >= slope_threshold &&
               (rep.final_diff <= final_threshold ||
                rep.final_diff <= 1e-10 * std::max(scale, 1.0));
  }
  return rep;
}

ConsistencyReport consistency_experiment(const ScenarioProblem& p,
                                         const Mollifier& psi,
                                         const ScaleSchedule& sched,
                                         std::span<const double> eps_net,
                                         double final_threshold) {
  if (p.a.is_distributional()) {
    throw ValidationError(
        "consistency_experiment: needs a classical (non-distributional) speed");
  }
  const NetSolution net = solve_regularized_net(p, psi, sched, eps_net, 1);
  if (!net.complete()) {
    throw ValidationError("consistency_experiment: a regularised solve failed");
  }

  // classical target on the same recording grid
  const ModeField u0 = make_mode_field(p.model, p.u0);
  const ModeField u1 = make_mode_field(p.model, p.u1);
  const ModeField h =
      p.has_source ? make_mode_field(p.model, p.source_h) : ModeField{};
  std::vector<ModeTrajectory> target(p.model.size());
  parallel_for(p.model.size(), p.jobs, [&](int m) {
    ModeProblem mp;
    mp.beta = p.model.pi[m];
    mp.a = CoefficientView::exact(p.a.smooth);
    if (p.has_source) {
      mp.source_profile = CoefficientView::exact(p.source_g);
      mp.source_coeff = h.coeff[m];
    }
    mp.v0 = u0.coeff[m];
    mp.v1 = u1.coeff[m];
    mp.grid = net.grid;
    target[m] = classical_reference(mp, p.solve);
  });

  const auto w_top = sobolev_weights(p.model, p.s + p.model.nu / 2.0);
  const auto w_s = sobolev_weights(p.model, p.s);
  ConsistencyReport rep;
  rep.eps = net.eps;
  std::vector<std::complex<double>> du(p.model.size()), dut(p.model.size());
  for (std::size_t i = 0; i < net.eps.size(); ++i) {
    double sup_u = 0.0, sup_ut = 0.0;
    for (int j = 0; j < net.grid.size(); ++j) {
      for (int m = 0; m < p.model.size(); ++m) {
        const int rn = net.modes[i][m].substeps;
        const int rt = target[m].substeps;
        du[m] = net.modes[i][m].v[j * rn] - target[m].v[j * rt];
        dut[m] = net.modes[i][m].vt[j * rn] - target[m].vt[j * rt];
      }
      sup_u = std::max(sup_u, weighted_sq(du, w_top));
      sup_ut = std::max(sup_ut, weighted_sq(dut, w_s));
    }
    rep.err_CH.push_back(std::sqrt(sup_u));
    rep.err_C1H.push_back(std::sqrt(sup_ut));
  }

  std::vector<double> total(rep.eps.size());
  rep.monotone = true;
  for (std::size_t i = 0; i < rep.eps.size(); ++i) {
    total[i] = rep.err_CH[i] + rep.err_C1H[i];
    if (i > 0 && total[i] > 1.05 * total[i - 1]) rep.monotone = false;
  }
  rep.slope = decay_slope_of(rep.eps, total, net.sup_norms[0][0]);
  rep.final_error = total.back();
  rep.consistent = rep.monotone && rep.final_error <= final_threshold;
  return rep;
}

AmplificationScan gevrey_amplification_scan(const SmoothPart& a, double s,
                                            std::span<const double> beta_list,
                                            double horizon, double ratio_factor,
                                            const SolveOptions& opts) {
  if (s < 1.0) throw ValidationError("gevrey_amplification_scan: s must be >= 1");
  if (beta_list.size() < 4) {
    throw ValidationError("gevrey_amplification_scan: need at least 4 frequencies");
  }
  AmplificationScan scan;
  scan.beta.assign(beta_list.begin(), beta_list.end());
  scan.amplification.resize(scan.beta.size());
  for (std::size_t i = 0; i < scan.beta.size(); ++i) {
    ModeProblem mp;
    mp.beta = scan.beta[i];
    mp.a = CoefficientView::exact(a);
    mp.v0 = 1.0;
    mp.v1 = 0.0;
    mp.grid = TimeGrid{0.0, horizon, 1000};
    const ModeTrajectory traj = solve_mode(mp, opts);
    const double base = traj.state_sq(0);
    if (base <= 0.0) {
      throw std::domain_error("gevrey_amplification_scan: zero initial state");
    }
    double sup = 0.0;
    for (int j = 0; j < traj.grid.size(); ++j) {
      sup = std::max(sup, traj.state_sq(j));
    }
    scan.amplification[i] = sup / base;
  }

  std::vector<double> x(scan.beta.size()), y(scan.beta.size());
  for (std::size_t i = 0; i < scan.beta.size(); ++i) {
    x[i] = std::pow(scan.beta[i], 1.0 / s);
    y[i] = std::log(scan.amplification[i]);
    scan.ratio.push_back(y[i] / x[i]);
  }
  scan.K_prime = std::max(0.0, upper_envelope(x, y, fit_line(x, y)).slope);

  std::vector<double> r = scan.ratio;
  std::sort(r.begin(), r.end());
  const std::size_t n = r.size();
  const double median =
      n % 2 ? r[n / 2] : 0.5 * (r[n / 2 - 1] + r[n / 2]);
  const double top = r.back();
  if (top <= 1e-6) {
    // flat scan: any spread is integrator noise, not growth
    scan.max_over_median = 0.0;
    scan.bounded = true;
  } else {
    scan.max_over_median = top / std::max(median, 1e-300);
    scan.bounded = median > 0.0 && scan.max_over_median <= ratio_factor;
  }
  return scan;
}

RegimeRecord regime_advisor(const CoefficientClass& c) {
  RegimeRecord r;
  switch (c.kind) {
    case CoefficientClass::Kind::LipschitzPositive:
      r.regime = 1;
      r.sobolev = true;
      r.s_sup = HUGE_VAL;
      r.space = "C([0,T]; H^{s+nu/2}) cap C^1([0,T]; H^s) for every real s";
      break;
    case CoefficientClass::Kind::HolderPositive:
      if (!(c.alpha > 0.0 && c.alpha < 1.0)) {
        throw ConfigError(
            "regime_advisor: Holder-positive class needs 0 < alpha < 1 "
            "(the boundary alpha = 1 is the Lipschitz class)");
      }
      r.regime = 2;
      r.s_sup = 1.0 + c.alpha / (1.0 - c.alpha);
      r.space = "Gevrey gamma^s with 1 <= s < 1 + alpha/(1 - alpha)";
      break;
    case CoefficientClass::Kind::SmoothDegenerate:
      if (c.ell < 2) {
        throw ConfigError("regime_advisor: degenerate smooth class needs ell >= 2");
      }
      r.regime = 3;
      r.s_sup = 1.0 + c.ell / 2.0;
      r.space = "Gevrey gamma^s with 1 <= s < 1 + ell/2";
      break;
    case CoefficientClass::Kind::HolderDegenerate:
      if (!(c.alpha > 0.0 && c.alpha < 2.0)) {
        throw ConfigError(
            "regime_advisor: degenerate Holder class needs 0 < alpha < 2 "
            "(the boundary alpha = 2 routes to the smooth degenerate class)");
      }
      r.regime = 4;
      r.s_sup = 1.0 + c.alpha / 2.0;
      r.space = "Gevrey gamma^s with 1 <= s < 1 + alpha/2";
      break;
  }
  return r;
}

EnergyAudit energy_inequality_audit(const ScenarioProblem& p) {
  if (p.a.is_distributional()) {
    throw ValidationError(
        "energy_inequality_audit: needs an exact Lipschitz-positive speed");
  }
  p.a.validate();

  const ModeField u0 = make_mode_field(p.model, p.u0);
  const ModeField u1 = make_mode_field(p.model, p.u1);
  const ModeField h =
      p.has_source ? make_mode_field(p.model, p.source_h) : ModeField{};
  const TimeGrid grid{0.0, p.a.horizon,
                      std::max(16, static_cast<int>(std::ceil(p.a.horizon / p.base_step)))};
  std::vector<ModeTrajectory> trajs(p.model.size());
  parallel_for(p.model.size(), p.jobs, [&](int m) {
    ModeProblem mp;
    mp.beta = p.model.pi[m];
    mp.a = CoefficientView::exact(p.a.smooth);
    if (p.has_source) {
      mp.source_profile = CoefficientView::exact(p.source_g);
      mp.source_coeff = h.coeff[m];
    }
    mp.v0 = u0.coeff[m];
    mp.v1 = u1.coeff[m];
    mp.grid = grid;
    trajs[m] = solve_mode(mp, p.solve);
  });

  const auto w_top = sobolev_weights(p.model, p.s + p.model.nu / 2.0);
  const auto w_s = sobolev_weights(p.model, p.s);
  EnergyAudit audit;
  std::vector<std::complex<double>> u(p.model.size()), ut(p.model.size());
  for (int j = 0; j < grid.size(); ++j) {
    for (int m = 0; m < p.model.size(); ++m) {
      const int r = trajs[m].substeps;
      u[m] = trajs[m].v[j * r];
      ut[m] = trajs[m].vt[j * r];
    }
    audit.lhs_sup = std::max(audit.lhs_sup,
                             weighted_sq(u, w_top) + weighted_sq(ut, w_s));
  }

  audit.rhs = weighted_sq(u0.coeff, w_top) + weighted_sq(u1.coeff, w_s);
  if (p.has_source) {
    double sup_g = 0.0;
    for (int j = 0; j <= 4096; ++j) {
      sup_g = std::max(sup_g, std::abs(p.source_g.value(p.a.horizon * j / 4096.0)));
    }
    audit.rhs += sup_g * sup_g * weighted_sq(h.coeff, w_s);
  }
  if (audit.rhs <= 0.0) {
    audit.solver_bug = audit.lhs_sup > 1e-12;
    audit.C_emp = audit.solver_bug ? HUGE_VAL : 0.0;
  } else {
    audit.C_emp = audit.lhs_sup / audit.rhs;
  }
  return audit;
}

std::vector<double> geometric_eps_net(double base, int exp_start, int exp_stop) {
  if (base <= 1.0) throw ConfigError("geometric_eps_net: base must exceed 1");
  if (exp_stop < exp_start) throw ConfigError("geometric_eps_net: bad exponent range");
  std::vector<double> eps;
  for (int e = exp_start; e <= exp_stop; ++e) eps.push_back(std::pow(base, -e));
  return eps;
}

std::vector<double> logspace(double lo, double hi, int n) {
  if (n < 2 || lo <= 0.0 || hi <= lo) throw ConfigError("logspace: bad range");
  std::vector<double> out;
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) out.push_back(lo * std::exp(i * step));
  return out;
}

}  // namespace vwl
