#include "vwl/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vwl {

namespace {
constexpr int kScanSamples = 4096;
}

double CoefficientView::value(double t) const {
  if (const auto* s = std::get_if<SmoothPart>(&rep_)) return s->value(t);
  return std::get<std::shared_ptr<const SampledCoefficient>>(rep_)->value_at(t);
}

double CoefficientView::derivative(double t) const {
  if (const auto* s = std::get_if<SmoothPart>(&rep_)) return s->derivative(t, 1);
  return std::get<std::shared_ptr<const SampledCoefficient>>(rep_)->derivative_at(t);
}

double CoefficientView::min_value(double t0, double t1) const {
  if (const auto* c = std::get_if<std::shared_ptr<const SampledCoefficient>>(&rep_)) {
    return (*c)->min_value();
  }
  double m = HUGE_VAL;
  for (int i = 0; i <= kScanSamples; ++i) {
    m = std::min(m, value(t0 + (t1 - t0) * i / kScanSamples));
  }
  return m;
}

double CoefficientView::max_value(double t0, double t1) const {
  if (const auto* c = std::get_if<std::shared_ptr<const SampledCoefficient>>(&rep_)) {
    return (*c)->max_value();
  }
  double m = -HUGE_VAL;
  for (int i = 0; i <= kScanSamples; ++i) {
    m = std::max(m, value(t0 + (t1 - t0) * i / kScanSamples));
  }
  return m;
}

double CoefficientView::max_abs_derivative(double t0, double t1) const {
  if (const auto* c = std::get_if<std::shared_ptr<const SampledCoefficient>>(&rep_)) {
    if ((*c)->deriv.size() > 1) return (*c)->max_abs_derivative(1);
  }
  double m = 0.0;
  for (int i = 0; i <= kScanSamples; ++i) {
    m = std::max(m, std::abs(derivative(t0 + (t1 - t0) * i / kScanSamples)));
  }
  return m;
}

double CoefficientView::max_frequency() const {
  if (const auto* s = std::get_if<SmoothPart>(&rep_)) return s->max_frequency();
  return 0.0;
}

bool CoefficientView::is_zero() const {
  if (const auto* s = std::get_if<SmoothPart>(&rep_)) {
    return s->is_constant() && s->value(0.0) == 0.0;
  }
  return false;
}

namespace {

struct State {
  std::complex<double> v;
  std::complex<double> w;
};

int pick_substeps(const ModeProblem& p, const SolveOptions& opts) {
  const double a_max = p.a.max_value(p.grid.t0, p.grid.t1);
  const double rate = p.beta * std::max(std::sqrt(std::max(a_max, 0.0)), 1.0);
  double h_max = opts.theta / rate;
  const double freq = std::max(p.a.max_frequency(), p.source_profile.max_frequency());
  if (freq > 0.0) h_max = std::min(h_max, opts.coeff_resolution / freq);
  const int n_sub = std::max(1, static_cast<int>(std::ceil(p.grid.dt() / h_max)));
  const long total = static_cast<long>(p.grid.steps) * n_sub;
  if (total > opts.max_steps) {
    throw SolverBudgetError(
        "solve_mode: step budget exceeded (beta=" + std::to_string(p.beta) +
        ", needed " + std::to_string(total) + " steps, min dt " +
        std::to_string(p.grid.dt() / n_sub) + ")");
  }
  return n_sub;
}

}  // namespace

ModeTrajectory solve_mode(const ModeProblem& p, const SolveOptions& opts) {
  const int n_sub = pick_substeps(p, opts);
  ModeTrajectory traj;
  traj.beta = p.beta;
  traj.grid = TimeGrid{p.grid.t0, p.grid.t1, p.grid.steps * n_sub};
  traj.substeps = n_sub;
  traj.method = opts.method;
  traj.v.resize(traj.grid.size());
  traj.vt.resize(traj.grid.size());

  const double h = traj.grid.dt();
  const double b2 = p.beta * p.beta;
  const auto accel = [&](double t, const std::complex<double>& v) {
    return p.source_at(t) - b2 * p.a.value(t) * v;
  };

  State y{p.v0, p.v1};
  traj.v[0] = y.v;
  traj.vt[0] = y.w;

  if (opts.method == IntegratorMethod::RK4) {
    for (int i = 0; i < traj.grid.steps; ++i) {
      const double t = traj.grid.time(i);
      const double am = p.a.value(t + 0.5 * h);
      const std::complex<double> fm = p.source_at(t + 0.5 * h);
      const auto accel_mid = [&](const std::complex<double>& v) {
        return fm - b2 * am * v;
      };
      const std::complex<double> k1v = y.w;
      const std::complex<double> k1w = accel(t, y.v);
      const std::complex<double> k2v = y.w + 0.5 * h * k1w;
      const std::complex<double> k2w = accel_mid(y.v + 0.5 * h * k1v);
      const std::complex<double> k3v = y.w + 0.5 * h * k2w;
      const std::complex<double> k3w = accel_mid(y.v + 0.5 * h * k2v);
      const std::complex<double> k4v = y.w + h * k3w;
      const std::complex<double> k4w = accel(t + h, y.v + h * k3v);
      y.v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
      y.w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
      traj.v[i + 1] = y.v;
      traj.vt[i + 1] = y.w;
    }
  } else {
    std::complex<double> acc = accel(traj.grid.t0, y.v);
    for (int i = 0; i < traj.grid.steps; ++i) {
      const double t = traj.grid.time(i);
      y.v += h * y.w + 0.5 * h * h * acc;
      const std::complex<double> acc_next = accel(t + h, y.v);
      y.w += 0.5 * h * (acc + acc_next);
      acc = acc_next;
      traj.v[i + 1] = y.v;
      traj.vt[i + 1] = y.w;
    }
  }
  traj.total_steps = traj.grid.steps;
  return traj;
}

ModeTrajectory classical_reference(const ModeProblem& p, const SolveOptions& opts) {
  if (!p.a.is_exact()) {
    throw ValidationError(
        "classical_reference: coefficient must be an exact analytic descriptor");
  }
  SolveOptions tight = opts;
  tight.theta = 0.5 * opts.theta;
  tight.max_steps = opts.max_steps * 2;
  return solve_mode(p, tight);
}

EnergyTrace energy_trace(const ModeTrajectory& traj, const CoefficientView& a) {
  EnergyTrace tr;
  const int n = traj.grid.size();
  tr.times.resize(n);
  tr.energy.resize(n);
  tr.a_min = HUGE_VAL;
  tr.a_max = -HUGE_VAL;
  const double b2 = traj.beta * traj.beta;
  for (int i = 0; i < n; ++i) {
    const double t = traj.grid.time(i);
    const double at = a.value(t);
    tr.times[i] = t;
    tr.energy[i] = 2.0 * at * b2 * std::norm(traj.v[i]) + 2.0 * std::norm(traj.vt[i]);
    tr.a_min = std::min(tr.a_min, at);
    tr.a_max = std::max(tr.a_max, at);
  }
  tr.sup_da = a.max_abs_derivative(traj.grid.t0, traj.grid.t1);
  tr.c0 = 2.0 * std::min(tr.a_min, 1.0);
  tr.c1 = 2.0 * std::max(tr.a_max, 1.0);
  const double norm_S = 2.0 * std::max(std::abs(tr.a_max), 1.0);
  tr.C1_paper = std::max(2.0 * tr.sup_da + 1.0, norm_S * norm_S);
  tr.C2_paper = tr.C1_paper;
  // The stated constant bounds E_t by C (|V|^2 + |F|^2); converting |V|^2 to
  // E costs 1/c0 when the floor is below one.
  const double floor_factor = tr.c0 > 0.0 ? 1.0 / std::min(tr.c0, 1.0) : 1.0;
  tr.C1 = tr.C1_paper * floor_factor;
  tr.C2 = tr.C2_paper;
  return tr;
}

std::vector<BoundViolation> check_energy_bounds(const EnergyTrace& tr,
                                                const ModeTrajectory& traj,
                                                double slack) {
  if (tr.a_min <= 0.0) {
    throw ValidationError(
        "check_energy_bounds: coefficient floor is not strictly positive; "
        "use quasi_energy_trace for degenerate speeds");
  }
  std::vector<BoundViolation> out;
  for (std::size_t i = 0; i < tr.energy.size(); ++i) {
    const double vsq = traj.state_sq(static_cast<int>(i));
    const double tol = slack * std::max(1.0, tr.energy[i]);
    const double low = tr.c0 * vsq - tr.energy[i];
    const double high = tr.energy[i] - tr.c1 * vsq;
    if (low > tol || high > tol) {
      out.push_back({static_cast<int>(i), tr.times[i], std::max(low, high)});
    }
  }
  return out;
}

GronwallReport gronwall_envelope(const EnergyTrace& tr,
                                 const ModeTrajectory& traj,
                                 const ModeProblem& p, double slack_scale) {
  const double rate =
      traj.beta * std::max(std::sqrt(std::max(tr.a_max, 0.0)), 1.0);
  if (traj.grid.dt() > 2.0 * M_PI / (10.0 * rate)) {
    throw ValidationError(
        "gronwall_envelope: grid too coarse, need >= 10 points per oscillation");
  }
  GronwallReport rep;
  rep.C1 = tr.C1;
  rep.C2 = tr.C2;
  const int n = traj.grid.size();
  const double dt = traj.grid.dt();
  const double E0 = tr.energy[0];

  std::vector<double> fsq(n);
  for (int i = 0; i < n; ++i) {
    fsq[i] = std::norm(p.source_at(tr.times[i]));
  }

  rep.differential_ok = true;
  rep.envelope_ok = true;
  rep.worst_differential_margin = HUGE_VAL;
  rep.worst_envelope_margin = HUGE_VAL;
  double cum_fsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = tr.times[i];
    const double envelope = std::exp(rep.C1 * t) * (E0 + rep.C2 * cum_fsq);
    const double slack = slack_scale * std::max(envelope, rep.C2 * cum_fsq);
    const double env_margin = envelope + slack - tr.energy[i];
    rep.worst_envelope_margin = std::min(rep.worst_envelope_margin, env_margin);
    if (env_margin < 0.0) rep.envelope_ok = false;

    if (i + 1 < n) {
      const double lhs = (tr.energy[i + 1] - tr.energy[i]) / dt;
      const double rhs = rep.C1 * tr.energy[i] + rep.C2 * fsq[i] + slack;
      rep.worst_differential_margin =
          std::min(rep.worst_differential_margin, rhs - lhs);
      if (rhs < lhs) rep.differential_ok = false;
      cum_fsq += 0.5 * dt * (fsq[i] + fsq[i + 1]);
    }
  }
  return rep;
}

QuasiEnergyTrace quasi_energy_trace(const ModeTrajectory& traj,
                                    const CoefficientView& a, double delta,
                                    const ModeProblem& p) {
  if (delta <= 0.0) throw std::domain_error("quasi_energy_trace: delta must be positive");
  QuasiEnergyTrace q;
  q.delta = delta;
  const int n = traj.grid.size();
  q.times.resize(n);
  q.energy.resize(n);
  const double b2 = traj.beta * traj.beta;
  double a_max = -HUGE_VAL;
  q.positive = true;
  for (int i = 0; i < n; ++i) {
    const double t = traj.grid.time(i);
    const double at = a.value(t);
    a_max = std::max(a_max, at);
    if (at < -1e-12) {
      throw ValidationError("quasi_energy_trace: coefficient must be nonnegative");
    }
    q.times[i] = t;
    q.energy[i] =
        (at + delta * delta) * b2 * std::norm(traj.v[i]) + std::norm(traj.vt[i]);
    if (traj.state_sq(i) > 0.0 && q.energy[i] <= 0.0) q.positive = false;
  }

  const double sup_da = a.max_abs_derivative(traj.grid.t0, traj.grid.t1);
  const double dmin = std::min(delta * delta, 1.0);
  const double norm_Q = std::max(a_max + delta * delta, 1.0);
  q.rate_theory = sup_da / dmin + traj.beta * delta * delta / dmin + 2.0 * norm_Q;

  const double dt = traj.grid.dt();
  q.rate_empirical = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    const double fsq = std::norm(p.source_at(q.times[i]));
    const double lhs = (q.energy[i + 1] - q.energy[i]) / dt - norm_Q * fsq;
    const double base = std::max(q.energy[i], 1e-300);
    q.rate_empirical = std::max(q.rate_empirical, lhs / base);
  }
  q.rate_ok = q.rate_empirical <= 1.05 * q.rate_theory + 1.0;
  return q;
}

}  // namespace vwl
