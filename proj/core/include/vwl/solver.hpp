#pragma once

#include <complex>
#include <memory>
#include <variant>
#include <vector>

#include "vwl/rough.hpp"

namespace vwl {

/// Time-dependent scalar coefficient as seen by the integrator: either an
/// exact analytic descriptor or a mollified sample table (cubic Hermite
/// between nodes).
class CoefficientView {
 public:
  CoefficientView() : rep_(SmoothPart{}) {}
  static CoefficientView exact(const SmoothPart& s) {
    CoefficientView v;
    v.rep_ = s;
    return v;
  }
  static CoefficientView sampled(SampledCoefficient c) {
    CoefficientView v;
    v.rep_ = std::make_shared<const SampledCoefficient>(std::move(c));
    return v;
  }
  static CoefficientView zero() {
    SmoothPart s;
    s.c0 = 0.0;
    return exact(s);
  }

  double value(double t) const;
  double derivative(double t) const;
  double min_value(double t0, double t1) const;
  double max_value(double t0, double t1) const;
  double max_abs_derivative(double t0, double t1) const;
  /// Highest angular frequency of the descriptor (0 for sampled views,
  /// whose variation is already resolved by their grid).
  double max_frequency() const;
  bool is_exact() const { return std::holds_alternative<SmoothPart>(rep_); }
  bool is_zero() const;

 private:
  std::variant<SmoothPart, std::shared_ptr<const SampledCoefficient>> rep_;
};

enum class IntegratorMethod { RK4, StormerVerlet };

struct SolveOptions {
  /// Oscillation-resolution ceiling: h <= theta / (beta * max(sqrt(a_max), 1)).
  double theta = 0.02;
  /// Coefficient-resolution ceiling: h <= coeff_resolution / max_frequency(a).
  double coeff_resolution = 0.2;
  IntegratorMethod method = IntegratorMethod::RK4;
  long max_steps = 200000;
};

/// One decoupled scalar Cauchy problem v'' + beta^2 a(t) v = f(t) with
/// separable source f(t) = source_coeff * g(t).
struct ModeProblem {
  double beta = 1.0;
  CoefficientView a;
  CoefficientView source_profile = CoefficientView::zero();  // g(t)
  std::complex<double> source_coeff = 0.0;                   // h_m
  std::complex<double> v0 = 0.0;
  std::complex<double> v1 = 0.0;
  TimeGrid grid;  // recording grid over [0, T]

  std::complex<double> source_at(double t) const {
    return source_coeff == std::complex<double>(0.0)
               ? std::complex<double>(0.0)
               : source_coeff * source_profile.value(t);
  }
};

/// Time-discretised state V(t) = (i beta v, v'), recorded as (v, v').
struct ModeTrajectory {
  double beta = 1.0;
  TimeGrid grid;  // recording grid (refined from the problem grid)
  std::vector<std::complex<double>> v;
  std::vector<std::complex<double>> vt;
  int substeps = 1;        // refinement factor applied to the problem grid
  long total_steps = 0;
  IntegratorMethod method = IntegratorMethod::RK4;

  double state_sq(int i) const {
    return beta * beta * std::norm(v[i]) + std::norm(vt[i]);  // |V|^2
  }
};

struct SolverBudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ModeTrajectory solve_mode(const ModeProblem& p, const SolveOptions& opts = {});

/// High-accuracy trajectory for consistency targets; requires an exact
/// analytic coefficient and runs at a tightened step ceiling.
ModeTrajectory classical_reference(const ModeProblem& p,
                                   const SolveOptions& opts = {});

/// Symmetriser energy E = (S V, V), S = diag(2 a, 2), with the two-sided
/// bound constants and Gronwall constants from grid extrema.
struct EnergyTrace {
  std::vector<double> times;
  std::vector<double> energy;
  double a_min = 0.0, a_max = 0.0, sup_da = 0.0;
  double c0 = 0.0, c1 = 0.0;       // 2 min(a_min, 1), 2 max(a_max, 1)
  double C1_paper = 0.0, C2_paper = 0.0;  // max(sup|S_t|+1, sup|S|^2) as stated
  double C1 = 0.0, C2 = 0.0;       // constants valid for any floor (C/min(c0,1))
};

EnergyTrace energy_trace(const ModeTrajectory& traj, const CoefficientView& a);

struct BoundViolation {
  int index;
  double time;
  double excess;
};

/// Checks c0 |V|^2 <= E <= c1 |V|^2 pointwise. Requires a strictly positive
/// coefficient floor; degenerate speeds route to quasi_energy_trace.
std::vector<BoundViolation> check_energy_bounds(const EnergyTrace& tr,
                                                const ModeTrajectory& traj,
                                                double slack = 1e-12);

struct GronwallReport {
  bool differential_ok = false;
  bool envelope_ok = false;
  double worst_differential_margin = 0.0;  // min over grid of RHS - LHS
  double worst_envelope_margin = 0.0;
  double C1 = 0.0, C2 = 0.0;
};

/// (a) discrete differential inequality dE/dt <= C1 E + C2 |F|^2 with the
/// given per-point slack scale, (b) exponential envelope
/// E(t) <= e^{C1 t} (E(0) + C2 int |F|^2).
GronwallReport gronwall_envelope(const EnergyTrace& tr,
                                 const ModeTrajectory& traj,
                                 const ModeProblem& p,
                                 double slack_scale = 1e-6);

/// Quasi-symmetriser energy E_delta = ((a + delta^2) beta^2 |v|^2 + |v'|^2)
/// for degenerate speeds, with its differential-inequality audit.
struct QuasiEnergyTrace {
  double delta = 0.0;
  std::vector<double> times;
  std::vector<double> energy;
  double rate_theory = 0.0;  // sup|a'|/min(delta^2,1) + beta delta-term + source
  double rate_empirical = 0.0;
  bool positive = false;     // E_delta > 0 wherever V != 0
  bool rate_ok = false;
};

QuasiEnergyTrace quasi_energy_trace(const ModeTrajectory& traj,
                                    const CoefficientView& a, double delta,
                                    const ModeProblem& p);

}  // namespace vwl
