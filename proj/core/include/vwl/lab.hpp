#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vwl/rough.hpp"
#include "vwl/solver.hpp"
#include "vwl/spectral.hpp"

namespace vwl {

/// Full problem statement for the net experiments: rough speed, spectral
/// model, Cauchy data, separable source g(t) * h_m.
struct ScenarioProblem {
  RoughCoefficient a;
  SpectralModel model;
  ModeFieldDescriptor u0;
  ModeFieldDescriptor u1;
  bool has_source = false;
  SmoothPart source_g;         // time profile (mollified alongside a)
  ModeFieldDescriptor source_h;
  double s = 0.0;
  double base_step = 1e-3;
  SolveOptions solve;
  int jobs = 1;
};

/// eps-indexed family of regularised solutions with the norms the
/// moderateness machinery consumes. Trajectories are retained so every
/// reported norm can be recomputed from raw data.
struct NetSolution {
  std::vector<double> eps;    // descending
  std::vector<double> omega;
  SpectralModel model;
  double s = 0.0;
  int p_max = 0;
  TimeGrid grid;              // common recording grid (trajectory substeps vary)
  std::vector<SampledCoefficient> a_eps;
  std::vector<SampledCoefficient> g_eps;            // empty when no source
  std::vector<std::vector<ModeTrajectory>> modes;   // [i_eps][m]
  std::vector<std::string> failures;                // per-eps diagnostic, "" = ok
  /// sup_t norms: p = 0 measured in H^{s+nu/2}, p >= 1 in H^s.
  std::vector<std::vector<double>> sup_norms;       // [i_eps][p]
  ModeFieldDescriptor source_h_;                    // for the derivative recursion

  bool complete() const;
  /// Mode coefficients of d_t^p u_eps at problem-grid node j (recursion
  /// d_t^2 u = f_eps - a_eps R u for p >= 2).
  std::vector<std::vector<std::vector<std::complex<double>>>> derivative_series(
      int i_eps, int p_max_wanted) const;  // [p][j][m]
};

NetSolution solve_regularized_net(const ScenarioProblem& p, const Mollifier& psi,
                                  const ScaleSchedule& sched,
                                  std::span<const double> eps_net, int p_max);

/// Power-law envelope fit value <= c * eps^{-slope} over the net.
struct PowerLawFit {
  double slope = 0.0;       // fitted exponent of eps^{-slope}
  double log_c = 0.0;
  double r_squared = 1.0;
  bool envelope_valid = false;
};

PowerLawFit fit_power_law(std::span<const double> eps,
                          std::span<const double> values);

struct ModeratenessReport {
  std::vector<PowerLawFit> per_p;
  double N = 0.0;                // single exponent: max_p (slope_p - p)
  std::vector<double> c_p;       // envelope constants for c_p eps^{-N-p}
  bool moderate = false;
};

ModeratenessReport moderateness_report(const NetSolution& net, int p_max);

struct GevreyModeratenessReport {
  bool certified = false;
  double eta = 0.0;              // smallest grid eta admitting all envelopes
  std::vector<PowerLawFit> per_p;  // fits at that eta
};

GevreyModeratenessReport gevrey_moderateness_report(
    const NetSolution& net, double s, std::span<const double> eta_grid,
    int p_max);

struct NegligibilityReport {
  std::vector<double> eps;
  std::vector<double> diff_norms;
  double decay_slope = 0.0;      // value ~ c eps^{decay_slope}
  std::vector<int> ell;
  std::vector<bool> negligible;  // per requested ell
};

NegligibilityReport negligibility_test(const NetSolution& net_a,
                                       const NetSolution& net_b,
                                       std::span<const int> ell_list);

struct UniquenessReport {
  std::vector<double> eps;
  std::vector<double> coeff_diff;  // sup_t |a_eps^1 - a_eps^2|
  std::vector<double> sol_diff;
  double coeff_slope = 0.0;
  double sol_slope = 0.0;
  double final_diff = 0.0;
  /// Pass/fail only in the smooth-coefficient regime; distributional speeds
  /// report decay without a verdict.
  std::optional<bool> pass;
};

UniquenessReport uniqueness_experiment(const ScenarioProblem& p,
                                       const Mollifier& psi1,
                                       const Mollifier& psi2,
                                       const ScaleSchedule& sched,
                                       std::span<const double> eps_net,
                                       double slope_threshold = 0.8,
                                       double final_threshold = 1e-3);

struct ConsistencyReport {
  std::vector<double> eps;
  std::vector<double> err_CH;    // sup_t ||u_eps - u~||_{H^{s+nu/2}}
  std::vector<double> err_C1H;   // sup_t ||d_t u_eps - d_t u~||_{H^s}
  double slope = 0.0;            // total error ~ c eps^{slope}
  bool monotone = false;
  double final_error = 0.0;
  bool consistent = false;
};

ConsistencyReport consistency_experiment(const ScenarioProblem& p,
                                         const Mollifier& psi,
                                         const ScaleSchedule& sched,
                                         std::span<const double> eps_net,
                                         double final_threshold = 1e-3);

struct AmplificationScan {
  std::vector<double> beta;
  std::vector<double> amplification;  // A(beta)
  std::vector<double> ratio;          // log A / beta^{1/s}
  double K_prime = 0.0;               // upper-envelope slope of log A vs beta^{1/s}
  double max_over_median = 0.0;
  bool bounded = false;
};

AmplificationScan gevrey_amplification_scan(const SmoothPart& a, double s,
                                            std::span<const double> beta_list,
                                            double horizon = 1.0,
                                            double ratio_factor = 10.0,
                                            const SolveOptions& opts = {
                                                .theta = 0.01,
                                                .max_steps = 2000000});

struct CoefficientClass {
  enum class Kind {
    LipschitzPositive,   // (i)  a in Lip, a >= a0 > 0
    HolderPositive,      // (ii) a in C^alpha, 0 < alpha < 1, a >= a0 > 0
    SmoothDegenerate,    // (iii) a in C^ell, ell >= 2, a >= 0
    HolderDegenerate     // (iv) a in C^alpha, 0 < alpha < 2, a >= 0
  };
  Kind kind = Kind::LipschitzPositive;
  double alpha = 0.5;
  int ell = 2;
};

struct RegimeRecord {
  int regime = 1;                // 1..4
  std::string space;             // well-posedness pair
  bool sobolev = false;          // regime (i): any real s
  double s_sup = 0.0;            // admissible 1 <= s < s_sup (Gevrey regimes)
};

RegimeRecord regime_advisor(const CoefficientClass& c);

struct EnergyAudit {
  double C_emp = 0.0;            // sup_t LHS(t) / RHS
  double lhs_sup = 0.0;
  double rhs = 0.0;
  bool solver_bug = false;       // RHS = 0 with nonzero LHS
};

/// est_tar1_inhom-style ratio: LHS(t) = ||u||^2_{H^{s+nu/2}} + ||u_t||^2_{H^s},
/// RHS from data and source norms. Requires the Lipschitz-positive regime
/// (exact smooth coefficient).
EnergyAudit energy_inequality_audit(const ScenarioProblem& p);

std::vector<double> geometric_eps_net(double base, int exp_start, int exp_stop);
std::vector<double> logspace(double lo, double hi, int n);

}  // namespace vwl
