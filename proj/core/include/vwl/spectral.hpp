#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "vwl/rough.hpp"

namespace vwl {

enum class SpectralFamily { Power, Table, HeisenbergLike };

/// Discrete stand-in for the spectral picture of a positive homogeneous
/// operator: strictly increasing mode frequencies pi_m (eigenvalues pi_m^2)
/// with positive Plancherel weights mu_m.
struct SpectralModel {
  SpectralFamily family = SpectralFamily::Power;
  int mode_count = 0;
  double nu = 2.0;  // homogeneous degree
  std::vector<double> pi;
  std::vector<double> mu;

  int size() const { return static_cast<int>(pi.size()); }
};

/// power:      pi_m = m^{nu/2}, mu_m = 1
/// table:      user-supplied (pi_m, mu_m) pairs
/// heisenberg: pi = sqrt(lambda (2m + n)) over a truncated lambda grid,
///             weights proportional to lambda^n * dlambda (a modeling
///             stand-in, not the true Plancherel measure)
struct SpectralParams {
  std::vector<std::pair<double, double>> table;  // (pi, mu)
  double lambda_max = 4.0;
  int lambda_points = 4;
  int heisenberg_n = 1;
};

SpectralModel build_model(SpectralFamily family, int mode_count, double nu,
                          const SpectralParams& params = {});

/// Complex per-mode coefficients of a field, one column of u_hat.
struct ModeField {
  std::vector<std::complex<double>> coeff;

  int size() const { return static_cast<int>(coeff.size()); }
};

/// ( sum_m mu_m (1 + pi_m^2)^{2s/nu} |u_m|^2 )^{1/2}
double sobolev_norm(const ModeField& u, const SpectralModel& model, double s);

struct GevreyOverflow : std::runtime_error {
  int mode;
  explicit GevreyOverflow(int m)
      : std::runtime_error("gevrey_norm: weight overflow at mode " +
                           std::to_string(m)),
        mode(m) {}
};

/// ( sum_m mu_m e^{+-2A pi_m^{1/s}} |u_m|^2 )^{1/2}. Exponents beyond the
/// cap (700 on the natural-log scale) raise GevreyOverflow naming the mode.
double gevrey_norm(const ModeField& u, const SpectralModel& model, double s,
                   double A, int sign);

/// sum_m mu_m * per_mode_sq[m]
double plancherel_assemble(std::span<const double> per_mode_sq,
                           const SpectralModel& model);

enum class GrowthVerdict { RoumieuType, BeurlingType, Unbounded, TriviallyBoth };

/// Upper-envelope fit of log|u_m| <= log C + eta * pi_m^{1/s}.
struct GrowthFit {
  double eta = 0.0;  // smallest envelope rate found (grid resolution 1e-3)
  double C = 0.0;
  std::vector<double> residuals;
  GrowthVerdict verdict = GrowthVerdict::RoumieuType;
};

GrowthFit ultradistribution_fit(const ModeField& u, const SpectralModel& model,
                                double s);

/// Named decay/growth families for initial data in mode space.
struct ModeFieldDescriptor {
  enum class Kind { Zero, Ones, ExpDecay, PolyDecay, GevreyGrowth, Explicit };
  Kind kind = Kind::Zero;
  double rate = 1.0;   // expdecay e^{-rate pi}; polydecay (1+pi^2)^{-rate}
  double eta = 0.0;    // gevrey e^{eta pi^{1/s}}
  double s = 1.0;
  std::vector<std::complex<double>> values;  // explicit
};

ModeField make_mode_field(const SpectralModel& model,
                          const ModeFieldDescriptor& d);

}  // namespace vwl
