#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vwl/fit.hpp"

namespace vwl {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Uniform time grid on [t0, t1] with `steps` intervals (steps+1 samples).
struct TimeGrid {
  double t0 = 0.0;
  double t1 = 1.0;
  int steps = 1000;

  double dt() const { return (t1 - t0) / steps; }
  int size() const { return steps + 1; }
  double time(int i) const { return t0 + i * dt(); }
  bool operator==(const TimeGrid&) const = default;
};

enum class SmoothFamily { Constant, Affine, Sinusoid, Power, Weierstrass };

/// Analytic descriptor of the smooth part of a propagation speed on [0, T].
///   constant     c0
///   affine       c0 + c1*t
///   sinusoid     c0 + c1*sin(kappa*t)
///   power        c0 + c1*t^q            (q >= 0)
///   weierstrass  c0 + c1 * sum_{j<=J} 2^{-alpha j} cos(2^j t)   (Holder C^alpha)
struct SmoothPart {
  SmoothFamily family = SmoothFamily::Constant;
  double c0 = 1.0;
  double c1 = 0.0;
  double kappa = 1.0;
  double q = 1.0;
  double alpha = 0.5;
  int weierstrass_terms = 16;

  double value(double t) const;
  /// Analytic k-th derivative (valid for smooth families; power needs q >= k
  /// at t = 0). Used only by classical references, never by mollification.
  double derivative(double t, int k) const;
  /// Highest angular frequency present, for integrator step ceilings.
  double max_frequency() const;
  bool is_constant() const { return family == SmoothFamily::Constant || c1 == 0.0; }
};

struct Jump {
  double location;
  double height;
};

struct DiracAtom {
  double location;
  double mass;
  int order = 0;
};

/// A compactly supported distribution of finite order on [0, T]:
/// smooth part + Heaviside jumps + Dirac atoms (and their derivatives).
struct RoughCoefficient {
  SmoothPart smooth;
  std::vector<Jump> jumps;
  std::vector<DiracAtom> atoms;
  double claimed_floor = 0.0;  // a0: asserted distributional lower bound
  double horizon = 1.0;        // T
  int declared_order = 0;      // L

  bool is_distributional() const { return !jumps.empty() || !atoms.empty(); }
  int max_atom_order() const;
  /// Throws ValidationError on any invariant violation.
  void validate() const;
};

enum class MollifierShape { Bump, CosineSq, Triangle };

MollifierShape parse_mollifier_shape(const std::string& id);

/// Friedrichs mollifier: nonnegative, supported in [-1, 1], unit integral.
class Mollifier {
 public:
  MollifierShape shape() const { return shape_; }
  double normalization() const { return normalization_; }
  double quad_tol() const { return quad_tol_; }
  /// Highest derivative order available for this shape.
  int max_derivative_order() const;

  double density(double t) const;              // psi(t)
  double derivative(double t, int k) const;    // psi^{(k)}(t)
  double cdf(double x) const;                  // int_{-1}^{x} psi
  /// Unit-integral check under the module's own quadrature.
  double integral() const;

 private:
  friend Mollifier make_mollifier(MollifierShape, double);
  MollifierShape shape_ = MollifierShape::Bump;
  double normalization_ = 1.0;
  double quad_tol_ = 1e-10;
};

Mollifier make_mollifier(MollifierShape shape, double tol);
Mollifier make_mollifier(const std::string& shape_id, double tol);

/// omega(eps) scaling law for the mollifier width.
struct ScaleSchedule {
  enum class Kind { Identity, Power, Log };
  Kind kind = Kind::Identity;
  double gamma = 1.0;  // power: omega = eps^gamma
  int order = 1;       // log: omega = (log(1/eps))^{-1/(order+1)}
};

double schedule_omega(const ScaleSchedule& s, double eps);

/// Grid samples of a_eps = a * psi_omega together with exact-convolution
/// derivative samples d^k a_eps = a * psi_omega^{(k)}.
struct SampledCoefficient {
  TimeGrid grid;
  double omega = 0.0;
  std::vector<std::vector<double>> deriv;  // deriv[k][i], k = 0..k_max

  const std::vector<double>& values() const { return deriv[0]; }
  double min_value() const;
  double max_value() const;
  double max_abs_derivative(int k) const;
  /// Cubic Hermite evaluation of a_eps between grid nodes (uses deriv[1]
  /// when present, otherwise linear interpolation).
  double value_at(double t) const;
  double derivative_at(double t) const;
};

SampledCoefficient mollify(const RoughCoefficient& a, const Mollifier& psi,
                           double omega, const TimeGrid& grid, int k_max);

/// Structure-theorem scaling: least-squares fit of log sup|d^k a_eps|
/// against log(1/omega(eps)), one fit per derivative order.
struct DerivativeGrowthFit {
  int order = 0;
  bool defined = true;  // false: values identically bounded, slope undefined
  double slope = 0.0;   // estimate of L + k
  double intercept = 0.0;
  double r_squared = 1.0;
  double envelope_constant = 0.0;  // c with sup <= c * omega^{-L-k} over the net
  bool moderate = false;
  std::string note;
};

std::vector<DerivativeGrowthFit> fit_derivative_growth(
    const RoughCoefficient& a, const Mollifier& psi, const ScaleSchedule& s,
    std::span<const double> eps_net, int k_max);

struct LowerBoundCheck {
  bool holds = false;
  double min_value = 0.0;  // tilde a0
};

LowerBoundCheck lower_bound_check(const SampledCoefficient& c, double a0,
                                  double tol = 1e-8);

}  // namespace vwl
