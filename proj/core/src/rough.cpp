#include "vwl/rough.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vwl/quadrature.hpp"

namespace vwl {
namespace {

constexpr double kPi = std::numbers::pi;

// --- small dense polynomials, ascending coefficients ---
using Poly = std::vector<double>;

Poly poly_derivative(const Poly& p) {
  if (p.size() <= 1) return {0.0};
  Poly d(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = i * p[i];
  return d;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

Poly poly_add(Poly a, const Poly& b) {
  if (b.size() > a.size()) a.resize(b.size(), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  return a;
}

Poly poly_scale(Poly a, double s) {
  for (double& c : a) c *= s;
  return a;
}

double poly_eval(const Poly& p, double t) {
  double v = 0.0;
  for (std::size_t i = p.size(); i-- > 0;) v = v * t + p[i];
  return v;
}

// psi_bump^{(k)}(t) = N exp(-1/u) P_k(t) / u^{2k},  u = 1 - t^2.
// Recursion: P_{k+1} = P_k' u^2 + 2 m t P_k u - 2 t P_k, m = 2k.
const Poly& bump_numerator(int k) {
  thread_local std::vector<Poly> cache = {Poly{1.0}};
  const Poly u = {1.0, 0.0, -1.0};
  const Poly tt = {0.0, 1.0};
  while (static_cast<int>(cache.size()) <= k) {
    const int m = 2 * (static_cast<int>(cache.size()) - 1);
    const Poly& p = cache.back();
    Poly next = poly_mul(poly_derivative(p), poly_mul(u, u));
    next = poly_add(next, poly_scale(poly_mul(tt, poly_mul(p, u)), 2.0 * m));
    next = poly_add(next, poly_scale(poly_mul(tt, p), -2.0));
    cache.push_back(std::move(next));
  }
  return cache[k];
}

double bump_raw(double t, int k) {
  const double u = 1.0 - t * t;
  if (u <= 0.0) return 0.0;
  return std::exp(-1.0 / u) * poly_eval(bump_numerator(k), t) /
         std::pow(u, 2 * k);
}

double falling_factorial(double q, int k) {
  double r = 1.0;
  for (int j = 0; j < k; ++j) r *= (q - j);
  return r;
}

}  // namespace

// ---------------------------------------------------------------- SmoothPart

double SmoothPart::value(double t) const {
  switch (family) {
    case SmoothFamily::Constant:
      return c0;
    case SmoothFamily::Affine:
      return c0 + c1 * t;
    case SmoothFamily::Sinusoid:
      return c0 + c1 * std::sin(kappa * t);
    case SmoothFamily::Power:
      return c0 + c1 * std::pow(std::max(t, 0.0), q);
    case SmoothFamily::Weierstrass: {
      double s = 0.0;
      for (int j = 0; j <= weierstrass_terms; ++j) {
        s += std::pow(2.0, -alpha * j) * std::cos(std::ldexp(1.0, j) * t);
      }
      return c0 + c1 * s;
    }
  }
  return c0;
}

double SmoothPart::derivative(double t, int k) const {
  if (k == 0) return value(t);
  switch (family) {
    case SmoothFamily::Constant:
      return 0.0;
    case SmoothFamily::Affine:
      return k == 1 ? c1 : 0.0;
    case SmoothFamily::Sinusoid:
      return c1 * std::pow(kappa, k) * std::sin(kappa * t + k * kPi / 2.0);
    case SmoothFamily::Power:
      if (q < k && t == 0.0) {
        throw ValidationError("power smooth part: derivative order exceeds q at t=0");
      }
      return c1 * falling_factorial(q, k) * std::pow(std::max(t, 0.0), q - k);
    case SmoothFamily::Weierstrass: {
      double s = 0.0;
      for (int j = 0; j <= weierstrass_terms; ++j) {
        const double w = std::ldexp(1.0, j);
        s += std::pow(2.0, -alpha * j) * std::pow(w, k) *
             std::cos(w * t + k * kPi / 2.0);
      }
      return c1 * s;
    }
  }
  return 0.0;
}

double SmoothPart::max_frequency() const {
  switch (family) {
    case SmoothFamily::Sinusoid:
      return c1 != 0.0 ? std::abs(kappa) : 0.0;
    case SmoothFamily::Weierstrass:
      return c1 != 0.0 ? std::ldexp(1.0, weierstrass_terms) : 0.0;
    default:
      return 0.0;
  }
}

// ----------------------------------------------------------- RoughCoefficient

int RoughCoefficient::max_atom_order() const {
  int m = 0;
  for (const auto& a : atoms) m = std::max(m, a.order);
  return m;
}

void RoughCoefficient::validate() const {
  if (horizon <= 0.0) throw ValidationError("coefficient horizon must be positive");
  for (const auto& j : jumps) {
    if (j.location < 0.0 || j.location > horizon) {
      throw ValidationError("jump location outside [0, T]");
    }
  }
  for (const auto& a : atoms) {
    if (a.location < 0.0 || a.location > horizon) {
      throw ValidationError("atom location outside [0, T]");
    }
    if (a.order < 0) throw ValidationError("atom order must be >= 0");
  }
  if (claimed_floor > 0.0) {
    const int n = 512;
    for (int i = 0; i <= n; ++i) {
      const double t = horizon * i / n;
      if (smooth.value(t) < claimed_floor - 1e-12) {
        throw ValidationError("smooth part drops below the claimed floor a0");
      }
    }
    for (const auto& j : jumps) {
      if (j.height < 0.0) {
        throw ValidationError("positivity: negative jump height with claimed floor > 0");
      }
    }
    for (const auto& a : atoms) {
      if (a.mass < 0.0 || a.order != 0) {
        throw ValidationError(
            "positivity: atoms must be nonnegative measures (mass >= 0, order 0)");
      }
    }
  }
  const int needed = max_atom_order() + (jumps.empty() ? 0 : 1);
  if (!atoms.empty() || !jumps.empty()) {
    if (declared_order < needed) {
      throw ValidationError("declared distribution order L is below the structural order");
    }
  }
}

// -------------------------------------------------------------------- Mollifier

MollifierShape parse_mollifier_shape(const std::string& id) {
  if (id == "bump") return MollifierShape::Bump;
  if (id == "cosine2" || id == "cosine^2" || id == "cos2") return MollifierShape::CosineSq;
  if (id == "triangle") return MollifierShape::Triangle;
  throw ConfigError("unknown mollifier shape '" + id +
                    "' (expected bump, cosine2 or triangle)");
}

int Mollifier::max_derivative_order() const {
  switch (shape_) {
    case MollifierShape::Bump:
      return 1000;
    case MollifierShape::CosineSq:
      return 2;
    case MollifierShape::Triangle:
      return 1;
  }
  return 0;
}

double Mollifier::density(double t) const { return derivative(t, 0); }

double Mollifier::derivative(double t, int k) const {
  if (k > max_derivative_order()) {
    throw ValidationError("mollifier shape does not admit the requested derivative order");
  }
  if (t <= -1.0 || t >= 1.0) return 0.0;
  switch (shape_) {
    case MollifierShape::Bump:
      return normalization_ * bump_raw(t, k);
    case MollifierShape::CosineSq:
      // cos^2(pi t / 2) = (1 + cos(pi t)) / 2
      if (k == 0) return 0.5 * (1.0 + std::cos(kPi * t));
      return 0.5 * std::pow(kPi, k) * std::cos(kPi * t + k * kPi / 2.0);
    case MollifierShape::Triangle:
      if (k == 0) return 1.0 - std::abs(t);
      return t < 0.0 ? 1.0 : -1.0;
  }
  return 0.0;
}

double Mollifier::cdf(double x) const {
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return 1.0;
  switch (shape_) {
    case MollifierShape::Bump:
      return normalization_ *
             integrate([](double t) { return bump_raw(t, 0); }, -1.0, x,
                       std::min(quad_tol_, 1e-12));
    case MollifierShape::CosineSq:
      return 0.5 * (x + 1.0) + std::sin(kPi * x) / (2.0 * kPi);
    case MollifierShape::Triangle:
      if (x < 0.0) return 0.5 * (1.0 + x) * (1.0 + x);
      return 1.0 - 0.5 * (1.0 - x) * (1.0 - x);
  }
  return 0.0;
}

double Mollifier::integral() const {
  return integrate([this](double t) { return density(t); }, -1.0, 1.0, quad_tol_);
}

Mollifier make_mollifier(MollifierShape shape, double tol) {
  if (tol <= 0.0) throw ConfigError("mollifier quadrature tolerance must be positive");
  Mollifier m;
  m.shape_ = shape;
  m.quad_tol_ = tol;
  if (shape == MollifierShape::Bump) {
    const double raw =
        integrate([](double t) { return bump_raw(t, 0); }, -1.0, 1.0, 1e-14);
    m.normalization_ = 1.0 / raw;
  }
  const double total = m.integral();
  if (std::abs(total - 1.0) > tol) {
    throw ConfigError("mollifier normalization failed the unit-integral check");
  }
  return m;
}

Mollifier make_mollifier(const std::string& shape_id, double tol) {
  return make_mollifier(parse_mollifier_shape(shape_id), tol);
}

// ----------------------------------------------------------------- ScaleSchedule

double schedule_omega(const ScaleSchedule& s, double eps) {
  if (eps <= 0.0 || eps > 1.0) {
    throw std::domain_error("schedule_omega: eps must lie in (0, 1]");
  }
  switch (s.kind) {
    case ScaleSchedule::Kind::Identity:
      return eps;
    case ScaleSchedule::Kind::Power:
      if (s.gamma <= 0.0) throw std::domain_error("power schedule needs gamma > 0");
      return std::pow(eps, s.gamma);
    case ScaleSchedule::Kind::Log:
      if (eps >= 1.0) {
        throw std::domain_error("log schedule requires eps < 1");
      }
      return std::pow(std::log(1.0 / eps), -1.0 / (s.order + 1));
  }
  return eps;
}

// ------------------------------------------------------------------- mollify

double SampledCoefficient::min_value() const {
  return *std::min_element(deriv[0].begin(), deriv[0].end());
}

double SampledCoefficient::max_value() const {
  return *std::max_element(deriv[0].begin(), deriv[0].end());
}

double SampledCoefficient::max_abs_derivative(int k) const {
  double m = 0.0;
  for (double v : deriv.at(k)) m = std::max(m, std::abs(v));
  return m;
}

double SampledCoefficient::value_at(double t) const {
  const double dt = grid.dt();
  const double x = (t - grid.t0) / dt;
  int i = static_cast<int>(std::floor(x));
  i = std::clamp(i, 0, grid.steps - 1);
  const double s = x - i;
  const auto& a = deriv[0];
  if (deriv.size() > 1) {
    const auto& d = deriv[1];
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    return h00 * a[i] + h10 * dt * d[i] + h01 * a[i + 1] + h11 * dt * d[i + 1];
  }
  return (1 - s) * a[i] + s * a[i + 1];
}

double SampledCoefficient::derivative_at(double t) const {
  if (deriv.size() < 2) {
    const double dt = grid.dt();
    int i = std::clamp(static_cast<int>((t - grid.t0) / dt), 0, grid.steps - 1);
    return (deriv[0][i + 1] - deriv[0][i]) / dt;
  }
  const double dt = grid.dt();
  const double x = (t - grid.t0) / dt;
  int i = std::clamp(static_cast<int>(std::floor(x)), 0, grid.steps - 1);
  const double s = x - i;
  const auto& d = deriv[1];
  return (1 - s) * d[i] + s * d[i + 1];
}

SampledCoefficient mollify(const RoughCoefficient& a, const Mollifier& psi,
                           double omega, const TimeGrid& grid, int k_max) {
  if (omega <= 0.0) throw std::domain_error("mollify: omega must be positive");
  if (omega < grid.dt()) {
    throw ResolutionError("mollify: grid step exceeds omega, psi_omega is unresolved");
  }
  if (k_max > psi.max_derivative_order()) {
    throw ValidationError("mollify: k_max exceeds the mollifier's differentiability");
  }
  for (const auto& atom : a.atoms) {
    if (atom.order + k_max > psi.max_derivative_order()) {
      throw ValidationError("mollify: atom order plus k_max exceeds mollifier smoothness");
    }
  }

  SampledCoefficient out;
  out.grid = grid;
  out.omega = omega;
  out.deriv.assign(k_max + 1, std::vector<double>(grid.size(), 0.0));

  const double T = a.horizon;
  const bool constant_smooth = a.smooth.is_constant();
  const bool triangle = psi.shape() == MollifierShape::Triangle;

  for (int i = 0; i < grid.size(); ++i) {
    const double t = grid.time(i);
    for (int k = 0; k <= k_max; ++k) {
      double v = 0.0;
      if (constant_smooth) {
        // c * psi_omega^{(k)} integrates to c for k = 0 and to 0 otherwise.
        if (k == 0) v += a.smooth.value(0.0);
      } else {
        // The smooth part is extended by its boundary values outside [0, T].
        std::vector<double> breaks;
        const double b0 = t / omega;          // argument crosses 0
        const double b1 = (t - T) / omega;    // argument crosses T
        if (b0 > -1.0 && b0 < 1.0) breaks.push_back(b0);
        if (b1 > -1.0 && b1 < 1.0) breaks.push_back(b1);
        if (triangle) breaks.push_back(0.0);
        const auto integrand = [&](double tau) {
          const double arg = std::clamp(t - omega * tau, 0.0, T);
          return a.smooth.value(arg) * psi.derivative(tau, k);
        };
        v += std::pow(omega, -k) *
             integrate_split(integrand, -1.0, 1.0, breaks, psi.quad_tol());
      }
      for (const auto& j : a.jumps) {
        const double x = (t - j.location) / omega;
        if (k == 0) {
          v += j.height * psi.cdf(x);
        } else {
          v += j.height * std::pow(omega, -k) * psi.derivative(x, k - 1);
        }
      }
      for (const auto& atom : a.atoms) {
        const double x = (t - atom.location) / omega;
        v += atom.mass * std::pow(omega, -1 - atom.order - k) *
             psi.derivative(x, atom.order + k);
      }
      out.deriv[k][i] = v;
    }
  }
  return out;
}

// -------------------------------------------------------- fit_derivative_growth

std::vector<DerivativeGrowthFit> fit_derivative_growth(
    const RoughCoefficient& a, const Mollifier& psi, const ScaleSchedule& s,
    std::span<const double> eps_net, int k_max) {
  if (eps_net.size() < 4) {
    throw ValidationError("fit_derivative_growth: need at least 4 eps points");
  }
  const auto [lo, hi] = std::minmax_element(eps_net.begin(), eps_net.end());
  if (*hi / *lo < 99.0) {
    throw ValidationError("fit_derivative_growth: eps net must span >= 2 decades");
  }

  std::vector<std::vector<double>> sup(k_max + 1);
  std::vector<double> log_inv_omega;
  for (double eps : eps_net) {
    const double omega = schedule_omega(s, eps);
    // Omega-adapted grid so the sup over t resolves psi_omega's peak.
    TimeGrid grid;
    grid.t0 = 0.0;
    grid.t1 = a.horizon;
    grid.steps = std::max(512, static_cast<int>(std::ceil(a.horizon / (omega / 16.0))));
    const SampledCoefficient c = mollify(a, psi, omega, grid, k_max);
    log_inv_omega.push_back(std::log(1.0 / omega));
    for (int k = 0; k <= k_max; ++k) {
      sup[k].push_back(c.max_abs_derivative(k));
    }
  }

  std::vector<DerivativeGrowthFit> fits;
  for (int k = 0; k <= k_max; ++k) {
    DerivativeGrowthFit f;
    f.order = k;
    const double peak = *std::max_element(sup[k].begin(), sup[k].end());
    if (peak < 1e-14) {
      f.defined = false;
      f.moderate = true;
      f.note = "identically bounded, slope undefined";
      fits.push_back(f);
      continue;
    }
    std::vector<double> y;
    for (double v : sup[k]) y.push_back(std::log(std::max(v, 1e-300)));
    const LineFit line = fit_line(log_inv_omega, y);
    f.slope = line.slope;
    f.intercept = line.intercept;
    f.r_squared = line.r_squared;
    const int L = a.declared_order;
    double c_env = 0.0;
    for (std::size_t i = 0; i < eps_net.size(); ++i) {
      const double omega = std::exp(-log_inv_omega[i]);
      c_env = std::max(c_env, sup[k][i] * std::pow(omega, L + k));
    }
    f.envelope_constant = c_env;
    f.moderate = f.slope <= L + k + 0.1;
    fits.push_back(f);
  }
  return fits;
}

LowerBoundCheck lower_bound_check(const SampledCoefficient& c, double a0,
                                  double tol) {
  LowerBoundCheck r;
  r.min_value = c.min_value();
  r.holds = r.min_value >= a0 - tol;
  return r;
}

}  // namespace vwl
