#include "vwl/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace vwl {

SpectralModel build_model(SpectralFamily family, int mode_count, double nu,
                          const SpectralParams& params) {
  if (mode_count < 1) throw ValidationError("build_model: need at least one mode");
  if (nu <= 0.0) throw ValidationError("build_model: homogeneous degree nu must be positive");
  SpectralModel m;
  m.family = family;
  m.nu = nu;
  switch (family) {
    case SpectralFamily::Power:
      for (int i = 1; i <= mode_count; ++i) {
        m.pi.push_back(std::pow(static_cast<double>(i), nu / 2.0));
        m.mu.push_back(1.0);
      }
      break;
    case SpectralFamily::Table:
      for (const auto& [pi, mu] : params.table) {
        m.pi.push_back(pi);
        m.mu.push_back(mu);
      }
      break;
    case SpectralFamily::HeisenbergLike: {
      // pi = sqrt(lambda (2m + n)) over a truncated lambda grid, weights
      // proportional to lambda^n * dlambda; sorted and deduplicated.
      const int n = params.heisenberg_n;
      const double dl = params.lambda_max / params.lambda_points;
      std::vector<std::pair<double, double>> entries;
      for (int il = 1; il <= params.lambda_points; ++il) {
        const double lambda = il * dl;
        for (int im = 0; im < mode_count; ++im) {
          entries.emplace_back(std::sqrt(lambda * (2.0 * im + n)),
                               std::pow(lambda, n) * dl);
        }
      }
      std::sort(entries.begin(), entries.end());
      for (const auto& [pi, mu] : entries) {
        if (pi <= 0.0) continue;
        if (!m.pi.empty() && pi <= m.pi.back() + 1e-12) {
          m.mu.back() += mu;
        } else {
          m.pi.push_back(pi);
          m.mu.push_back(mu);
        }
      }
      break;
    }
  }
  m.mode_count = m.size();
  for (int i = 0; i < m.size(); ++i) {
    if (m.pi[i] <= 0.0) throw ValidationError("build_model: frequencies must be positive");
    if (m.mu[i] <= 0.0) throw ValidationError("build_model: weights must be positive");
    if (i > 0 && m.pi[i] <= m.pi[i - 1]) {
      throw ValidationError("build_model: frequencies must be strictly increasing");
    }
  }
  return m;
}

namespace {
void check_match(const ModeField& u, const SpectralModel& model) {
  if (u.size() != model.size()) {
    throw ValidationError("mode field length does not match the spectral model");
  }
}
}  // namespace

double sobolev_norm(const ModeField& u, const SpectralModel& model, double s) {
  check_match(u, model);
  double sum = 0.0;
  for (int m = 0; m < model.size(); ++m) {
    const double w = std::pow(1.0 + model.pi[m] * model.pi[m], 2.0 * s / model.nu);
    sum += model.mu[m] * w * std::norm(u.coeff[m]);
  }
  return std::sqrt(sum);
}

double gevrey_norm(const ModeField& u, const SpectralModel& model, double s,
                   double A, int sign) {
  check_match(u, model);
  if (s < 1.0) throw ValidationError("gevrey_norm: s must be >= 1");
  constexpr double kExpCap = 700.0;
  double sum = 0.0;
  for (int m = 0; m < model.size(); ++m) {
    const double expo = 2.0 * (sign >= 0 ? A : -A) * std::pow(model.pi[m], 1.0 / s);
    if (expo > kExpCap) throw GevreyOverflow(m);
    sum += model.mu[m] * std::exp(expo) * std::norm(u.coeff[m]);
  }
  return std::sqrt(sum);
}

double plancherel_assemble(std::span<const double> per_mode_sq,
                           const SpectralModel& model) {
  if (static_cast<int>(per_mode_sq.size()) != model.size()) {
    throw ValidationError("plancherel_assemble: length mismatch");
  }
  double sum = 0.0;
  for (int m = 0; m < model.size(); ++m) {
    if (per_mode_sq[m] < 0.0) {
      throw ValidationError("plancherel_assemble: negative entry");
    }
    sum += model.mu[m] * per_mode_sq[m];
  }
  return sum;
}

GrowthFit ultradistribution_fit(const ModeField& u, const SpectralModel& model,
                                double s) {
  check_match(u, model);
  if (s < 1.0) throw ValidationError("ultradistribution_fit: s must be >= 1");
  if (model.size() < 8) {
    throw ValidationError("ultradistribution_fit: need at least 8 modes");
  }

  std::vector<double> x, y;
  for (int m = 0; m < model.size(); ++m) {
    const double mag = std::abs(u.coeff[m]);
    if (mag > 0.0) {
      x.push_back(std::pow(model.pi[m], 1.0 / s));
      y.push_back(std::log(mag));
    }
  }
  GrowthFit fit;
  if (x.empty()) {
    fit.verdict = GrowthVerdict::TriviallyBoth;
    return fit;
  }
  if (x.size() < 4) {
    fit.verdict = GrowthVerdict::RoumieuType;
    fit.C = std::exp(*std::max_element(y.begin(), y.end()));
    return fit;
  }

  const LineFit all = fit_line(x, y);
  const std::size_t half = x.size() / 2;
  const LineFit lo = fit_line(std::span(x).first(half), std::span(y).first(half));
  const LineFit hi = fit_line(std::span(x).subspan(half), std::span(y).subspan(half));

  // Envelope rate, quantised to the 1e-3 grid. The local slope on the upper
  // modes decides the type: decaying local slope means the growth is beaten
  // by every exponential (Roumieu); matching slopes mean a genuine rate
  // (Beurling); accelerating slope is flagged as unbounded on this range.
  fit.eta = std::round(std::max(0.0, all.slope) * 1000.0) / 1000.0;
  if (all.slope <= 1e-6) {
    fit.verdict = GrowthVerdict::RoumieuType;
    fit.eta = 0.0;
  } else if (hi.slope <= 0.5 * lo.slope) {
    fit.verdict = GrowthVerdict::RoumieuType;
  } else if (hi.slope >= 1.5 * std::max(lo.slope, 1e-12)) {
    fit.verdict = GrowthVerdict::Unbounded;
    fit.eta = std::round(std::max(0.0, hi.slope) * 1000.0) / 1000.0;
  } else {
    fit.verdict = GrowthVerdict::BeurlingType;
  }

  double log_c = -HUGE_VAL;
  for (std::size_t i = 0; i < x.size(); ++i) {
    log_c = std::max(log_c, y[i] - fit.eta * x[i]);
  }
  fit.C = std::exp(log_c);
  for (std::size_t i = 0; i < x.size(); ++i) {
    fit.residuals.push_back(y[i] - (log_c + fit.eta * x[i]));
  }
  return fit;
}

ModeField make_mode_field(const SpectralModel& model,
                          const ModeFieldDescriptor& d) {
  ModeField u;
  u.coeff.resize(model.size());
  switch (d.kind) {
    case ModeFieldDescriptor::Kind::Zero:
      break;
    case ModeFieldDescriptor::Kind::Ones:
      std::fill(u.coeff.begin(), u.coeff.end(), 1.0);
      break;
    case ModeFieldDescriptor::Kind::ExpDecay:
      for (int m = 0; m < model.size(); ++m) {
        u.coeff[m] = std::exp(-d.rate * model.pi[m]);
      }
      break;
    case ModeFieldDescriptor::Kind::PolyDecay:
      for (int m = 0; m < model.size(); ++m) {
        u.coeff[m] = std::pow(1.0 + model.pi[m] * model.pi[m], -d.rate);
      }
      break;
    case ModeFieldDescriptor::Kind::GevreyGrowth:
      for (int m = 0; m < model.size(); ++m) {
        u.coeff[m] = std::exp(d.eta * std::pow(model.pi[m], 1.0 / d.s));
      }
      break;
    case ModeFieldDescriptor::Kind::Explicit:
      if (static_cast<int>(d.values.size()) != model.size()) {
        throw ValidationError("explicit mode field length mismatch");
      }
      u.coeff = d.values;
      break;
  }
  return u;
}

}  // namespace vwl
