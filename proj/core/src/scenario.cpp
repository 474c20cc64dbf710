#include "vwl/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace vwl {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

/// Raw parsed document with consumption tracking so leftovers can be
/// reported as unknown keys.
class Doc {
 public:
  std::vector<std::string> errors;

  void parse(const std::string& text) {
    std::stringstream ss(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(ss, line)) {
      ++lineno;
      const auto hash = line.find_first_of("#;");
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') {
          errors.push_back("line " + std::to_string(lineno) +
                           ": malformed section header '" + line + "'");
          continue;
        }
        section = lower(trim(line.substr(1, line.size() - 2)));
        sections_.insert(section);
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        errors.push_back("line " + std::to_string(lineno) + ": expected key = value, got '" +
                         line + "'");
        continue;
      }
      if (section.empty()) {
        errors.push_back("line " + std::to_string(lineno) + ": key outside any section");
        continue;
      }
      const std::string key = lower(trim(line.substr(0, eq)));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty()) {
        errors.push_back("line " + std::to_string(lineno) + ": empty key");
        continue;
      }
      const std::string full = section + "." + key;
      if (entries_.count(full)) {
        errors.push_back("duplicate key '" + full + "'");
      }
      entries_[full] = value;
    }
  }

  bool has_section(const std::string& s) const { return sections_.count(s) > 0; }

  std::optional<std::string> raw(const std::string& section, const std::string& key) {
    const std::string full = section + "." + key;
    auto it = entries_.find(full);
    if (it == entries_.end()) return std::nullopt;
    consumed_.insert(full);
    return it->second;
  }

  std::string str(const std::string& sec, const std::string& key,
                  const std::string& def) {
    auto v = raw(sec, key);
    return v ? *v : def;
  }

  double num(const std::string& sec, const std::string& key, double def) {
    auto v = raw(sec, key);
    if (!v) return def;
    try {
      std::size_t pos = 0;
      const double d = std::stod(*v, &pos);
      if (pos != v->size()) throw std::invalid_argument("");
      return d;
    } catch (...) {
      errors.push_back("'" + sec + "." + key + "': not a number: '" + *v + "'");
      return def;
    }
  }

  long integer(const std::string& sec, const std::string& key, long def) {
    const double d = num(sec, key, static_cast<double>(def));
    if (d != std::floor(d)) {
      errors.push_back("'" + sec + "." + key + "': expected an integer");
      return def;
    }
    return static_cast<long>(d);
  }

  bool boolean(const std::string& sec, const std::string& key, bool def) {
    auto v = raw(sec, key);
    if (!v) return def;
    const std::string s = lower(*v);
    if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
    if (s == "false" || s == "no" || s == "0" || s == "off") return false;
    errors.push_back("'" + sec + "." + key + "': not a boolean: '" + *v + "'");
    return def;
  }

  std::vector<double> numbers(const std::string& sec, const std::string& key) {
    auto v = raw(sec, key);
    std::vector<double> out;
    if (!v || v->empty()) return out;
    for (const auto& tok : split(*v, ',')) {
      try {
        out.push_back(std::stod(tok));
      } catch (...) {
        errors.push_back("'" + sec + "." + key + "': not a number: '" + tok + "'");
      }
    }
    return out;
  }

  void report_unknown(const std::set<std::string>& known_sections) {
    for (const auto& s : sections_) {
      if (!known_sections.count(s)) {
        errors.push_back("unknown section [" + s + "]");
      }
    }
    for (const auto& [full, _] : entries_) {
      const std::string sec = full.substr(0, full.find('.'));
      if (known_sections.count(sec) && !consumed_.count(full)) {
        errors.push_back("unknown key '" + full + "'");
      }
    }
  }

  std::string canonical() const {
    std::string out;
    for (const auto& [full, value] : entries_) {  // std::map: already sorted
      if (full == "scenario.jobs") continue;  // parallelism never changes results
      out += full + "=" + value + "\n";
    }
    return out;
  }

 private:
  std::map<std::string, std::string> entries_;
  std::set<std::string> sections_;
  std::set<std::string> consumed_;
};

SmoothFamily parse_family(const std::string& id, Doc& doc, const std::string& where) {
  const std::string s = lower(id);
  if (s == "constant") return SmoothFamily::Constant;
  if (s == "affine") return SmoothFamily::Affine;
  if (s == "sinusoid") return SmoothFamily::Sinusoid;
  if (s == "power") return SmoothFamily::Power;
  if (s == "weierstrass") return SmoothFamily::Weierstrass;
  doc.errors.push_back(where + ": unknown smooth family '" + id + "'");
  return SmoothFamily::Constant;
}

SmoothPart parse_smooth(Doc& doc, const std::string& sec) {
  SmoothPart sp;
  sp.family = parse_family(doc.str(sec, "family", "constant"), doc, "[" + sec + "]");
  sp.c0 = doc.num(sec, "c0", sec == "source" ? 0.0 : 1.0);
  sp.c1 = doc.num(sec, "c1", 0.0);
  sp.kappa = doc.num(sec, "kappa", 1.0);
  sp.q = doc.num(sec, "q", 1.0);
  sp.alpha = doc.num(sec, "alpha", 0.5);
  sp.weierstrass_terms = static_cast<int>(doc.integer(sec, "terms", 16));
  if (sp.family == SmoothFamily::Weierstrass &&
      (sp.alpha <= 0.0 || sp.alpha >= 1.0)) {
    doc.errors.push_back("[" + sec + "]: weierstrass exponent needs 0 < alpha < 1");
  }
  if (sp.family == SmoothFamily::Power && sp.q < 0.0) {
    doc.errors.push_back("[" + sec + "]: power exponent must be nonnegative");
  }
  if (sp.family == SmoothFamily::Weierstrass && sp.weierstrass_terms < 1) {
    doc.errors.push_back("[" + sec + "]: weierstrass needs at least one term");
  }
  return sp;
}

ModeFieldDescriptor parse_descriptor(Doc& doc, const std::string& sec,
                                     const std::string& key,
                                     const std::string& def) {
  const std::string raw = doc.str(sec, key, def);
  const auto parts = split(raw, ':');
  ModeFieldDescriptor d;
  const std::string kind = lower(parts[0]);
  const auto want = [&](std::size_t n) {
    if (parts.size() != n) {
      doc.errors.push_back("'" + sec + "." + key + "': '" + kind + "' takes " +
                           std::to_string(n - 1) + " parameter(s)");
      return false;
    }
    return true;
  };
  try {
    if (kind == "zero") {
      want(1);
    } else if (kind == "ones") {
      d.kind = ModeFieldDescriptor::Kind::Ones;
      want(1);
    } else if (kind == "expdecay") {
      d.kind = ModeFieldDescriptor::Kind::ExpDecay;
      if (want(2)) d.rate = std::stod(parts[1]);
    } else if (kind == "polydecay") {
      d.kind = ModeFieldDescriptor::Kind::PolyDecay;
      if (want(2)) d.rate = std::stod(parts[1]);
    } else if (kind == "gevrey") {
      d.kind = ModeFieldDescriptor::Kind::GevreyGrowth;
      if (want(3)) {
        d.eta = std::stod(parts[1]);
        d.s = std::stod(parts[2]);
        if (d.s < 1.0) {
          doc.errors.push_back("'" + sec + "." + key + "': gevrey index must be >= 1");
        }
      }
    } else if (kind == "explicit") {
      d.kind = ModeFieldDescriptor::Kind::Explicit;
      if (want(2)) {
        for (const auto& tok : split(parts[1], ',')) {
          d.values.push_back(std::stod(tok));
        }
      }
    } else {
      doc.errors.push_back("'" + sec + "." + key + "': unknown data kind '" + kind + "'");
    }
  } catch (...) {
    doc.errors.push_back("'" + sec + "." + key + "': malformed parameter in '" + raw + "'");
  }
  return d;
}

}  // namespace

std::string experiment_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Moderateness: return "moderateness";
    case ExperimentKind::GevreyModerateness: return "gevrey_moderateness";
    case ExperimentKind::Consistency: return "consistency";
    case ExperimentKind::Uniqueness: return "uniqueness";
    case ExperimentKind::GevreyScan: return "gevrey_scan";
    case ExperimentKind::EnergyAudit: return "energy_audit";
    case ExperimentKind::Coefficient: return "coefficient";
  }
  return "unknown";
}

Scenario parse_scenario(const std::string& text) {
  Doc doc;
  doc.parse(text);
  Scenario sc;
  sc.canonical = doc.canonical();

  // [scenario]
  sc.name = doc.str("scenario", "name", "scenario");
  {
    const std::string ex = lower(doc.str("scenario", "experiment", "moderateness"));
    if (ex == "moderateness") sc.experiment = ExperimentKind::Moderateness;
    else if (ex == "gevrey_moderateness") sc.experiment = ExperimentKind::GevreyModerateness;
    else if (ex == "consistency") sc.experiment = ExperimentKind::Consistency;
    else if (ex == "uniqueness") sc.experiment = ExperimentKind::Uniqueness;
    else if (ex == "gevrey_scan") sc.experiment = ExperimentKind::GevreyScan;
    else if (ex == "energy_audit") sc.experiment = ExperimentKind::EnergyAudit;
    else if (ex == "coefficient") sc.experiment = ExperimentKind::Coefficient;
    else doc.errors.push_back("'scenario.experiment': unknown experiment '" + ex + "'");
  }
  sc.problem.s = doc.num("scenario", "s", 0.0);
  sc.problem.jobs = static_cast<int>(doc.integer("scenario", "jobs", 1));
  if (sc.problem.jobs < 1) doc.errors.push_back("'scenario.jobs': must be >= 1");

  // [coefficient]
  sc.problem.a.smooth = parse_smooth(doc, "coefficient");
  sc.problem.a.claimed_floor = doc.num("coefficient", "floor", 0.0);
  sc.problem.a.horizon = doc.num("coefficient", "horizon", 1.0);
  sc.problem.a.declared_order = static_cast<int>(doc.integer("coefficient", "order", 0));
  sc.coeff_k_max = static_cast<int>(doc.integer("coefficient", "k_max", 2));
  if (auto v = doc.raw("coefficient", "jumps")) {
    for (const auto& item : split(*v, ',')) {
      const auto f = split(item, ':');
      if (f.size() != 2) {
        doc.errors.push_back("'coefficient.jumps': expected location:height, got '" + item + "'");
        continue;
      }
      try {
        sc.problem.a.jumps.push_back({std::stod(f[0]), std::stod(f[1])});
      } catch (...) {
        doc.errors.push_back("'coefficient.jumps': malformed entry '" + item + "'");
      }
    }
  }
  if (auto v = doc.raw("coefficient", "atoms")) {
    for (const auto& item : split(*v, ',')) {
      const auto f = split(item, ':');
      if (f.size() < 2 || f.size() > 3) {
        doc.errors.push_back(
            "'coefficient.atoms': expected location:mass[:order], got '" + item + "'");
        continue;
      }
      try {
        DiracAtom atom{std::stod(f[0]), std::stod(f[1]),
                       f.size() == 3 ? std::stoi(f[2]) : 0};
        sc.problem.a.atoms.push_back(atom);
      } catch (...) {
        doc.errors.push_back("'coefficient.atoms': malformed entry '" + item + "'");
      }
    }
  }

  // [mollifier]
  sc.quad_tol = doc.num("mollifier", "quad_tol", 1e-10);
  for (const auto& [key, target] :
       {std::pair<std::string, MollifierShape*>{"shape", &sc.mollifier},
        {"shape2", &sc.mollifier_alt}}) {
    const std::string def = key == "shape" ? "bump" : "cosine2";
    try {
      *target = parse_mollifier_shape(doc.str("mollifier", key, def));
    } catch (const std::exception& e) {
      doc.errors.push_back(std::string("'mollifier.") + key + "': " + e.what());
    }
  }

  // [schedule]
  {
    const std::string kind = lower(doc.str("schedule", "kind", "identity"));
    if (kind == "identity") sc.schedule.kind = ScaleSchedule::Kind::Identity;
    else if (kind == "power") sc.schedule.kind = ScaleSchedule::Kind::Power;
    else if (kind == "log") sc.schedule.kind = ScaleSchedule::Kind::Log;
    else doc.errors.push_back("'schedule.kind': unknown kind '" + kind + "'");
    sc.schedule.gamma = doc.num("schedule", "gamma", 1.0);
    sc.schedule.order = static_cast<int>(
        doc.integer("schedule", "order", sc.problem.a.declared_order));
    if (sc.schedule.kind == ScaleSchedule::Kind::Power && sc.schedule.gamma <= 0.0) {
      doc.errors.push_back("'schedule.gamma': must be positive");
    }
    if (sc.schedule.kind == ScaleSchedule::Kind::Log && sc.schedule.order < 0) {
      doc.errors.push_back("'schedule.order': must be >= 0");
    }
  }

  // [net]
  if (auto v = doc.raw("net", "explicit")) {
    for (const auto& tok : split(*v, ',')) {
      try {
        sc.eps_net.push_back(std::stod(tok));
      } catch (...) {
        doc.errors.push_back("'net.explicit': not a number: '" + tok + "'");
      }
    }
  } else {
    const double base = doc.num("net", "base", 2.0);
    const long from = doc.integer("net", "from", 2);
    const long to = doc.integer("net", "to", 10);
    if (base <= 1.0) {
      doc.errors.push_back("'net.base': must exceed 1");
    } else if (to < from) {
      doc.errors.push_back("'net.to': must be >= net.from");
    } else {
      for (long e = from; e <= to; ++e) sc.eps_net.push_back(std::pow(base, -double(e)));
    }
  }
  for (std::size_t i = 0; i < sc.eps_net.size(); ++i) {
    if (sc.eps_net[i] <= 0.0 || sc.eps_net[i] > 1.0) {
      doc.errors.push_back("'net': eps values must lie in (0, 1]");
      break;
    }
    if (i > 0 && sc.eps_net[i] >= sc.eps_net[i - 1]) {
      doc.errors.push_back("'net': eps values must be strictly decreasing");
      break;
    }
  }

  // [spectral]
  {
    const std::string fam = lower(doc.str("spectral", "family", "power"));
    SpectralFamily family = SpectralFamily::Power;
    if (fam == "power") family = SpectralFamily::Power;
    else if (fam == "table") family = SpectralFamily::Table;
    else if (fam == "heisenberg") family = SpectralFamily::HeisenbergLike;
    else doc.errors.push_back("'spectral.family': unknown family '" + fam + "'");
    const int modes = static_cast<int>(doc.integer("spectral", "modes", 16));
    const double nu = doc.num("spectral", "nu", 2.0);
    SpectralParams params;
    params.lambda_max = doc.num("spectral", "lambda_max", 4.0);
    params.lambda_points = static_cast<int>(doc.integer("spectral", "lambda_points", 4));
    params.heisenberg_n = static_cast<int>(doc.integer("spectral", "n", 1));
    if (auto v = doc.raw("spectral", "table")) {
      for (const auto& item : split(*v, ',')) {
        const auto f = split(item, ':');
        if (f.size() != 2) {
          doc.errors.push_back("'spectral.table': expected pi:mu, got '" + item + "'");
          continue;
        }
        try {
          params.table.emplace_back(std::stod(f[0]), std::stod(f[1]));
        } catch (...) {
          doc.errors.push_back("'spectral.table': malformed entry '" + item + "'");
        }
      }
    }
    try {
      sc.problem.model = build_model(family, modes, nu, params);
    } catch (const std::exception& e) {
      doc.errors.push_back(std::string("[spectral]: ") + e.what());
    }
  }

  // [data]
  sc.problem.u0 = parse_descriptor(doc, "data", "u0", "expdecay:1.0");
  sc.problem.u1 = parse_descriptor(doc, "data", "u1", "zero");

  // [source]
  sc.problem.has_source = doc.boolean("source", "enabled", doc.has_section("source"));
  if (doc.has_section("source")) {
    sc.problem.source_g = parse_smooth(doc, "source");
    sc.problem.source_h = parse_descriptor(doc, "source", "h", "expdecay:1.0");
  }

  // [time]
  sc.problem.base_step = doc.num("time", "base_step", 1e-3);
  sc.problem.solve.theta = doc.num("time", "theta", 0.02);
  sc.problem.solve.coeff_resolution = doc.num("time", "coeff_resolution", 0.2);
  sc.problem.solve.max_steps = doc.integer("time", "max_steps", 200000);
  {
    const std::string m = lower(doc.str("time", "method", "rk4"));
    if (m == "rk4") sc.problem.solve.method = IntegratorMethod::RK4;
    else if (m == "verlet") sc.problem.solve.method = IntegratorMethod::StormerVerlet;
    else doc.errors.push_back("'time.method': unknown integrator '" + m + "'");
  }
  if (sc.problem.base_step <= 0.0) doc.errors.push_back("'time.base_step': must be positive");
  if (sc.problem.solve.theta <= 0.0) doc.errors.push_back("'time.theta': must be positive");
  if (sc.problem.solve.max_steps < 1) doc.errors.push_back("'time.max_steps': must be >= 1");

  // [gevrey]
  sc.gevrey_s = doc.num("gevrey", "s", 1.5);
  sc.eta_grid = doc.numbers("gevrey", "eta");
  if (auto v = doc.raw("gevrey", "beta")) {
    for (const auto& tok : split(*v, ',')) {
      try {
        sc.beta_list.push_back(std::stod(tok));
      } catch (...) {
        doc.errors.push_back("'gevrey.beta': not a number: '" + tok + "'");
      }
    }
  } else {
    const double lo = doc.num("gevrey", "beta_lo", 4.0);
    const double hi = doc.num("gevrey", "beta_hi", 400.0);
    const int n = static_cast<int>(doc.integer("gevrey", "beta_points", 16));
    if (lo > 0.0 && hi > lo && n >= 2) {
      const double step = std::log(hi / lo) / (n - 1);
      for (int i = 0; i < n; ++i) sc.beta_list.push_back(lo * std::exp(i * step));
    } else {
      doc.errors.push_back("[gevrey]: need 0 < beta_lo < beta_hi and beta_points >= 2");
    }
  }
  if (sc.gevrey_s < 1.0) doc.errors.push_back("'gevrey.s': must be >= 1");
  if (sc.eta_grid.empty()) {
    for (double eta : {0.05, 0.1, 0.2, 0.4, 0.8, 1.6}) sc.eta_grid.push_back(eta);
  }

  // [analysis]
  sc.p_max = static_cast<int>(doc.integer("analysis", "p_max", 2));
  if (sc.p_max < 1) doc.errors.push_back("'analysis.p_max': must be >= 1");
  if (auto v = doc.raw("analysis", "ell")) {
    for (const auto& tok : split(*v, ',')) {
      try {
        sc.ell_list.push_back(std::stoi(tok));
      } catch (...) {
        doc.errors.push_back("'analysis.ell': not an integer: '" + tok + "'");
      }
    }
  } else {
    sc.ell_list = {1, 2, 3};
  }
  sc.final_threshold = doc.num("analysis", "final_threshold", 1e-3);
  sc.slope_threshold = doc.num("analysis", "slope_threshold", 0.8);
  if (auto v = doc.raw("analysis", "regime")) {
    CoefficientClass cls;
    const std::string kind = lower(*v);
    bool known = true;
    if (kind == "lipschitz") cls.kind = CoefficientClass::Kind::LipschitzPositive;
    else if (kind == "holder") cls.kind = CoefficientClass::Kind::HolderPositive;
    else if (kind == "degenerate-smooth") cls.kind = CoefficientClass::Kind::SmoothDegenerate;
    else if (kind == "degenerate-holder") cls.kind = CoefficientClass::Kind::HolderDegenerate;
    else {
      known = false;
      doc.errors.push_back("'analysis.regime': unknown class '" + *v +
                           "' (lipschitz | holder | degenerate-smooth | "
                           "degenerate-holder)");
    }
    cls.alpha = doc.num("analysis", "alpha", 0.5);
    cls.ell = static_cast<int>(doc.integer("analysis", "ell", 2));
    if (known) {
      try {
        const RegimeRecord r = regime_advisor(cls);
        if (!r.sobolev) {
          const double s = sc.experiment == ExperimentKind::GevreyScan ||
                                   sc.experiment == ExperimentKind::GevreyModerateness
                               ? sc.gevrey_s
                               : sc.problem.s;
          if (!(s < r.s_sup)) {
            std::ostringstream os;
            os << "'analysis.regime': s must satisfy s < " << r.s_sup
               << " in regime " << r.regime;
            doc.errors.push_back(os.str());
          }
        }
      } catch (const std::exception& e) {
        doc.errors.push_back(std::string("'analysis.regime': ") + e.what());
      }
    }
  }

  // cross-cutting checks
  try {
    sc.problem.a.validate();
  } catch (const std::exception& e) {
    doc.errors.push_back(std::string("[coefficient]: ") + e.what());
  }
  if (sc.experiment == ExperimentKind::Consistency ||
      sc.experiment == ExperimentKind::EnergyAudit ||
      sc.experiment == ExperimentKind::GevreyScan) {
    if (sc.problem.a.is_distributional()) {
      doc.errors.push_back("'" + experiment_name(sc.experiment) +
                           "' needs a classical (jump- and atom-free) speed");
    }
  }
  if (sc.eps_net.empty()) doc.errors.push_back("'net': empty eps net");

  doc.report_unknown({"scenario", "coefficient", "mollifier", "schedule", "net",
                      "spectral", "data", "source", "time", "gevrey", "analysis"});
  if (!doc.errors.empty()) {
    std::string msg = "scenario has " + std::to_string(doc.errors.size()) + " problem(s):";
    for (const auto& e : doc.errors) msg += "\n  - " + e;
    throw ConfigError(msg);
  }
  return sc;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

}  // namespace vwl
