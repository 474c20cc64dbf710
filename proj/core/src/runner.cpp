#include "vwl/runner.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <span>

namespace vwl {

namespace fs = std::filesystem;

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string scenario_hash(const Scenario& sc) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, fnv1a(sc.canonical));
  return buf;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

class Table {
 public:
  Table(std::string name, std::vector<std::string> columns)
      : name_(std::move(name)), columns_(std::move(columns)) {}

  void row(std::span<const double> values) {
    if (values.size() != columns_.size()) {
      throw std::logic_error("table row width mismatch in " + name_);
    }
    std::string line;
    for (double v : values) {
      if (!line.empty()) line += ",";
      line += fmt(v);
    }
    rows_.push_back(std::move(line));
  }
  void row(std::initializer_list<double> values) {
    row(std::span<const double>(values.begin(), values.size()));
  }

  /// temp + rename so a crashed run never leaves a half-written table
  void write(const fs::path& dir, const std::string& hash) const {
    const fs::path target = dir / name_;
    const fs::path tmp = dir / (name_ + ".tmp");
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write " + tmp.string());
      out << "# vwlab 0.1.0 scenario=" << hash << "\n";
      std::string header;
      for (const auto& c : columns_) {
        if (!header.empty()) header += ",";
        header += c;
      }
      out << header << "\n";
      for (const auto& r : rows_) out << r << "\n";
      if (!out.good()) throw std::runtime_error("write failure on " + tmp.string());
    }
    fs::rename(tmp, target);
  }

  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::vector<std::string> columns_;
  std::vector<std::string> rows_;
};

struct Ctx {
  const Scenario& sc;
  fs::path dir;
  std::string hash;
  RunRecord& rec;

  void emit(const Table& t) {
    t.write(dir, hash);
    rec.files.push_back(t.name());
  }
  void put(const std::string& key, const std::string& value) {
    rec.summary[key] = value;
  }
  void put(const std::string& key, double value) { put(key, fmt(value)); }
  void put(const std::string& key, bool value) {
    put(key, value ? std::string("true") : std::string("false"));
  }
};

void write_modes(Ctx& ctx) {
  Table t("modes.csv", {"m", "pi_m", "mu_m"});
  const auto& model = ctx.sc.problem.model;
  for (int m = 0; m < model.size(); ++m) {
    t.row({double(m + 1), model.pi[m], model.mu[m]});
  }
  ctx.emit(t);
}

void write_coefficient(Ctx& ctx, const SampledCoefficient& c) {
  std::vector<std::string> cols{"t", "a_eps"};
  for (std::size_t k = 1; k < c.deriv.size(); ++k) {
    cols.push_back("d" + std::to_string(k) + "_a_eps");
  }
  Table t("coefficient.csv", cols);
  for (int i = 0; i < c.grid.size(); ++i) {
    std::vector<double> row{c.grid.time(i)};
    for (const auto& d : c.deriv) row.push_back(d[i]);
    t.row(row);
  }
  ctx.emit(t);
}

void write_trajectory(Ctx& ctx, const NetSolution& net) {
  // finest eps, lowest mode: the canonical "look at one orbit" export
  const int ie = static_cast<int>(net.eps.size()) - 1;
  const ModeTrajectory& traj = net.modes[ie][0];
  const CoefficientView a = CoefficientView::sampled(net.a_eps[ie]);
  const double delta = std::max(net.omega[ie], 1e-3);
  Table t("trajectory.csv", {"t", "re_v", "im_v", "re_vt", "im_vt", "E", "E_delta"});
  const double b2 = traj.beta * traj.beta;
  for (int i = 0; i < traj.grid.size(); ++i) {
    const double tt = traj.grid.time(i);
    const double at = a.value(tt);
    const double E = 2.0 * at * b2 * std::norm(traj.v[i]) + 2.0 * std::norm(traj.vt[i]);
    const double Ed =
        (at + delta * delta) * b2 * std::norm(traj.v[i]) + std::norm(traj.vt[i]);
    t.row({tt, traj.v[i].real(), traj.v[i].imag(), traj.vt[i].real(),
           traj.vt[i].imag(), E, Ed});
  }
  ctx.emit(t);
}

void run_moderateness(Ctx& ctx, bool gevrey) {
  const Scenario& sc = ctx.sc;
  const Mollifier psi = make_mollifier(sc.mollifier, sc.quad_tol);
  const NetSolution net =
      solve_regularized_net(sc.problem, psi, sc.schedule, sc.eps_net, sc.p_max);
  if (!net.complete()) {
    std::string msg = "regularised solves failed:";
    for (std::size_t i = 0; i < net.eps.size(); ++i) {
      if (!net.failures[i].empty()) {
        msg += "\n  eps=" + fmt(net.eps[i]) + ": " + net.failures[i];
      }
    }
    throw std::runtime_error(msg);
  }

  const ModeratenessReport rep = moderateness_report(net, sc.p_max);
  Table t("moderateness.csv",
          {"eps", "omega", "p", "sup_norm", "fitted_N", "envelope_ok"});
  for (std::size_t i = 0; i < net.eps.size(); ++i) {
    for (int p = 0; p <= sc.p_max; ++p) {
      t.row({net.eps[i], net.omega[i], double(p), net.sup_norms[i][p],
             rep.per_p[p].slope, rep.per_p[p].envelope_valid ? 1.0 : 0.0});
    }
  }
  ctx.emit(t);
  ctx.put("moderate", rep.moderate);
  ctx.put("N", rep.N);
  for (int p = 0; p <= sc.p_max; ++p) {
    ctx.put("slope_p" + std::to_string(p), rep.per_p[p].slope);
    ctx.put("c_p" + std::to_string(p), rep.c_p[p]);
  }

  if (gevrey) {
    const GevreyModeratenessReport grep = gevrey_moderateness_report(
        net, sc.gevrey_s, sc.eta_grid, sc.p_max);
    Table gt("gevrey_moderateness.csv", {"p", "slope", "log_c", "envelope_ok"});
    for (std::size_t p = 0; p < grep.per_p.size(); ++p) {
      gt.row({double(p), grep.per_p[p].slope, grep.per_p[p].log_c,
              grep.per_p[p].envelope_valid ? 1.0 : 0.0});
    }
    ctx.emit(gt);
    ctx.put("gevrey_certified", grep.certified);
    ctx.put("gevrey_eta", grep.eta);
  }

  write_modes(ctx);
  write_coefficient(ctx, net.a_eps.back());
  write_trajectory(ctx, net);
}

void run_consistency(Ctx& ctx) {
  const Scenario& sc = ctx.sc;
  const Mollifier psi = make_mollifier(sc.mollifier, sc.quad_tol);
  const ConsistencyReport rep = consistency_experiment(
      sc.problem, psi, sc.schedule, sc.eps_net, sc.final_threshold);
  Table t("consistency.csv", {"eps", "err_CH", "err_C1H"});
  for (std::size_t i = 0; i < rep.eps.size(); ++i) {
    t.row({rep.eps[i], rep.err_CH[i], rep.err_C1H[i]});
  }
  ctx.emit(t);
  write_modes(ctx);
  ctx.put("consistent", rep.consistent);
  ctx.put("monotone", rep.monotone);
  ctx.put("slope", rep.slope);
  ctx.put("final_error", rep.final_error);
}

void run_uniqueness(Ctx& ctx) {
  const Scenario& sc = ctx.sc;
  const Mollifier psi1 = make_mollifier(sc.mollifier, sc.quad_tol);
  const Mollifier psi2 = make_mollifier(sc.mollifier_alt, sc.quad_tol);
  const UniquenessReport rep =
      uniqueness_experiment(sc.problem, psi1, psi2, sc.schedule, sc.eps_net,
                            sc.slope_threshold, sc.final_threshold);
  Table t("uniqueness.csv", {"eps", "coeff_diff", "sol_diff"});
  for (std::size_t i = 0; i < rep.eps.size(); ++i) {
    t.row({rep.eps[i], rep.coeff_diff[i], rep.sol_diff[i]});
  }
  ctx.emit(t);
  write_modes(ctx);
  ctx.put("coeff_slope", rep.coeff_slope);
  ctx.put("sol_slope", rep.sol_slope);
  ctx.put("final_diff", rep.final_diff);
  if (rep.pass) {
    ctx.put("pass", *rep.pass);
  } else {
    ctx.put("pass", std::string("not-applicable"));
  }
}

void run_gevrey_scan(Ctx& ctx) {
  const Scenario& sc = ctx.sc;
  const AmplificationScan scan = gevrey_amplification_scan(
      sc.problem.a.smooth, sc.gevrey_s, sc.beta_list, sc.problem.a.horizon, 10.0,
      SolveOptions{.theta = sc.problem.solve.theta / 2.0,
                   .coeff_resolution = sc.problem.solve.coeff_resolution,
                   .method = sc.problem.solve.method,
                   .max_steps = std::max<long>(sc.problem.solve.max_steps, 2000000)});
  Table t("amplification.csv", {"beta", "amplification", "ratio"});
  for (std::size_t i = 0; i < scan.beta.size(); ++i) {
    t.row({scan.beta[i], scan.amplification[i], scan.ratio[i]});
  }
  ctx.emit(t);
  ctx.put("K_prime", scan.K_prime);
  ctx.put("max_over_median", scan.max_over_median);
  ctx.put("bounded", scan.bounded);
}

void run_energy_audit(Ctx& ctx) {
  const EnergyAudit audit = energy_inequality_audit(ctx.sc.problem);
  ctx.put("C_emp", audit.C_emp);
  ctx.put("lhs_sup", audit.lhs_sup);
  ctx.put("rhs", audit.rhs);
  ctx.put("solver_bug", audit.solver_bug);
  write_modes(ctx);
}

void run_coefficient(Ctx& ctx) {
  const Scenario& sc = ctx.sc;
  const Mollifier psi = make_mollifier(sc.mollifier, sc.quad_tol);
  const double omega = schedule_omega(sc.schedule, sc.eps_net.back());
  const double T = sc.problem.a.horizon;
  const double dt = std::min(sc.problem.base_step, omega / 4.0);
  const TimeGrid grid{0.0, T, std::max(16, static_cast<int>(std::ceil(T / dt)))};
  const SampledCoefficient c =
      mollify(sc.problem.a, psi, omega, grid, sc.coeff_k_max);
  write_coefficient(ctx, c);

  const auto fits = fit_derivative_growth(sc.problem.a, psi, sc.schedule,
                                          sc.eps_net, sc.coeff_k_max);
  Table t("derivative_growth.csv",
          {"k", "slope", "intercept", "r_squared", "envelope_c", "moderate"});
  for (const auto& f : fits) {
    t.row({double(f.order), f.defined ? f.slope : 0.0, f.intercept, f.r_squared,
           f.envelope_constant, f.moderate ? 1.0 : 0.0});
  }
  ctx.emit(t);
  const LowerBoundCheck lb = lower_bound_check(c, sc.problem.a.claimed_floor);
  ctx.put("floor_holds", lb.holds);
  ctx.put("floor_min", lb.min_value);
}

void write_summary(Ctx& ctx) {
  const fs::path tmp = ctx.dir / "summary.txt.tmp";
  const fs::path target = ctx.dir / "summary.txt";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << "name = " << ctx.sc.name << "\n";
    out << "experiment = " << experiment_name(ctx.sc.experiment) << "\n";
    out << "scenario = " << ctx.hash << "\n";
    for (const auto& [k, v] : ctx.rec.summary) out << k << " = " << v << "\n";
    if (!out.good()) throw std::runtime_error("write failure on summary");
  }
  fs::rename(tmp, target);
}

}  // namespace

std::string find_run_dir(const Scenario& sc, const std::string& out_root) {
  const fs::path dir =
      fs::path(out_root) / (sc.name + "-" + scenario_hash(sc).substr(0, 8));
  if (fs::exists(dir / "status") ) {
    std::ifstream in(dir / "status");
    std::string s;
    in >> s;
    if (s == "ok") return dir.string();
  }
  return "";
}

std::map<std::string, std::string> read_summary(const std::string& run_dir) {
  std::ifstream in(fs::path(run_dir) / "summary.txt");
  if (!in) throw std::runtime_error("no summary.txt in " + run_dir);
  std::map<std::string, std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto strip = [](std::string s) {
      while (!s.empty() && s.front() == ' ') s.erase(s.begin());
      while (!s.empty() && s.back() == ' ') s.pop_back();
      return s;
    };
    out[strip(line.substr(0, eq))] = strip(line.substr(eq + 1));
  }
  return out;
}

RunRecord run_scenario(const Scenario& sc, const std::string& out_root,
                       bool force) {
  RunRecord rec;
  rec.hash = scenario_hash(sc);
  const fs::path dir = fs::path(out_root) / (sc.name + "-" + rec.hash.substr(0, 8));
  rec.dir = dir.string();

  if (!force) {
    const std::string existing = find_run_dir(sc, out_root);
    if (!existing.empty()) {
      rec.reused = true;
      rec.summary = read_summary(existing);
      for (const auto& entry : fs::directory_iterator(existing)) {
        if (entry.path().extension() == ".csv") {
          rec.files.push_back(entry.path().filename().string());
        }
      }
      std::sort(rec.files.begin(), rec.files.end());
      return rec;
    }
  }

  fs::create_directories(dir);
  fs::remove(dir / "status");
  Ctx ctx{sc, dir, rec.hash, rec};
  {
    // scenario echo for reproducibility
    const fs::path tmp = dir / "scenario.txt.tmp";
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << sc.canonical;
    out.close();
    fs::rename(tmp, dir / "scenario.txt");
  }

  switch (sc.experiment) {
    case ExperimentKind::Moderateness: run_moderateness(ctx, false); break;
    case ExperimentKind::GevreyModerateness: run_moderateness(ctx, true); break;
    case ExperimentKind::Consistency: run_consistency(ctx); break;
    case ExperimentKind::Uniqueness: run_uniqueness(ctx); break;
    case ExperimentKind::GevreyScan: run_gevrey_scan(ctx); break;
    case ExperimentKind::EnergyAudit: run_energy_audit(ctx); break;
    case ExperimentKind::Coefficient: run_coefficient(ctx); break;
  }

  std::sort(rec.files.begin(), rec.files.end());
  write_summary(ctx);
  {
    // wall-clock provenance lives outside the deterministic tables
    const fs::path tmp = dir / "meta.txt.tmp";
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    const std::time_t now = std::time(nullptr);
    char stamp[32] = "unknown";
    if (std::tm tm{}; gmtime_r(&now, &tm) != nullptr) {
      std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm);
    }
    out << "version = 0.1.0\nfinished = " << stamp << "\n";
    out.close();
    fs::rename(tmp, dir / "meta.txt");
  }
  {
    const fs::path tmp = dir / "status.tmp";
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << "ok\n";
    out.close();
    fs::rename(tmp, dir / "status");
  }
  return rec;
}

}  // namespace vwl
