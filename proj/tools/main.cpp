// vwlab: command-line front end for the very weak solutions laboratory.
//
//   vwlab validate <scenario>            parse + validate, print verdict
//   vwlab run <scenario> [--force] [--jobs N] [--out DIR]
//   vwlab export <scenario> --which NAME [--out DIR]
//   vwlab regimes --class KIND [--alpha A] [--ell L]
//
// Exit codes: 0 success, 1 configuration/validation error,
//             2 numerical/solver failure, 3 missing artifact or I/O error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "vwl/runner.hpp"

namespace {

std::string default_out_root() {
  if (const char* env = std::getenv("VWLAB_OUT")) return env;
  return "runs";
}

int do_validate(const std::string& path) {
  try {
    const vwl::Scenario sc = vwl::load_scenario_file(path);
    std::cout << "ok: " << sc.name << " (" << vwl::experiment_name(sc.experiment)
              << ", hash " << vwl::scenario_hash(sc) << ")\n";
    return 0;
  } catch (const vwl::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}

int do_run(const std::string& path, const std::string& out_root, bool force,
           int jobs) {
  vwl::Scenario sc;
  try {
    sc = vwl::load_scenario_file(path);
  } catch (const vwl::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  if (jobs > 0) sc.problem.jobs = jobs;
  try {
    const vwl::RunRecord rec = vwl::run_scenario(sc, out_root, force);
    std::cout << (rec.reused ? "reused " : "wrote ") << rec.dir << "\n";
    for (const auto& f : rec.files) std::cout << "  " << f << "\n";
    for (const auto& [k, v] : rec.summary) std::cout << k << " = " << v << "\n";
    return 0;
  } catch (const vwl::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const vwl::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return 2;
  }
}

std::string selector_to_file(const std::string& which) {
  if (which == "summary") return "summary.txt";
  if (which.size() > 4 && which.substr(which.size() - 4) == ".csv") return which;
  if (which == "amplification" || which == "gevrey") return "amplification.csv";
  return which + ".csv";
}

int do_export(const std::string& path, const std::string& out_root,
              const std::string& which) {
  vwl::Scenario sc;
  try {
    sc = vwl::load_scenario_file(path);
  } catch (const vwl::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  const std::string dir = vwl::find_run_dir(sc, out_root);
  if (dir.empty()) {
    std::cerr << "no finished run for this scenario under " << out_root
              << " (run it first)\n";
    return 3;
  }
  if (which == "all") {
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      if (entry.path().extension() == ".csv") {
        std::cout << entry.path().string() << "\n";
      }
    }
    std::cout << (std::filesystem::path(dir) / "summary.txt").string() << "\n";
    return 0;
  }
  const std::filesystem::path file =
      std::filesystem::path(dir) / selector_to_file(which);
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    std::cerr << "run " << dir << " has no artifact '" << which
              << "'; available:\n";
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      if (entry.path().extension() == ".csv") {
        std::cerr << "  " << entry.path().stem().string() << "\n";
      }
    }
    std::cerr << "  summary\n  all\n";
    return 3;
  }
  std::cout << in.rdbuf();
  return 0;
}

void print_regime(const vwl::RegimeRecord& r) {
  std::cout << "regime " << r.regime << ": " << r.space;
  if (!r.sobolev) std::cout << " (s_sup = " << r.s_sup << ")";
  std::cout << "\n";
}

int do_regimes(const std::string& kind, double alpha, int ell) {
  if (kind.empty()) {  // the full table
    using K = vwl::CoefficientClass::Kind;
    print_regime(vwl::regime_advisor({K::LipschitzPositive, 0.5, 2}));
    print_regime(vwl::regime_advisor({K::HolderPositive, 0.5, 2}));
    print_regime(vwl::regime_advisor({K::SmoothDegenerate, 0.5, 2}));
    print_regime(vwl::regime_advisor({K::HolderDegenerate, 0.5, 2}));
    return 0;
  }
  vwl::CoefficientClass c;
  if (kind == "lipschitz") c.kind = vwl::CoefficientClass::Kind::LipschitzPositive;
  else if (kind == "holder") c.kind = vwl::CoefficientClass::Kind::HolderPositive;
  else if (kind == "degenerate-smooth")
    c.kind = vwl::CoefficientClass::Kind::SmoothDegenerate;
  else if (kind == "degenerate-holder")
    c.kind = vwl::CoefficientClass::Kind::HolderDegenerate;
  else {
    std::cerr << "unknown class '" << kind
              << "' (lipschitz | holder | degenerate-smooth | degenerate-holder)\n";
    return 1;
  }
  c.alpha = alpha;
  c.ell = ell;
  try {
    const vwl::RegimeRecord r = vwl::regime_advisor(c);
    std::cout << "regime " << r.regime << "\n" << r.space << "\n";
    if (!r.sobolev) std::cout << "s_sup = " << r.s_sup << "\n";
    return 0;
  } catch (const vwl::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"very weak solutions laboratory"};
  app.require_subcommand(1);

  std::string scenario_path, out_root = default_out_root();
  bool force = false;
  int jobs = 0;
  std::string which = "summary";
  std::string klass;
  double alpha = 0.5;
  int ell = 2;

  auto* validate = app.add_subcommand("validate", "parse and validate a scenario");
  validate->add_option("scenario", scenario_path, "scenario file")->required();

  auto* run = app.add_subcommand("run", "execute a scenario");
  run->add_option("scenario", scenario_path, "scenario file")->required();
  run->add_option("--out", out_root, "output root (default $VWLAB_OUT or ./runs)");
  run->add_flag("--force", force, "recompute even if a finished run exists");
  run->add_option("--jobs", jobs, "worker threads (overrides the scenario)");

  auto* exp = app.add_subcommand("export", "print an artifact of a finished run");
  exp->add_option("scenario", scenario_path, "scenario file")->required();
  exp->add_option("--out", out_root, "output root");
  exp->add_option("--which", which, "artifact name (summary or a csv file)");

  auto* reg = app.add_subcommand("regimes", "well-posedness regime advisor");
  reg->add_option("--class", klass,
                  "lipschitz | holder | degenerate-smooth | degenerate-holder");
  reg->add_option("--alpha", alpha, "Holder exponent");
  reg->add_option("--ell", ell, "smoothness order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 1 : 0;
  }

  if (validate->parsed()) return do_validate(scenario_path);
  if (run->parsed()) return do_run(scenario_path, out_root, force, jobs);
  if (exp->parsed()) return do_export(scenario_path, out_root, which);
  return do_regimes(klass, alpha, ell);
}
