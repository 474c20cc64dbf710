#pragma once

#include <string>
#include <vector>

#include "vwl/lab.hpp"

namespace vwl {

enum class ExperimentKind {
  Moderateness,
  GevreyModerateness,
  Consistency,
  Uniqueness,
  GevreyScan,
  EnergyAudit,
  Coefficient   // mollification study only, no solves
};

/// Parsed and validated experiment description. `canonical` is the
/// normalised key=value listing used for content addressing.
struct Scenario {
  std::string name = "scenario";
  ExperimentKind experiment = ExperimentKind::Moderateness;
  ScenarioProblem problem;
  MollifierShape mollifier = MollifierShape::Bump;
  MollifierShape mollifier_alt = MollifierShape::CosineSq;  // uniqueness pairing
  double quad_tol = 1e-10;
  ScaleSchedule schedule;
  std::vector<double> eps_net;   // descending
  int p_max = 2;
  int coeff_k_max = 2;           // derivative depth for coefficient exports

  double gevrey_s = 1.5;
  std::vector<double> eta_grid;
  std::vector<double> beta_list;

  std::vector<int> ell_list;
  double final_threshold = 1e-3;
  double slope_threshold = 0.8;

  std::string canonical;
};

/// Parses the sectioned key = value format. Collects *all* problems
/// (syntax, unknown sections/keys, invariant violations) and throws a single
/// ConfigError listing them; never returns a half-valid scenario.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario_file(const std::string& path);

std::string experiment_name(ExperimentKind k);

}  // namespace vwl
