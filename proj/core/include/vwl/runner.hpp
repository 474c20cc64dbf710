#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vwl/scenario.hpp"

namespace vwl {

std::uint64_t fnv1a(std::string_view data);

/// 16-hex-digit content address of a scenario (derived from its canonical
/// key listing, so formatting and key order never matter).
std::string scenario_hash(const Scenario& sc);

struct RunRecord {
  std::string dir;
  std::string hash;
  bool reused = false;
  std::vector<std::string> files;                 // CSVs written (basenames)
  std::map<std::string, std::string> summary;     // key = value verdict lines
};

/// Executes the scenario's experiment into <out_root>/<name>-<hash8>/.
/// A completed directory is reused as-is unless `force` is set. All files
/// are written atomically (temp + rename) and are byte-deterministic for a
/// given scenario, independent of the job count.
RunRecord run_scenario(const Scenario& sc, const std::string& out_root,
                       bool force = false);

/// Path of a finished run for this scenario, or empty if absent/incomplete.
std::string find_run_dir(const Scenario& sc, const std::string& out_root);

/// Reads back the summary key = value file of a finished run.
std::map<std::string, std::string> read_summary(const std::string& run_dir);

}  // namespace vwl
