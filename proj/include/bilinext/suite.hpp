#pragma once

#include "bilinext/io.hpp"

#include <map>
#include <string>
#include <vector>

namespace bilinext {

struct SuiteSpec {
  std::string suite_id;
  int trials = 20;
  int dim_min = 1;
  int dim_max = 4;
  /// Empty means the suite's default exponents.
  std::vector<LpExponent> p_values;
  std::uint64_t seed = 0;
  /// Overrides of the suite's named tolerances.
  std::map<std::string, double> tolerances;
  OptimizerConfig optimizer;
};

/// Throws InputError on an unknown suite, trials < 1, dims outside [1, 8], or an unknown
/// tolerance key.
void validate(const SuiteSpec& spec);

const std::vector<std::string>& suite_ids();
int default_trials(const std::string& suite_id);
/// Named tolerances of a suite with their default values.
std::map<std::string, double> default_tolerances(const std::string& suite_id);

struct SuiteFailure {
  int trial = 0;
  std::uint64_t seed = 0;
  std::string invariant;
  double measured = 0.0;
  double tolerance = 0.0;
  io::json instance;  ///< replay: {"command": compute subcommand, "input": its input file}
};

struct InvariantStats {
  double worst = 0.0;
  double tolerance = 0.0;
  int checked = 0;
};

struct SuiteReport {
  std::string suite_id;
  int trials_run = 0;
  std::vector<SuiteFailure> failures;
  std::map<std::string, InvariantStats> invariants;
  double worst_gap = 0.0;
  io::json summary;  ///< suite-specific deterministic statistics
  double runtime_seconds = 0.0;

  bool pass() const { return failures.empty(); }
};

SuiteReport run_suite(const SuiteSpec& spec);

/// Deterministic apart from the "timing" member.
io::json to_json(const SuiteReport& report, const SuiteSpec& spec);
/// One row per invariant.
std::string to_csv(const SuiteReport& report);

}  // namespace bilinext
