/// @file harness.hpp
/// @brief Study drivers behind the command line: single runs, refinement
/// studies, the mollification study and the property suite.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "synflow/config.hpp"
#include "synflow/output.hpp"

namespace synflow {

/// Exit codes of the command line tool.
enum ExitCode : int { kExitPass = 0, kExitCheckFailure = 1, kExitUsage = 2, kExitNumerical = 3 };

struct StudyOptions {
  std::optional<std::string> output_dir;
  bool quiet = true;
};

struct StudyOutcome {
  Summary summary;
  /// Directory the artifacts were written to.
  std::string output_dir;

  int exit_code() const { return summary.passed() ? kExitPass : kExitCheckFailure; }
};

/// Runs the configured study and writes its artifacts (diagnostics.csv,
/// snapshots, tables, run_summary.txt) under the output directory.
StudyOutcome run_study(const Config& config, const StudyOptions& options = {});

/// Constitutive structure sweeps and variable-exponent invariant sweeps on the
/// configured models, deterministic in config.seed.
std::vector<Check> property_suite(const Config& config);

/// Maps an exception from run_study to an exit code and message.
int exit_code_for(const std::exception& e);

}  // namespace synflow
