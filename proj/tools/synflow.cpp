// synflow: command line driver for runs, studies and the property suite.
#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "synflow/harness.hpp"

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  bool quiet = false;
};

void report(const synflow::StudyOutcome& o, bool quiet) {
  if (!quiet) std::cout << o.summary.text();
  if (!o.summary.passed()) {
    for (const auto& c : o.summary.checks) {
      if (!c.passed) std::cerr << "check_failed: " << c.name << " value=" << synflow::format_double(c.value) << "\n";
    }
  }
}

int execute(synflow::Config cfg, const Overrides& ov) {
  if (ov.seed) cfg.seed = *ov.seed;
  synflow::StudyOptions opts;
  opts.output_dir = ov.out;
  opts.quiet = ov.quiet;
  const auto outcome = synflow::run_study(cfg, opts);
  report(outcome, ov.quiet);
  return outcome.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"synflow: Galerkin solver for concentration-dependent power-law flows"};
  app.require_subcommand(1);
  app.fallthrough();
  Overrides ov;
  app.add_option("--seed", ov.seed, "Override the random seed");
  app.add_option("--out", ov.out, "Override the output directory");
  app.add_flag("--quiet", ov.quiet, "Suppress the summary on stdout");

  std::string run_path, study_path, suite_path, preset;
  auto* run = app.add_subcommand("run", "Single run of the configured scenario");
  run->add_option("config", run_path, "Configuration file")->required();
  auto* study = app.add_subcommand("study", "Run the study selected by study.kind");
  study->add_option("config", study_path, "Configuration file")->required();
  auto* suite = app.add_subcommand("suite", "Constitutive and variable-exponent property suite");
  suite->add_option("config", suite_path, "Optional configuration file");
  auto* dump = app.add_subcommand("dump-defaults", "Print the canonical default configuration");
  dump->add_option("--scenario", preset, "Dump this preset instead of the defaults");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? synflow::kExitPass : synflow::kExitUsage;
  }

  try {
    if (*dump) {
      synflow::Config cfg = synflow::default_config();
      if (!preset.empty()) synflow::apply_preset(cfg, preset);
      std::cout << synflow::dump_config(cfg);
      return synflow::kExitPass;
    }
    if (*run) {
      synflow::Config cfg = synflow::parse_config(run_path);
      cfg.study = synflow::StudyKind::SingleRun;
      return execute(cfg, ov);
    }
    if (*study) return execute(synflow::parse_config(study_path), ov);
    synflow::Config cfg = suite_path.empty() ? synflow::default_config() : synflow::parse_config(suite_path);
    cfg.study = synflow::StudyKind::PropertySuite;
    return execute(cfg, ov);
  } catch (const std::exception& e) {
    const int rc = synflow::exit_code_for(e);
    std::cerr << (rc == synflow::kExitUsage ? "config_error: " : "numerical_error: ") << e.what() << "\n";
    return rc;
  }
}
