/// @file config.hpp
/// @brief Line-oriented `key = value` configuration, scenario presets and the
/// mapping from a configuration to a solver Scenario.
///
/// Format: one `key = value` per line, `#` starts a comment, keys are dotted
/// (`stress.nu0`, `index.kind`). Unknown keys are rejected. The `scenario` key
/// selects a preset that is applied before every other key, whatever its line.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "synflow/constitutive.hpp"
#include "synflow/errors.hpp"
#include "synflow/fields.hpp"
#include "synflow/integrator.hpp"
#include "synflow/solver.hpp"

namespace synflow {

class ParseError : public InputError {
 public:
  ParseError(int line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class UnknownKey : public InputError {
 public:
  UnknownKey(int line, const std::string& key)
      : InputError("line " + std::to_string(line) + ": unknown key '" + key + "'"), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

class RangeError : public InputError {
 public:
  using InputError::InputError;
};

enum class StudyKind { SingleRun, NRefinement, MRefinement, EpsilonStudy, PropertySuite };

std::string to_string(StudyKind k);
StudyKind study_kind_from_string(const std::string& s);

struct Config {
  StudyKind study = StudyKind::SingleRun;
  std::string scenario = "taylor_green";
  std::uint64_t seed = 42;

  std::string output_dir = "synflow_out";
  /// Number of output intervals on [0, T].
  int output_cadence = 100;
  /// VTK snapshots per run, evenly spread over the outputs (0 = none).
  int output_snapshots = 3;
  int output_vtk_resolution = 33;

  DomainMode domain_mode = DomainMode::PeriodicTorus;
  double domain_extent = 6.283185307179586;
  double t_final = 1.0;
  int quadrature_resolution = 64;
  int basis_n = 8;
  int basis_m = 8;

  double nu0 = 0.1;
  double nu1 = 1.0;
  double nu2 = 1.0;
  IndexKind index_kind = IndexKind::PiecewiseLinearInC;
  double p_min = 2.0;
  double p_max = 2.0;
  double c_ref = 1.0;
  double omega = 0.0;
  double k0 = 0.1;
  double k1 = 0.0;

  /// none | vortex | taylor_green
  std::string forcing_kind = "none";
  double forcing_amplitude = 0.0;
  int forcing_mode = 1;
  double forcing_omega = 0.0;

  /// zero | taylor_green | vortex
  std::string u_kind = "taylor_green";
  double u_amplitude = 1.0;
  int u_mode = 1;
  /// zero | bump | sine
  std::string c_kind = "bump";
  double c_amplitude = 1.0;
  int c_mode = 1;
  double c_tilde = 1.0;

  double epsilon = 0.0;

  Scheme scheme = Scheme::RK4Adaptive;
  double rtol = 1e-9;
  double atol = 1e-12;
  double dt_min = 1e-10;
  double dt_initial = 1e-3;
  double dt = 1e-3;

  std::vector<int> n_list{4, 8, 16};
  std::vector<int> m_list{8, 16, 32};
  std::vector<double> eps_list{0.2, 0.1, 0.05};

  int suite_samples = 10000;

  bool operator==(const Config&) const = default;

  /// Cross-field range checks (RangeError).
  void validate() const;
};

/// Names of the shipped presets.
const std::vector<std::string>& preset_names();

/// Overwrites the scenario-related fields with a preset. RangeError for unknown names.
void apply_preset(Config& config, const std::string& name);

Config default_config();

Config parse_config_text(const std::string& text);
/// Throws InputError if the file cannot be read.
Config parse_config(const std::string& path);

/// Canonical dump: every key, fixed order, round-trips through parse_config_text.
std::string dump_config(const Config& config);

/// Keys accepted by the parser, in canonical order.
const std::vector<std::string>& config_keys();

Scenario make_scenario(const Config& config);

/// Taylor-Green velocity A (sin kx cos ky, -cos kx sin ky), k = 2 pi mode / L.
Vec2 taylor_green_velocity(double amplitude, int mode, double extent, const Point& x);

/// max over outputs of ||u_h - u_exact|| / ||u_exact|| against the decaying
/// Taylor-Green solution (exact for p = 2, f = 0 on the torus).
double taylor_green_error(const GalerkinModel& model, const Trajectory& traj, double amplitude,
                          int mode);

}  // namespace synflow
