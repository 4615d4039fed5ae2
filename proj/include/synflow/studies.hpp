/// @file studies.hpp
/// @brief Multi-run drivers: Galerkin refinement (Cauchy tables) and the
/// mollification study. Levels run as independent jobs.
#pragma once

#include <vector>

#include "synflow/solver.hpp"
#include "synflow/varexp.hpp"

namespace synflow {

struct LevelSummary {
  int n = 0;
  int m = 0;
  SpaceTimeNorms norms;
  double max_over = 0.0;
  double max_under = 0.0;
  /// Largest spatial Hölder estimate of c over the outputs.
  double holder_max = 0.0;
  double max_energy_residual = 0.0;
  double wall_seconds = 0.0;
};

/// L2(Q_T) difference between consecutive levels.
struct CauchyEntry {
  int from = 0;
  int to = 0;
  double difference = 0.0;
};

struct ConvergenceStudy {
  std::vector<LevelSummary> n_levels;
  std::vector<CauchyEntry> n_differences;
  std::vector<LevelSummary> m_levels;
  std::vector<CauchyEntry> m_differences;
};

/// N sweep at M = scenario.n_concentration (velocity differences) and M sweep at
/// N = scenario.n_velocity (concentration differences). Either list may be empty.
/// Throws InputError unless each list is strictly ascending.
ConvergenceStudy galerkin_convergence_study(const Scenario& scenario, const std::vector<int>& n_list,
                                            const std::vector<int>& m_list);

LevelSummary summarize(const GalerkinModel& model, const RunResult& result);

struct EpsilonRow {
  double epsilon = 0.0;
  /// ||u_eps - u||_{L2(Q_T)} against the unmollified run.
  double velocity_difference = 0.0;
  /// ||eta_eps * c - c||_{L2(Q_T)} on a uniform lattice sampling of the unmollified c.
  double mollify_difference = 0.0;
};

/// One unmollified baseline plus one mollified run per epsilon (each > 0).
std::vector<EpsilonRow> epsilon_study(const Scenario& scenario, const std::vector<double>& eps_list);

/// c of a finished run sampled on a uniform n x n spatial lattice at every
/// `stride`-th output time (the layout `mollify` expects).
SpaceTimeSamples sample_concentration_lattice(const GalerkinModel& model, const Trajectory& traj,
                                              int n, int stride);

}  // namespace synflow
