/// @file solver.hpp
/// @brief Galerkin ODE system for velocity and concentration coefficients,
/// time integration with per-output diagnostics, and energy/max-principle reports.
///
/// Velocity u = sum a_j w_j, concentration c = sum b_k z_k, both orthonormal in L2:
///   da_j/dt = int (u (x) u):Dw_j - S(c, Du):Dw_j + f.w_j
///   db_k/dt = int c u.grad z_k - K(c, |Du|) grad c.grad z_k
/// evaluated on the shared quadrature. Pressure never appears because every w_j
/// is divergence-free.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "synflow/basis.hpp"
#include "synflow/constitutive.hpp"
#include "synflow/fields.hpp"
#include "synflow/integrator.hpp"

namespace synflow {

class LaggedMollifier;

struct GalerkinState {
  double t = 0.0;
  Eigen::VectorXd a;
  Eigen::VectorXd b;
};

/// Separable forcing f(x, t) = g(t) f0(x). Either part may be empty (zero / one).
struct Forcing {
  VectorFn spatial;
  std::function<double(double)> temporal;

  bool active() const { return static_cast<bool>(spatial); }
  double modulation(double t) const { return temporal ? temporal(t) : 1.0; }
  Vec2 operator()(const Point& x, double t) const;
};

struct Scenario {
  std::string name = "custom";
  Domain domain;
  int quadrature_resolution = 64;
  int n_velocity = 8;
  int n_concentration = 8;
  StressModel stress;
  FluxModel flux;
  Forcing forcing;
  /// Closed-form u0, projected onto the velocity basis. Ignored when
  /// u0_coefficients is set; zero when both are empty.
  VectorFn u0;
  std::optional<Eigen::VectorXd> u0_coefficients;
  /// Closed-form c0, projected onto the concentration basis; zero when empty.
  ScalarFn c0;
  double c_tilde0 = 1.0;
  /// Mollification radius of the exponent's concentration argument (0 = off).
  double epsilon = 0.0;
  IntegratorSettings integrator;
  /// Number of uniform output intervals on [0, T].
  int output_intervals = 100;

  /// Checks models, sizes, 0 <= c0 <= c_tilde0 on the nodes and c0 = 0 on the
  /// boundary of the square. Throws InputError subclasses.
  void validate() const;
};

/// Node values of every reconstructed quantity at one instant.
struct NodeFields {
  Eigen::ArrayXd u1, u2;
  /// Full velocity Jacobian entries, e = 2 a + b for d u_a / d x_b.
  Eigen::ArrayXd j[4];
  Eigen::ArrayXd d11, d12, d22;
  Eigen::ArrayXd c, cx, cy;
  /// Power-law index and stress at the nodes.
  Eigen::ArrayXd p, s11, s12, s22;
  /// Diffusion coefficient K(c, |Du|).
  Eigen::ArrayXd k;
};

struct DiagnosticsRecord {
  double t = 0.0;
  double kinetic_energy = 0.0;
  double dissipation = 0.0;
  double work = 0.0;
  double conc_energy = 0.0;
  double flux_dissipation = 0.0;
  double c_min = 0.0;
  double c_max = 0.0;
  long clamp_count = 0;
  double lux_grad_u = 0.0;
  double lux_stress = 0.0;
  double holder_c = 0.0;

  bool finite() const;
};

/// Fixed CSV column order of DiagnosticsRecord.
const std::vector<std::string>& diagnostics_columns();

/// Bases, quadrature and precomputed projections for one scenario.
class GalerkinModel {
 public:
  explicit GalerkinModel(Scenario scenario);
  ~GalerkinModel();
  GalerkinModel(GalerkinModel&&) noexcept;
  GalerkinModel& operator=(GalerkinModel&&) noexcept;

  const Scenario& scenario() const { return scenario_; }
  const QuadraturePtr& quadrature() const { return quad_; }
  const VelocityBasis& velocity_basis() const { return *vbasis_; }
  const ConcentrationBasis& concentration_basis() const { return *cbasis_; }
  int n() const { return vbasis_->size(); }
  int m() const { return cbasis_->size(); }

  /// Projected initial data at t = 0.
  GalerkinState initial_state() const;

  /// Right-hand sides. With epsilon > 0 and no history, the state is held
  /// constant over the lag window (and zero before t = 0).
  Eigen::VectorXd rhs_velocity(const GalerkinState& s) const;
  Eigen::VectorXd rhs_concentration(const GalerkinState& s) const;

  /// Both right-hand sides in one pass; c_bar overrides the concentration fed
  /// to the power-law index (mollified runs).
  void rhs(const GalerkinState& s, const Eigen::ArrayXd* c_bar, Eigen::VectorXd& da,
           Eigen::VectorXd& db) const;

  NodeFields reconstruct(const GalerkinState& s, const Eigen::ArrayXd* c_bar = nullptr) const;
  DiagnosticsRecord diagnostics(const GalerkinState& s, const Eigen::ArrayXd* c_bar = nullptr) const;

  /// Velocity at the nodes for coefficients a.
  void velocity_nodes(const Eigen::VectorXd& a, Eigen::ArrayXd& u1, Eigen::ArrayXd& u2) const;

  /// <f0, w_j>: the spatial forcing projected onto the velocity basis.
  const Eigen::VectorXd& forcing_projection() const { return forcing_proj_; }

  /// Preconditioner diagonal for the implicit scheme: nu0 lambda_j, C4 G_kk.
  Eigen::VectorXd linear_diagonal() const;

  const LaggedMollifier* mollifier() const { return mollifier_.get(); }

 private:
  void check_dims(const GalerkinState& s) const;

  Scenario scenario_;
  QuadraturePtr quad_;
  std::shared_ptr<const VelocityBasis> vbasis_;
  std::shared_ptr<const ConcentrationBasis> cbasis_;
  Eigen::ArrayXd w_;
  Eigen::MatrixXd dw12_;  // 0.5 (J12 + J21) of the basis, Q x N
  Eigen::VectorXd forcing_proj_;
  std::unique_ptr<LaggedMollifier> mollifier_;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> a;
  std::vector<Eigen::VectorXd> b;

  std::size_t size() const { return times.size(); }
  GalerkinState state(std::size_t i) const { return {times[i], a[i], b[i]}; }
};

struct RunResult {
  Trajectory trajectory;
  std::vector<DiagnosticsRecord> diagnostics;
  AdvanceStats stats;
  double wall_seconds = 0.0;
};

/// Integrates the model from 0 to T, recording state and diagnostics at the
/// output times. Deterministic for a given scenario.
RunResult run(const GalerkinModel& model);
RunResult run(const Scenario& scenario);

/// Uniform output times k T / n, k = 0..n.
std::vector<double> output_times(double t_final, int intervals);

/// |LHS - RHS| / (1 + |RHS|) of ||u||^2 + 2 int D = ||u0||^2 + 2 int W, trapezoid in time.
std::vector<double> energy_report(const std::vector<DiagnosticsRecord>& diag);
/// Same for ||c||^2 + 2 int q.grad c = ||c0||^2.
std::vector<double> concentration_energy_report(const std::vector<DiagnosticsRecord>& diag);

struct MaxMinSample {
  double t = 0.0;
  double over = 0.0;
  double under = 0.0;
};

/// over = max(0, max c - c_tilde0), under = max(0, -min c) at each output time.
std::vector<MaxMinSample> maxmin_report(const std::vector<DiagnosticsRecord>& diag,
                                        double c_tilde0);

/// Time-dependent probe in coefficient form, phi(t) = sum_j probe(t)_j w_j.
using ProbePath = std::function<Eigen::VectorXd(double)>;

/// int_{Q_T} (S(c, Du) - S(c, D phi)):(Du - D phi) over the stored outputs
/// (trapezoid in time, quadrature in space).
double minty_gap(const GalerkinModel& model, const Trajectory& traj, const ProbePath& probe);

/// L2(Q_T) norm of u^1 - u^2 on the shared output times and quadrature.
double velocity_difference(const GalerkinModel& m1, const Trajectory& t1,
                           const GalerkinModel& m2, const Trajectory& t2);
double concentration_difference(const GalerkinModel& m1, const Trajectory& t1,
                                const GalerkinModel& m2, const Trajectory& t2);

/// ||grad u||_{L^p(c)(Q_T)} and ||S||_{L^p'(c)(Q_T)} over the outputs.
struct SpaceTimeNorms {
  double lux_grad_u = 0.0;
  double lux_stress = 0.0;
};
SpaceTimeNorms space_time_norms(const GalerkinModel& model, const Trajectory& traj);

/// Spatial C^{1/2} seminorm estimate of c at one state (adjacent + 256 random node pairs).
double holder_estimate(const GalerkinModel& model, const GalerkinState& s);

}  // namespace synflow
