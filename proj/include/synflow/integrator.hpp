/// @file integrator.hpp
/// @brief Time stepping for the Galerkin ODE system.
///
/// RK4Adaptive: classical four-stage step with step-doubling error control
/// (rejection halves the step). ImplicitEuler: fixed step, fixed-point
/// iteration on the residual y - y_n - dt F(t + dt, y), preconditioned by the
/// diagonal linear part the system reports.
#pragma once

#include <Eigen/Dense>
#include <limits>
#include <string>

namespace synflow {

enum class Scheme { RK4Adaptive, ImplicitEuler };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct IntegratorSettings {
  Scheme scheme = Scheme::RK4Adaptive;
  double rtol = 1e-9;
  double atol = 1e-12;
  double dt_min = 1e-10;
  double dt_initial = 1e-3;
  double dt_max = std::numeric_limits<double>::infinity();
  /// Fixed step of the implicit scheme.
  double implicit_dt = 1e-3;
  double fixed_point_tol = 1e-10;
  int fixed_point_max_iterations = 200;
};

/// Autonomous-or-not first order system y' = F(t, y).
class OdeSystem {
 public:
  virtual ~OdeSystem() = default;
  virtual Eigen::VectorXd rhs(double t, const Eigen::VectorXd& y) = 0;
  /// Called once per accepted step (lets history-dependent systems record states).
  virtual void accept(double /*t*/, const Eigen::VectorXd& /*y*/) {}
  /// Nonnegative diagonal D with F(t, y) ~ -D y near rest; used as preconditioner.
  virtual Eigen::VectorXd linear_diagonal(Eigen::Index n) const { return Eigen::VectorXd::Zero(n); }
};

struct StepResult {
  double t = 0.0;
  Eigen::VectorXd y;
  double dt_taken = 0.0;
  /// Suggested size of the next step.
  double dt_next = 0.0;
  int rejected = 0;
  /// Step-doubling error norm (RK4) or final residual (implicit).
  double error = 0.0;
  int rhs_evaluations = 0;
};

/// One classical RK4 step, no error control.
Eigen::VectorXd rk4_step(OdeSystem& sys, double t, const Eigen::VectorXd& y, double dt);

/// One step of the chosen scheme. RK4Adaptive may shrink dt (StepSizeUnderflow
/// below dt_min); ImplicitEuler takes exactly dt (FixedPointDivergence on failure).
/// Does not call accept().
StepResult step(OdeSystem& sys, double t, const Eigen::VectorXd& y, double dt, Scheme scheme,
                const IntegratorSettings& settings);

struct AdvanceStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evaluations = 0;
};

/// Integrates from t to t_end (landing exactly on t_end), calling accept() after
/// every accepted step. dt_hint carries the adaptive step across calls.
Eigen::VectorXd advance(OdeSystem& sys, double t, Eigen::VectorXd y, double t_end,
                        const IntegratorSettings& settings, double& dt_hint, AdvanceStats& stats);

}  // namespace synflow
