#include "synflow/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "synflow/errors.hpp"

namespace synflow {

std::string to_string(Scheme s) {
  return s == Scheme::RK4Adaptive ? "rk4_adaptive" : "implicit_euler";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "rk4_adaptive") return Scheme::RK4Adaptive;
  if (s == "implicit_euler") return Scheme::ImplicitEuler;
  throw InputError("unknown integrator scheme '" + s + "' (expected rk4_adaptive|implicit_euler)");
}

namespace {

Eigen::VectorXd rk4_from(OdeSystem& sys, double t, const Eigen::VectorXd& y,
                         const Eigen::VectorXd& k1, double dt) {
  const Eigen::VectorXd k2 = sys.rhs(t + 0.5 * dt, y + 0.5 * dt * k1);
  const Eigen::VectorXd k3 = sys.rhs(t + 0.5 * dt, y + 0.5 * dt * k2);
  const Eigen::VectorXd k4 = sys.rhs(t + dt, y + dt * k3);
  return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

bool finite(const Eigen::VectorXd& v) { return v.allFinite(); }

StepResult rk4_adaptive(OdeSystem& sys, double t, const Eigen::VectorXd& y, double dt,
                        const IntegratorSettings& s) {
  StepResult r;
  const Eigen::VectorXd k1 = sys.rhs(t, y);
  r.rhs_evaluations = 1;
  for (;;) {
    if (dt < s.dt_min) {
      char msg[128];
      std::snprintf(msg, sizeof msg, "step size %.3g fell below dt_min = %.3g at t = %.6g", dt, s.dt_min, t);
      throw StepSizeUnderflow(msg);
    }
    const Eigen::VectorXd full = rk4_from(sys, t, y, k1, dt);
    const Eigen::VectorXd half = rk4_from(sys, t, y, k1, 0.5 * dt);
    const Eigen::VectorXd k1h = sys.rhs(t + 0.5 * dt, half);
    const Eigen::VectorXd two = rk4_from(sys, t + 0.5 * dt, half, k1h, 0.5 * dt);
    r.rhs_evaluations += 10;

    double err = 0.0;
    if (finite(two) && finite(full)) {
      for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double scale = s.atol + s.rtol * std::max(std::abs(y[i]), std::abs(two[i]));
        err = std::max(err, std::abs(two[i] - full[i]) / (15.0 * scale));
      }
    } else {
      err = std::numeric_limits<double>::infinity();
    }
    if (err <= 1.0) {
      r.t = t + dt;
      r.y = two;
      r.dt_taken = dt;
      r.error = err;
      const double grow = err == 0.0 ? 4.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 4.0);
      r.dt_next = std::min(dt * grow, s.dt_max);
      return r;
    }
    ++r.rejected;
    dt *= 0.5;
  }
}

StepResult implicit_euler(OdeSystem& sys, double t, const Eigen::VectorXd& y, double dt,
                          const IntegratorSettings& s) {
  StepResult r;
  const double t1 = t + dt;
  const Eigen::VectorXd lin = sys.linear_diagonal(y.size());
  const Eigen::ArrayXd denom = 1.0 + dt * lin.array();
  Eigen::VectorXd yk = y;
  double first = -1.0;
  for (int it = 0; it < s.fixed_point_max_iterations; ++it) {
    const Eigen::VectorXd f = sys.rhs(t1, yk);
    ++r.rhs_evaluations;
    const Eigen::VectorXd res = yk - y - dt * f;
    const double rn = res.allFinite() ? res.cwiseAbs().maxCoeff() : std::numeric_limits<double>::infinity();
    if (first < 0.0) first = rn;
    if (!std::isfinite(rn) || rn > 1e6 * std::max(first, 1.0)) {
      throw FixedPointDivergence("implicit Euler fixed-point iteration diverged at t = " +
                                 std::to_string(t));
    }
    if (rn <= s.fixed_point_tol) {
      r.t = t1;
      r.y = yk;
      r.dt_taken = dt;
      r.dt_next = dt;
      r.error = rn;
      return r;
    }
    yk = ((y + dt * (f + lin.cwiseProduct(yk))).array() / denom).matrix();
  }
  throw FixedPointDivergence("implicit Euler fixed-point iteration did not converge in " +
                             std::to_string(s.fixed_point_max_iterations) + " iterations");
}

}  // namespace

Eigen::VectorXd rk4_step(OdeSystem& sys, double t, const Eigen::VectorXd& y, double dt) {
  return rk4_from(sys, t, y, sys.rhs(t, y), dt);
}

StepResult step(OdeSystem& sys, double t, const Eigen::VectorXd& y, double dt, Scheme scheme,
                const IntegratorSettings& settings) {
  if (!(dt > 0.0)) throw InputError("step: dt must be > 0");
  return scheme == Scheme::RK4Adaptive ? rk4_adaptive(sys, t, y, dt, settings)
                                       : implicit_euler(sys, t, y, dt, settings);
}

Eigen::VectorXd advance(OdeSystem& sys, double t, Eigen::VectorXd y, double t_end,
                        const IntegratorSettings& settings, double& dt_hint, AdvanceStats& stats) {
  const bool implicit = settings.scheme == Scheme::ImplicitEuler;
  while (t < t_end) {
    const double remaining = t_end - t;
    double dt = implicit ? settings.implicit_dt : dt_hint;
    // Avoid leaving a sliver shorter than a rounding error before t_end.
    const bool last = dt >= remaining * (1.0 - 1e-12);
    if (last) dt = remaining;
    StepResult r = step(sys, t, y, dt, settings.scheme, settings);
    stats.accepted += 1;
    stats.rejected += r.rejected;
    stats.rhs_evaluations += r.rhs_evaluations;
    const bool landed = last && r.dt_taken == dt;
    t = landed ? t_end : r.t;
    y = std::move(r.y);
    // A truncated final step says little about the natural step size; keep the old hint.
    if (!implicit) dt_hint = landed ? std::max(dt_hint, r.dt_next) : r.dt_next;
    sys.accept(t, y);
  }
  return y;
}

}  // namespace synflow
