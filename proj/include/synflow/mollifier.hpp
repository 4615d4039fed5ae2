/// @file mollifier.hpp
/// @brief Space-time mollification with the standard bump
/// eta(z) ~ exp(-1 / (1 - |z|^2)) on the unit ball of R^3, eta_eps(z) = eps^-3 eta(z / eps).
///
/// Two variants: `mollify` convolves sampled space-time data on a uniform
/// lattice (data extended by zero outside Q_T); `LaggedMollifier` feeds the
/// solver a causal version, c_bar(x, t) = int eta_eps(y, s) c(x - y, t - eps - s),
/// built from the concentration coefficients stored over the last 2 eps in time.
#pragma once

#include <Eigen/Dense>
#include <deque>
#include <vector>

#include "synflow/basis.hpp"
#include "synflow/varexp.hpp"

namespace synflow {

/// Unnormalized bump exp(-1 / (1 - r2)) for r2 = |z|^2 < 1, else 0.
double bump(double r2);

/// Discrete (eta_eps * c) on the sample grid. Requires a uniform spatial rule and
/// uniformly spaced times (GridMismatch otherwise). The discrete kernel is
/// renormalized to unit mass, so constants are reproduced exactly away from the
/// boundary of Q_T and sup |eta_eps * c| <= sup |c|. Throws InputError for eps <= 0.
SpaceTimeSamples mollify(const SpaceTimeSamples& c, double epsilon);

/// Accepted concentration coefficients over the recent past.
class MollifierHistory {
 public:
  void clear() { entries_.clear(); }
  /// Appends an accepted state and drops entries older than needed for `window`.
  void record(double t, const Eigen::VectorXd& b, double window);
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  /// b(s) by linear interpolation in the stored states, continued linearly to
  /// (t_now, b_now); zero for s < 0.
  Eigen::VectorXd at(double s, double t_now, const Eigen::VectorXd& b_now) const;

 private:
  std::deque<std::pair<double, Eigen::VectorXd>> entries_;
};

class LaggedMollifier {
 public:
  LaggedMollifier(const ConcentrationBasis& basis, double epsilon, int n_lags = 8, int n_radial = 6,
                  int n_angular = 12);

  double epsilon() const { return epsilon_; }
  /// Time lags tau_l in (0, 2 eps).
  const std::vector<double>& lags() const { return lags_; }

  /// c_bar at the nodes at time t given the current coefficients.
  Eigen::ArrayXd evaluate(double t, const Eigen::VectorXd& b_now,
                          const MollifierHistory& history) const;

 private:
  double epsilon_;
  std::vector<double> lags_;
  std::vector<Eigen::MatrixXd> kernel_;  // per lag: Q x M, weights folded in
};

}  // namespace synflow
