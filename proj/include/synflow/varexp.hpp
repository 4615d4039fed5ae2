/// @file varexp.hpp
/// @brief Variable-exponent Lebesgue toolkit on sampled space-time data:
/// modulars, Luxembourg norms, Hölder/Young verifiers, the parabolic metric,
/// parabolic Hölder seminorm estimates and log-Hölder moduli.
#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "synflow/fields.hpp"

namespace synflow {

struct SpaceTimePoint {
  double x = 0.0;
  double y = 0.0;
  double t = 0.0;
};

/// Tensor grid of Q_T: a spatial quadrature times a time grid with trapezoid weights.
/// Sample index i = it * space->size() + q.
class SpaceTimeGrid {
 public:
  static std::shared_ptr<const SpaceTimeGrid> make(QuadraturePtr space, std::vector<double> times);
  /// n_intervals + 1 uniform time levels on [0, t_final].
  static std::shared_ptr<const SpaceTimeGrid> uniform(QuadraturePtr space, double t_final,
                                                      int n_intervals);

  const QuadraturePtr& space() const { return space_; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return weights_.size(); }
  std::size_t space_size() const { return space_->size(); }
  SpaceTimePoint point(std::size_t i) const;
  double measure() const;

 private:
  SpaceTimeGrid(QuadraturePtr space, std::vector<double> times);

  QuadraturePtr space_;
  std::vector<double> times_;
  std::vector<double> weights_;
};

using SpaceTimeGridPtr = std::shared_ptr<const SpaceTimeGrid>;

struct SpaceTimeSamples {
  SpaceTimeGridPtr grid;
  std::vector<double> values;
};

/// Exponent samples with cached bounds; construction enforces 1 < p_min <= p_max < inf.
struct ExponentField {
  SpaceTimeGridPtr grid;
  std::vector<double> values;
  double p_min = 0.0;
  double p_max = 0.0;

  static ExponentField make(SpaceTimeGridPtr grid, std::vector<double> values);
  static ExponentField constant(SpaceTimeGridPtr grid, double p);
};

/// Sum_z w_z |f(z)|^p(z) over raw weighted samples.
double modular(std::span<const double> f, std::span<const double> p,
               std::span<const double> weights);
double modular(const SpaceTimeSamples& f, const ExponentField& p);

/// inf { lambda > 0 : modular(f / lambda) <= 1 } by bracketing and log-scale bisection.
/// Terminates when |modular(f / lambda) - 1| <= tol; returns 0 for f == 0.
double luxembourg_norm(std::span<const double> f, std::span<const double> p,
                       std::span<const double> weights, double tol = 1e-10);
double luxembourg_norm(const SpaceTimeSamples& f, const ExponentField& p, double tol = 1e-10);

/// ||u||_{L2(Q_T)} + || |grad u| ||_{L^p(.)(Q_T)} from samples of |u| and |grad u|.
double variable_sobolev_norm(const SpaceTimeSamples& u_magnitude,
                             const SpaceTimeSamples& grad_magnitude, const ExponentField& p,
                             double tol = 1e-10);

struct InequalityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  /// Hölder: ||fg||_s / (||f||_p ||g||_q); Young: lhs / rhs.
  double ratio = 0.0;
  bool holds = true;
};

/// Checks ||fg||_s <= 2 ||f||_p ||g||_q. Throws ExponentMismatch unless 1/s = 1/p + 1/q.
InequalityReport holder_check(const SpaceTimeSamples& f, const SpaceTimeSamples& g,
                              const ExponentField& p, const ExponentField& q,
                              const ExponentField& s);

/// Checks int |fg|^s <= int |f|^p + int |g|^q. Same precondition as holder_check.
InequalityReport young_check(const SpaceTimeSamples& f, const SpaceTimeSamples& g,
                             const ExponentField& p, const ExponentField& q,
                             const ExponentField& s);

/// |x1 - x2| + |t1 - t2|^(1/2).
double parabolic_distance(const SpaceTimePoint& a, const SpaceTimePoint& b);

/// Euclidean distance in R^3.
double euclidean_distance(const SpaceTimePoint& a, const SpaceTimePoint& b);

/// Lower estimate of the C^{alpha, alpha/2} seminorm: max quotient over all
/// grid-adjacent pairs plus n_pairs random pairs (deterministic in seed).
double parabolic_holder_seminorm(const SpaceTimeSamples& f, double alpha, int n_pairs,
                                 std::uint64_t seed);

/// sup over sample pairs with 0 < |z1 - z2| <= threshold of |p1 - p2| (-log |z1 - z2|).
/// All pairs are visited, so cost is quadratic in the grid size.
double log_holder_modulus(const ExponentField& p, double threshold);

/// Constant C with x^(alpha/2) <= C / (-log x) on (0, 1/2): C = 2 / (e alpha).
double holder_log_constant(double alpha);

struct HolderLogInclusionReport {
  double constant = 0.0;
  /// max over pairs of d_p^alpha (-log|z1 - z2|) / (C 2^alpha); the bound holds iff <= 1.
  double max_ratio = 0.0;
  long pairs = 0;
  bool holds = true;
};

/// Samples n_pairs pairs in [0, L]^2 x [0, T] with 0 < |z1 - z2| < 1/8 and checks
/// d_p(z1, z2)^alpha <= C 2^alpha / (-log |z1 - z2|).
HolderLogInclusionReport holder_log_inclusion_check(double alpha, double extent, double t_final,
                                                    int n_pairs, std::uint64_t seed);

}  // namespace synflow
