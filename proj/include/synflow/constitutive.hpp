/// @file constitutive.hpp
/// @brief Concentration-dependent power-law stress, diffusion flux, and
/// numerical verifiers for their growth, monotonicity and coercivity bounds.
///
/// Stress follows the Newtonian convention S = 2 nu B with the generalized
/// viscosity nu(c, |B|) = nu0 (nu1 + nu2 |B|^2)^((p - 2) / 2); |B| is the
/// Frobenius norm. With nu1 = nu2 = 1 this is the prototype power-law model.
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "synflow/errors.hpp"
#include "synflow/fields.hpp"

namespace synflow {

enum class IndexKind { PiecewiseLinearInC, ExponentialInC, PrescribedInXT };

std::string to_string(IndexKind kind);
IndexKind index_kind_from_string(const std::string& s);

/// Power-law index p(.) with 1 < p_min <= p <= p_max < inf.
///
/// - PiecewiseLinearInC: p(c) = p_max - (p_max - p_min) min(1, c / c_ref)
/// - ExponentialInC:     p(c) = p_min + (p_max - p_min) exp(-c / c_ref)
/// - PrescribedInXT:     p(x, t) = p_min + (p_max - p_min) (1 + sin(2 pi x1 / L) cos(omega t)) / 2
struct PowerIndexFamily {
  IndexKind kind = IndexKind::PiecewiseLinearInC;
  double p_min = 1.5;
  double p_max = 2.5;
  double c_ref = 1.0;
  double omega = 0.0;
  double extent = 1.0;

  static PowerIndexFamily constant(double p);
  static PowerIndexFamily piecewise_linear(double p_min, double p_max, double c_ref);
  static PowerIndexFamily exponential(double p_min, double p_max, double c_ref);
  static PowerIndexFamily prescribed(double p_min, double p_max, double omega, double extent = 1.0);

  bool depends_on_concentration() const { return kind != IndexKind::PrescribedInXT; }
  /// Lipschitz constant of p in its argument (c, or (x, t) jointly for prescribed).
  double lipschitz_constant() const;
  /// Throws ExponentOutOfRange unless 1 < p_min <= p_max < inf; InputError for bad scales.
  void validate() const;
};

/// p at concentration c (clamped to c >= 0) and space-time point (x, t).
double power_index(const PowerIndexFamily& family, double c, const Point& x = {}, double t = 0.0);

/// p / (p - 1). Throws ExponentOutOfRange for p <= 1 + 1e-12.
double dual_exponent(double p);

/// Growth, coercivity constants C1, C2, C3 declared alongside the model.
struct StressConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
};

struct StressModel {
  double nu0 = 1.0;
  double nu1 = 1.0;
  double nu2 = 1.0;
  PowerIndexFamily index;
  StressConstants constants;

  /// Builds the model and derives C1 analytically and C2, C3 by a dense sweep.
  static StressModel make(double nu0, const PowerIndexFamily& index, double nu1 = 1.0,
                          double nu2 = 1.0);

  /// 2 nu0 (nu1 + nu2 |B|^2)^((p - 2) / 2) B for a given exponent value p.
  SymTensor evaluate(double p, const SymTensor& b) const;
  void validate() const;
};

/// S(c, B) at a space-time point (x, t matter only for prescribed exponents).
SymTensor stress(const StressModel& model, double c, const SymTensor& b, const Point& x = {},
                 double t = 0.0);

/// Upper growth constant valid on [p_min, p_max].
double growth_constant(double nu0, double nu1, double nu2, double p_min, double p_max);

/// C2 = half the asymptotic coercivity slope; C3 = 1.05 * max deficit over the
/// sweep (p, |B|) in [p_min, p_max] x [0, 1e3] plus a 1e-9 floor.
StressConstants sweep_coercivity_constants(double nu0, double nu1, double nu2, double p_min,
                                           double p_max);

/// q_c = K(c, |B|) g with K = k0 + k1 / (1 + |B|^2).
struct FluxModel {
  double k0 = 1.0;
  double k1 = 0.0;

  double coefficient(double b_norm) const { return k0 + k1 / (1.0 + b_norm * b_norm); }
  /// Upper bound C4 = k0 + k1.
  double c4() const { return k0 + k1; }
  /// Lower bound C5 = k0.
  double c5() const { return k0; }
  void validate() const;
};

Vec2 flux(const FluxModel& model, double c, const Vec2& g, const SymTensor& b);

/// A sample that violated one of the structural inequalities.
struct StructureWitness {
  std::string check;
  double c = 0.0;
  SymTensor b1;
  SymTensor b2;
  Vec2 g{0.0, 0.0};
  double value = 0.0;
};

struct StructureReport {
  int n_samples = 0;
  double growth_ratio_min = 0.0;
  double growth_ratio_max = 0.0;
  /// min over pairs of (S1 - S2):(B1 - B2) / |B1 - B2|^2
  double monotonicity_gap_min = 0.0;
  double coercivity_gap_min = 0.0;
  double coercivity_gap_max = 0.0;
  /// max |q| / (C4 |g|)
  double flux_upper_ratio_max = 0.0;
  /// min (q.g) / (C5 |g|^2)
  double flux_lower_ratio_min = 0.0;
  int violations = 0;
  std::optional<StructureWitness> witness;

  bool passed() const { return violations == 0; }
};

class StructureViolation : public Error {
 public:
  StructureViolation(StructureReport report, StructureWitness witness);
  const StructureReport& report() const { return report_; }
  const StructureWitness& witness() const { return witness_; }

 private:
  StructureReport report_;
  StructureWitness witness_;
};

/// Random sweep of growth, strict monotonicity and coercivity for the stress.
/// c in [0, 10 c_ref], tensor entries in [-10, 10]. Throws StructureViolation.
StructureReport check_structure(const StressModel& model, int n_samples, std::uint64_t seed);

/// Random sweep of the flux bounds |q| <= C4 |g| and q.g >= C5 |g|^2.
StructureReport check_structure(const FluxModel& model, int n_samples, std::uint64_t seed,
                                double c_ref = 1.0);

}  // namespace synflow
