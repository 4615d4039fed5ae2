#include "synflow/constitutive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace synflow {

std::string to_string(IndexKind kind) {
  switch (kind) {
    case IndexKind::PiecewiseLinearInC:
      return "piecewise_linear";
    case IndexKind::ExponentialInC:
      return "exponential";
    case IndexKind::PrescribedInXT:
      return "prescribed";
  }
  return "piecewise_linear";
}

IndexKind index_kind_from_string(const std::string& s) {
  if (s == "piecewise_linear") return IndexKind::PiecewiseLinearInC;
  if (s == "exponential") return IndexKind::ExponentialInC;
  if (s == "prescribed") return IndexKind::PrescribedInXT;
  throw InputError("unknown index kind '" + s + "' (expected piecewise_linear|exponential|prescribed)");
}

PowerIndexFamily PowerIndexFamily::constant(double p) {
  return {IndexKind::PiecewiseLinearInC, p, p, 1.0, 0.0, 1.0};
}

PowerIndexFamily PowerIndexFamily::piecewise_linear(double p_min, double p_max, double c_ref) {
  return {IndexKind::PiecewiseLinearInC, p_min, p_max, c_ref, 0.0, 1.0};
}

PowerIndexFamily PowerIndexFamily::exponential(double p_min, double p_max, double c_ref) {
  return {IndexKind::ExponentialInC, p_min, p_max, c_ref, 0.0, 1.0};
}

PowerIndexFamily PowerIndexFamily::prescribed(double p_min, double p_max, double omega,
                                              double extent) {
  return {IndexKind::PrescribedInXT, p_min, p_max, 1.0, omega, extent};
}

double PowerIndexFamily::lipschitz_constant() const {
  const double span = p_max - p_min;
  switch (kind) {
    case IndexKind::PiecewiseLinearInC:
    case IndexKind::ExponentialInC:
      return span / c_ref;
    case IndexKind::PrescribedInXT: {
      const double kx = 2.0 * std::numbers::pi / extent;
      return 0.5 * span * std::hypot(kx, omega);
    }
  }
  return 0.0;
}

void PowerIndexFamily::validate() const {
  if (!(p_min > 1.0) || !(p_max >= p_min) || !std::isfinite(p_max)) {
    throw ExponentOutOfRange("power index bounds must satisfy 1 < p_min <= p_max < inf");
  }
  if (!(c_ref > 0.0)) throw InputError("index.c_ref must be > 0");
  if (!(extent > 0.0)) throw InputError("index extent must be > 0");
}

double power_index(const PowerIndexFamily& family, double c, const Point& x, double t) {
  const double cc = std::max(c, 0.0);
  const double span = family.p_max - family.p_min;
  switch (family.kind) {
    case IndexKind::PiecewiseLinearInC:
      return family.p_max - span * std::min(1.0, cc / family.c_ref);
    case IndexKind::ExponentialInC:
      return family.p_min + span * std::exp(-cc / family.c_ref);
    case IndexKind::PrescribedInXT: {
      const double s = std::sin(2.0 * std::numbers::pi * x.x / family.extent);
      return family.p_min + span * 0.5 * (1.0 + s * std::cos(family.omega * t));
    }
  }
  return family.p_max;
}

double dual_exponent(double p) {
  if (!(p > 1.0 + 1e-12)) throw ExponentOutOfRange("dual_exponent requires p > 1");
  return p / (p - 1.0);
}

SymTensor StressModel::evaluate(double p, const SymTensor& b) const {
  const double s2 = b.frobenius_sq();
  const double visc = (p == 2.0) ? nu0 : nu0 * std::pow(nu1 + nu2 * s2, 0.5 * (p - 2.0));
  return b * (2.0 * visc);
}

void StressModel::validate() const {
  if (!(nu0 > 0.0) || !(nu1 > 0.0) || !(nu2 >= 0.0)) {
    throw InputError("stress requires nu0 > 0, nu1 > 0, nu2 >= 0");
  }
  index.validate();
}

double growth_constant(double nu0, double nu1, double nu2, double p_min, double p_max) {
  // For p >= 2: (nu1 + nu2 s^2)^((p-2)/2) s <= (2 max(nu1, nu2))^((p-2)/2) (s^(p-1) + 1).
  // For p < 2:  (nu1 + nu2 s^2)^((p-2)/2) s <= min(nu1, nu2)^((p-2)/2) (s^(p-1) + 1).
  double factor = 1.0;
  if (p_max > 2.0) {
    const double base = 2.0 * std::max(nu1, nu2);
    factor = std::max(factor, std::pow(base, 0.5 * (p_max - 2.0)));
  }
  if (p_min < 2.0) {
    const double base = std::min(nu1, nu2);
    if (base > 0.0) factor = std::max(factor, std::pow(base, 0.5 * (p_min - 2.0)));
  }
  return 2.0 * nu0 * factor;
}

StressConstants sweep_coercivity_constants(double nu0, double nu1, double nu2, double p_min,
                                           double p_max) {
  constexpr int kP = 201;
  constexpr int kS = 2001;
  StressModel probe;
  probe.nu0 = nu0;
  probe.nu1 = nu1;
  probe.nu2 = nu2;

  auto p_at = [&](int i) {
    return kP == 1 || p_max == p_min ? p_min : p_min + (p_max - p_min) * i / (kP - 1);
  };

  // Asymptotically S:B ~ a s^p and |S|^p' ~ a^p' s^p with a = 2 nu0 nu2^((p-2)/2).
  double c2 = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kP; ++i) {
    const double p = p_at(i);
    const double a = nu2 > 0.0 ? 2.0 * nu0 * std::pow(nu2, 0.5 * (p - 2.0))
                               : 2.0 * nu0 * std::pow(nu1, 0.5 * (p - 2.0));
    c2 = std::min(c2, a / (1.0 + std::pow(a, dual_exponent(p))));
  }
  c2 *= 0.5;

  double deficit = 0.0;
  for (int i = 0; i < kP; ++i) {
    const double p = p_at(i);
    const double pd = dual_exponent(p);
    for (int k = 0; k < kS; ++k) {
      // log-spaced |B| in [1e-6, 1e3], plus |B| = 0
      const double s = k == 0 ? 0.0 : std::pow(10.0, -6.0 + 9.0 * (k - 1) / (kS - 2));
      const SymTensor b{s, 0.0, 0.0};
      const SymTensor sv = probe.evaluate(p, b);
      const double lhs = contract(sv, b);
      const double rhs = c2 * (std::pow(s, p) + std::pow(sv.frobenius(), pd));
      deficit = std::max(deficit, rhs - lhs);
    }
  }
  return {growth_constant(nu0, nu1, nu2, p_min, p_max), c2, 1.05 * deficit + 1e-9};
}

StressModel StressModel::make(double nu0, const PowerIndexFamily& index, double nu1, double nu2) {
  StressModel m;
  m.nu0 = nu0;
  m.nu1 = nu1;
  m.nu2 = nu2;
  m.index = index;
  m.validate();
  m.constants = sweep_coercivity_constants(nu0, nu1, nu2, index.p_min, index.p_max);
  return m;
}

SymTensor stress(const StressModel& model, double c, const SymTensor& b, const Point& x,
                 double t) {
  return model.evaluate(power_index(model.index, c, x, t), b);
}

void FluxModel::validate() const {
  if (!(k0 > 0.0) || !(k1 >= 0.0)) throw InputError("flux requires k0 > 0 and k1 >= 0");
}

Vec2 flux(const FluxModel& model, double /*c*/, const Vec2& g, const SymTensor& b) {
  const double k = model.coefficient(b.frobenius());
  return {k * g[0], k * g[1]};
}

StructureViolation::StructureViolation(StructureReport report, StructureWitness witness)
    : Error("structure violation in check '" + witness.check + "' (value " +
            std::to_string(witness.value) + ")"),
      report_(std::move(report)),
      witness_(std::move(witness)) {}

namespace {

SymTensor random_tensor(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  SymTensor b;
  b.xx = u(rng);
  b.xy = u(rng);
  b.yy = u(rng);
  return b;
}

void record(StructureReport& r, StructureWitness w) {
  ++r.violations;
  if (!r.witness) r.witness = std::move(w);
}

}  // namespace

StructureReport check_structure(const StressModel& model, int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw InputError("check_structure requires n_samples >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uc(0.0, 10.0 * model.index.c_ref);
  std::uniform_real_distribution<double> ux(0.0, model.index.extent);
  std::uniform_real_distribution<double> ut(0.0, 1.0);

  const auto& k = model.constants;
  StructureReport r;
  r.n_samples = n_samples;
  r.growth_ratio_min = r.monotonicity_gap_min = r.coercivity_gap_min =
      std::numeric_limits<double>::infinity();
  r.growth_ratio_max = r.coercivity_gap_max = -std::numeric_limits<double>::infinity();

  for (int i = 0; i < n_samples; ++i) {
    const double c = uc(rng);
    const Point x{ux(rng), ux(rng)};
    const double t = ut(rng);
    const SymTensor b1 = random_tensor(rng);
    const SymTensor b2 = random_tensor(rng);
    const double p = power_index(model.index, c, x, t);
    const SymTensor s1 = model.evaluate(p, b1);
    const SymTensor s2 = model.evaluate(p, b2);

    const double n1 = b1.frobenius();
    const double growth = s1.frobenius() / (std::pow(n1, p - 1.0) + 1.0);
    r.growth_ratio_min = std::min(r.growth_ratio_min, growth);
    r.growth_ratio_max = std::max(r.growth_ratio_max, growth);
    if (growth > k.c1 * (1.0 + 1e-12)) record(r, {"growth", c, b1, b2, {0, 0}, growth});

    const SymTensor db = b1 - b2;
    const double db2 = db.frobenius_sq();
    if (db2 > 0.0) {
      const double gap = contract(s1 - s2, db);
      r.monotonicity_gap_min = std::min(r.monotonicity_gap_min, gap / db2);
      if (!(gap > 1e-14 * db2)) record(r, {"monotonicity", c, b1, b2, {0, 0}, gap});
    }

    const double coer = contract(s1, b1) -
                        k.c2 * (std::pow(n1, p) + std::pow(s1.frobenius(), dual_exponent(p))) +
                        k.c3;
    r.coercivity_gap_min = std::min(r.coercivity_gap_min, coer);
    r.coercivity_gap_max = std::max(r.coercivity_gap_max, coer);
    if (coer < 0.0) record(r, {"coercivity", c, b1, b2, {0, 0}, coer});
  }
  if (!r.passed()) throw StructureViolation(r, *r.witness);
  return r;
}

StructureReport check_structure(const FluxModel& model, int n_samples, std::uint64_t seed,
                                double c_ref) {
  if (n_samples < 1) throw InputError("check_structure requires n_samples >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uc(0.0, 10.0 * c_ref);
  std::uniform_real_distribution<double> ug(-10.0, 10.0);

  StructureReport r;
  r.n_samples = n_samples;
  r.flux_upper_ratio_max = -std::numeric_limits<double>::infinity();
  r.flux_lower_ratio_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_samples; ++i) {
    const double c = uc(rng);
    const Vec2 g{ug(rng), ug(rng)};
    const SymTensor b = random_tensor(rng);
    const Vec2 q = flux(model, c, g, b);
    const double gn = norm(g);
    if (gn == 0.0) continue;
    const double upper = norm(q) / (model.c4() * gn);
    const double lower = dot(q, g) / (model.c5() * gn * gn);
    r.flux_upper_ratio_max = std::max(r.flux_upper_ratio_max, upper);
    r.flux_lower_ratio_min = std::min(r.flux_lower_ratio_min, lower);
    if (upper > 1.0 + 1e-14) record(r, {"flux_upper", c, b, {}, g, upper});
    if (lower < 1.0 - 1e-14) record(r, {"flux_lower", c, b, {}, g, lower});
  }
  if (!r.passed()) throw StructureViolation(r, *r.witness);
  return r;
}

}  // namespace synflow
