#include "synflow/fields.hpp"

#include <algorithm>
#include <numbers>

#include "synflow/errors.hpp"
#include "synflow/numeric.hpp"

namespace synflow {

std::string to_string(DomainMode mode) {
  return mode == DomainMode::UnitSquareDirichlet ? "square" : "torus";
}

DomainMode domain_mode_from_string(const std::string& s) {
  if (s == "square") return DomainMode::UnitSquareDirichlet;
  if (s == "torus") return DomainMode::PeriodicTorus;
  throw InputError("unknown domain mode '" + s + "' (expected square|torus)");
}

Domain Domain::unit_square(double t_final) {
  return {DomainMode::UnitSquareDirichlet, 1.0, t_final};
}

Domain Domain::torus(double t_final) {
  return {DomainMode::PeriodicTorus, 2.0 * std::numbers::pi, t_final};
}

void Domain::validate() const {
  if (!(extent > 0.0) || !std::isfinite(extent)) throw InputError("domain extent must be > 0");
  if (!(t_final > 0.0) || !std::isfinite(t_final)) throw InputError("t_final must be > 0");
}

Quadrature::Quadrature(Domain domain, QuadratureKind kind, int n, std::vector<double> axis,
                       std::vector<double> axis_weights)
    : domain_(domain), kind_(kind), n_(n), axis_(std::move(axis)) {
  nodes_.reserve(static_cast<std::size_t>(n) * n);
  weights_.reserve(static_cast<std::size_t>(n) * n);
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      nodes_.push_back({axis_[ix], axis_[iy]});
      weights_.push_back(axis_weights[ix] * axis_weights[iy]);
    }
  }
}

QuadraturePtr Quadrature::gauss_legendre(const Domain& domain, int n) {
  domain.validate();
  if (n < 1) throw InputError("quadrature resolution must be >= 1");
  if (domain.mode == DomainMode::PeriodicTorus) return uniform(domain, n);
  auto [x, w] = synflow::gauss_legendre(n, 0.0, domain.extent);
  return std::shared_ptr<const Quadrature>(
      new Quadrature(domain, QuadratureKind::GaussLegendre, n, std::move(x), std::move(w)));
}

QuadraturePtr Quadrature::uniform(const Domain& domain, int n) {
  domain.validate();
  if (n < 1) throw InputError("quadrature resolution must be >= 1");
  const double h = domain.extent / n;
  const double shift = domain.mode == DomainMode::PeriodicTorus ? 0.0 : 0.5;
  std::vector<double> x(n), w(n, h);
  for (int i = 0; i < n; ++i) x[i] = (i + shift) * h;
  return std::shared_ptr<const Quadrature>(
      new Quadrature(domain, QuadratureKind::Uniform, n, std::move(x), std::move(w)));
}

QuadraturePtr Quadrature::make_default(const Domain& domain, int n) {
  return domain.mode == DomainMode::PeriodicTorus ? uniform(domain, n) : gauss_legendre(domain, n);
}

double Quadrature::min_spacing() const {
  double h = domain_.extent;
  for (std::size_t i = 1; i < axis_.size(); ++i) h = std::min(h, axis_[i] - axis_[i - 1]);
  return h;
}

ScalarField sample(const QuadraturePtr& quad, const ScalarFn& value) {
  ScalarField f{quad, {}, std::nullopt};
  f.values.reserve(quad->size());
  for (const auto& p : quad->nodes()) f.values.push_back(value(p));
  return f;
}

ScalarField sample(const QuadraturePtr& quad, const ScalarFn& value, const GradientFn& gradient) {
  ScalarField f = sample(quad, value);
  std::vector<Vec2> g;
  g.reserve(quad->size());
  for (const auto& p : quad->nodes()) g.push_back(gradient(p));
  f.gradient = std::move(g);
  return f;
}

VectorField sample(const QuadraturePtr& quad, const VectorFn& value) {
  VectorField f{quad, {}, std::nullopt};
  f.values.reserve(quad->size());
  for (const auto& p : quad->nodes()) f.values.push_back(value(p));
  return f;
}

VectorField sample(const QuadraturePtr& quad, const VectorFn& value, const JacobianFn& jacobian) {
  VectorField f = sample(quad, value);
  std::vector<Jacobian> j;
  j.reserve(quad->size());
  for (const auto& p : quad->nodes()) j.push_back(jacobian(p));
  f.jacobian = std::move(j);
  return f;
}

SymTensorField sym_gradient(const VectorField& v) {
  if (!v.jacobian) throw NonDifferentiableField("sym_gradient: field has no analytic derivative data");
  SymTensorField d{v.quad, {}};
  d.values.reserve(v.jacobian->size());
  for (const auto& j : *v.jacobian) d.values.push_back(symmetric_part(j));
  return d;
}

ScalarField divergence(const VectorField& v) {
  if (!v.jacobian) throw NonDifferentiableField("divergence: field has no analytic derivative data");
  ScalarField d{v.quad, {}, std::nullopt};
  d.values.reserve(v.jacobian->size());
  for (const auto& j : *v.jacobian) d.values.push_back(j[0] + j[3]);
  return d;
}

namespace {

void require_same(const QuadraturePtr& a, const QuadraturePtr& b, std::size_t na, std::size_t nb) {
  const bool same = a && b &&
                    (a == b || (a->kind() == b->kind() && a->resolution() == b->resolution() &&
                                a->domain().mode == b->domain().mode &&
                                a->domain().extent == b->domain().extent));
  if (!same || na != nb) {
    throw QuadratureMismatch("fields are sampled on different quadrature rules");
  }
}

template <class F>
double weighted_sum(const Quadrature& q, F&& integrand) {
  const auto& w = q.weights();
  std::vector<double> terms(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) terms[i] = w[i] * integrand(i);
  return pairwise_sum(terms);
}

}  // namespace

double l2_inner(const ScalarField& f, const ScalarField& g) {
  require_same(f.quad, g.quad, f.values.size(), g.values.size());
  return weighted_sum(*f.quad, [&](std::size_t i) { return f.values[i] * g.values[i]; });
}

double l2_inner(const VectorField& f, const VectorField& g) {
  require_same(f.quad, g.quad, f.values.size(), g.values.size());
  return weighted_sum(*f.quad, [&](std::size_t i) { return dot(f.values[i], g.values[i]); });
}

double l2_inner(const SymTensorField& f, const SymTensorField& g) {
  require_same(f.quad, g.quad, f.values.size(), g.values.size());
  return weighted_sum(*f.quad, [&](std::size_t i) { return contract(f.values[i], g.values[i]); });
}

double l2_norm(const ScalarField& f) { return std::sqrt(l2_inner(f, f)); }
double l2_norm(const VectorField& f) { return std::sqrt(l2_inner(f, f)); }

}  // namespace synflow
