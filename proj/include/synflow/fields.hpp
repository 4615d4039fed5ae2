/// @file fields.hpp
/// @brief Domain, quadrature and node-sampled scalar/vector/tensor fields.
///
/// Fields store values at quadrature nodes. Derivatives are never obtained by
/// differencing node data: a field is differentiable only when it was sampled
/// together with its analytic gradient (closed form or basis expansion).
#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace synflow {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

using Vec2 = std::array<double, 2>;

/// Row-major 2x2 Jacobian, J[2*a + b] = d v_a / d x_b.
using Jacobian = std::array<double, 4>;

/// Symmetric 2x2 tensor stored as three components (B12 == B21 by construction).
struct SymTensor {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  double frobenius() const { return std::sqrt(xx * xx + 2.0 * xy * xy + yy * yy); }
  double frobenius_sq() const { return xx * xx + 2.0 * xy * xy + yy * yy; }
  SymTensor operator+(const SymTensor& o) const { return {xx + o.xx, xy + o.xy, yy + o.yy}; }
  SymTensor operator-(const SymTensor& o) const { return {xx - o.xx, xy - o.xy, yy - o.yy}; }
  SymTensor operator*(double s) const { return {s * xx, s * xy, s * yy}; }
  bool operator==(const SymTensor&) const = default;
};

/// Double contraction A:B.
inline double contract(const SymTensor& a, const SymTensor& b) {
  return a.xx * b.xx + 2.0 * a.xy * b.xy + a.yy * b.yy;
}

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Vec2& a) { return std::hypot(a[0], a[1]); }

inline SymTensor symmetric_part(const Jacobian& j) {
  return {j[0], 0.5 * (j[1] + j[2]), j[3]};
}

enum class DomainMode { UnitSquareDirichlet, PeriodicTorus };

std::string to_string(DomainMode mode);
DomainMode domain_mode_from_string(const std::string& s);

/// Space-time box Omega x (0, T).
struct Domain {
  DomainMode mode = DomainMode::UnitSquareDirichlet;
  double extent = 1.0;
  double t_final = 1.0;

  static Domain unit_square(double t_final = 1.0);
  static Domain torus(double t_final = 1.0);

  double area() const { return extent * extent; }
  /// Throws InputError unless extent > 0 and t_final > 0.
  void validate() const;
};

enum class QuadratureKind { GaussLegendre, Uniform };

/// Tensor-product rule on Omega. Node index q = iy * resolution + ix.
class Quadrature {
 public:
  /// Gauss-Legendre on the square, exact for tensor polynomials of degree 2n-1
  /// per axis. On the torus this falls back to the uniform periodic rule.
  static std::shared_ptr<const Quadrature> gauss_legendre(const Domain& domain, int n);
  /// Uniform rule: midpoints on the square, left endpoints on the torus
  /// (exact for trigonometric polynomials below the Nyquist frequency).
  static std::shared_ptr<const Quadrature> uniform(const Domain& domain, int n);
  /// Default rule for a domain mode: 64x64 GL on the square, 64x64 uniform on the torus.
  static std::shared_ptr<const Quadrature> make_default(const Domain& domain, int n = 64);

  const Domain& domain() const { return domain_; }
  QuadratureKind kind() const { return kind_; }
  int resolution() const { return n_; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<Point>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  /// 1D abscissae along each axis.
  const std::vector<double>& axis() const { return axis_; }
  /// Polynomial degree integrated exactly per axis (GL), or -1 for trig rules.
  int exact_degree() const { return kind_ == QuadratureKind::GaussLegendre ? 2 * n_ - 1 : -1; }
  /// Smallest spacing between adjacent axis nodes.
  double min_spacing() const;

 private:
  Quadrature(Domain domain, QuadratureKind kind, int n, std::vector<double> axis,
             std::vector<double> axis_weights);

  Domain domain_;
  QuadratureKind kind_;
  int n_;
  std::vector<double> axis_;
  std::vector<Point> nodes_;
  std::vector<double> weights_;
};

using QuadraturePtr = std::shared_ptr<const Quadrature>;

struct ScalarField {
  QuadraturePtr quad;
  std::vector<double> values;
  std::optional<std::vector<Vec2>> gradient;

  bool differentiable() const { return gradient.has_value(); }
};

struct VectorField {
  QuadraturePtr quad;
  std::vector<Vec2> values;
  std::optional<std::vector<Jacobian>> jacobian;

  bool differentiable() const { return jacobian.has_value(); }
};

struct SymTensorField {
  QuadraturePtr quad;
  std::vector<SymTensor> values;
};

using ScalarFn = std::function<double(const Point&)>;
using GradientFn = std::function<Vec2(const Point&)>;
using VectorFn = std::function<Vec2(const Point&)>;
using JacobianFn = std::function<Jacobian(const Point&)>;

ScalarField sample(const QuadraturePtr& quad, const ScalarFn& value);
ScalarField sample(const QuadraturePtr& quad, const ScalarFn& value, const GradientFn& gradient);
VectorField sample(const QuadraturePtr& quad, const VectorFn& value);
VectorField sample(const QuadraturePtr& quad, const VectorFn& value, const JacobianFn& jacobian);

/// 1/2 (grad v + grad v^T) at the nodes. Throws NonDifferentiableField for node-only fields.
SymTensorField sym_gradient(const VectorField& v);

/// d1 v1 + d2 v2 at the nodes. Throws NonDifferentiableField for node-only fields.
ScalarField divergence(const VectorField& v);

/// Quadrature L2 inner products. Throw QuadratureMismatch for fields on different rules.
double l2_inner(const ScalarField& f, const ScalarField& g);
double l2_inner(const VectorField& f, const VectorField& g);
double l2_inner(const SymTensorField& f, const SymTensorField& g);

double l2_norm(const ScalarField& f);
double l2_norm(const VectorField& f);

}  // namespace synflow
