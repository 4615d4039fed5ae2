/// @file basis.hpp
/// @brief Galerkin bases: solenoidal velocity fields {w_j} and concentration
/// modes {z_k}, with the L2 and H1_0 projections.
///
/// Square mode builds w_j from stream functions psi_mn = sin^2(m pi x) sin^2(n pi y),
/// w = (d_y psi, -d_x psi), which vanish with their gradients on the boundary.
/// Generators are ordered by their Rayleigh quotient, orthonormalized by
/// modified Gram-Schmidt (compensated sums, one re-orthogonalization pass), and
/// rotated inside their span so that the stiffness <grad w_i, grad w_j> is diagonal.
/// Torus mode uses realified divergence-free Fourier modes.
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "synflow/fields.hpp"

namespace synflow {

/// One stream-function generator (square) or Fourier mode (torus).
struct VelocityGenerator {
  int m = 0;
  int n = 0;
  bool sine = false;  // torus only: sin(k.x) instead of cos(k.x)
  double rayleigh = 0.0;
};

class VelocityBasis {
 public:
  static constexpr int kDefaultMaxSize = 64;

  /// Throws BasisTooLarge for N > max_size, InputError for N < 1.
  static VelocityBasis build(const QuadraturePtr& quad, int n, int max_size = kDefaultMaxSize);

  int size() const { return static_cast<int>(rayleigh_.size()); }
  const QuadraturePtr& quadrature() const { return quad_; }
  const std::vector<double>& rayleigh() const { return rayleigh_; }
  const std::vector<VelocityGenerator>& generators() const { return generators_; }
  /// Rows: basis functions, columns: generators (w_j = sum_i T(j, i) g_i).
  const Eigen::MatrixXd& transform() const { return transform_; }

  /// Node values, Q x N, component 0 or 1.
  const Eigen::MatrixXd& values(int component) const { return values_[component]; }
  /// Node Jacobian entries, Q x N, entry e = 2 a + b for d v_a / d x_b.
  const Eigen::MatrixXd& jacobian(int entry) const { return jacobian_[entry]; }

  VectorField field(int j) const;
  /// sum_j a_j w_j at the nodes, with analytic Jacobian.
  VectorField expand(const Eigen::VectorXd& a) const;

  /// Point evaluation of sum_j a_j w_j through the generators.
  Vec2 evaluate(const Eigen::VectorXd& a, const Point& x) const;
  Jacobian evaluate_jacobian(const Eigen::VectorXd& a, const Point& x) const;

  /// Binary cache of the node data (versioned header: mode, N, resolution, rule).
  void save_cache(const std::string& path) const;
  /// Returns nullopt if the file is missing, corrupt, or built for other parameters.
  static std::optional<VelocityBasis> load_cache(const std::string& path, const QuadraturePtr& quad,
                                                 int n);
  /// Loads a matching cache or builds and (re)writes it.
  static VelocityBasis build_cached(const std::string& path, const QuadraturePtr& quad, int n);

 private:
  QuadraturePtr quad_;
  std::vector<VelocityGenerator> generators_;
  Eigen::MatrixXd transform_;
  std::vector<double> rayleigh_;
  Eigen::MatrixXd values_[2];
  Eigen::MatrixXd jacobian_[4];
};

/// Closed-form Rayleigh quotient of curl(sin^2(m pi x / L) sin^2(n pi y / L)).
double stream_function_rayleigh(int m, int n, double extent = 1.0);

/// Single generator evaluation (exposed for tests and point sampling).
Vec2 generator_value(DomainMode mode, double extent, const VelocityGenerator& g, const Point& x);
Jacobian generator_jacobian(DomainMode mode, double extent, const VelocityGenerator& g,
                            const Point& x);

struct ConcentrationMode {
  int k = 0;
  int l = 0;
  bool sine = false;  // torus only
};

class ConcentrationBasis {
 public:
  static ConcentrationBasis build(const QuadraturePtr& quad, int m, int max_size = 256);

  int size() const { return static_cast<int>(modes_.size()); }
  const QuadraturePtr& quadrature() const { return quad_; }
  const std::vector<ConcentrationMode>& modes() const { return modes_; }
  /// Q x M node values.
  const Eigen::MatrixXd& values() const { return values_; }
  /// Q x M gradient components (0: d/dx, 1: d/dy).
  const Eigen::MatrixXd& gradient(int component) const { return gradient_[component]; }
  /// G_kl = <grad z_k, grad z_l> by quadrature.
  const Eigen::MatrixXd& stiffness() const { return stiffness_; }

  ScalarField field(int k) const;
  ScalarField expand(const Eigen::VectorXd& b) const;

  double evaluate(const Eigen::VectorXd& b, const Point& x) const;
  Vec2 evaluate_gradient(const Eigen::VectorXd& b, const Point& x) const;
  /// Value of mode k; on the square it is zero outside [0, L]^2 (extension by zero).
  double mode_value(int k, const Point& x) const;

 private:
  QuadraturePtr quad_;
  std::vector<ConcentrationMode> modes_;
  Eigen::MatrixXd values_;
  Eigen::MatrixXd gradient_[2];
  Eigen::MatrixXd stiffness_;
};

VelocityBasis build_velocity_basis(const Domain& domain, int n);
ConcentrationBasis build_concentration_basis(const Domain& domain, int m);

/// Coefficients <f, w_j>. Throws QuadratureMismatch if f lives on another rule.
Eigen::VectorXd project_L2(const VectorField& f, const VelocityBasis& basis);
/// Coefficients <f, z_k>.
Eigen::VectorXd project_L2(const ScalarField& f, const ConcentrationBasis& basis);

/// Projection in the H1_0 product <grad., grad.> (square) or <grad., grad.> + <., .>
/// (torus, where constants make G singular). Needs the analytic gradient of f.
Eigen::VectorXd project_H10(const ScalarField& f, const ConcentrationBasis& basis);

}  // namespace synflow
