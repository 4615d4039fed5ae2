#include "synflow/basis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>
#include <tuple>

#include "synflow/errors.hpp"
#include "synflow/numeric.hpp"

namespace synflow {

namespace {

constexpr double kPi = std::numbers::pi;

// Ordering key for (m, n) enumeration: m^2 + n^2, then pairs with m <= n, then m.
auto enumeration_key(int m, int n) { return std::make_tuple(m * m + n * n, m > n, m); }

std::vector<VelocityGenerator> square_generator_pool(double extent) {
  constexpr int kMax = 16;
  std::vector<VelocityGenerator> pool;
  for (int m = 1; m <= kMax; ++m) {
    for (int n = 1; n <= kMax; ++n) pool.push_back({m, n, false, stream_function_rayleigh(m, n, extent)});
  }
  std::sort(pool.begin(), pool.end(), [](const auto& a, const auto& b) {
    return enumeration_key(a.m, a.n) < enumeration_key(b.m, b.n);
  });
  std::stable_sort(pool.begin(), pool.end(),
                   [](const auto& a, const auto& b) { return a.rayleigh < b.rayleigh; });
  return pool;
}

// Half-plane wave vectors (m > 0, or m == 0 and n > 0) ordered by |k|^2, then (m, n).
std::vector<std::pair<int, int>> half_plane_modes(int kmax) {
  std::vector<std::pair<int, int>> ks;
  for (int m = 0; m <= kmax; ++m) {
    for (int n = -kmax; n <= kmax; ++n) {
      if (m == 0 && n <= 0) continue;
      ks.emplace_back(m, n);
    }
  }
  std::sort(ks.begin(), ks.end(), [](const auto& a, const auto& b) {
    const int ka = a.first * a.first + a.second * a.second;
    const int kb = b.first * b.first + b.second * b.second;
    return std::tie(ka, a.first, a.second) < std::tie(kb, b.first, b.second);
  });
  return ks;
}

std::vector<VelocityGenerator> torus_generator_pool(double extent) {
  const double kk = 2.0 * kPi / extent;
  std::vector<VelocityGenerator> pool;
  for (auto [m, n] : half_plane_modes(16)) {
    const double r = kk * kk * (m * m + n * n);
    pool.push_back({m, n, false, r});
    pool.push_back({m, n, true, r});
  }
  return pool;
}

struct StreamFactors {
  double s, ds, dds;
};

// sin^2(m k x) and its first two derivatives.
StreamFactors stream_factors(int m, double kappa, double x) {
  const double a = m * kappa;
  const double sn = std::sin(a * x);
  return {sn * sn, a * std::sin(2.0 * a * x), 2.0 * a * a * std::cos(2.0 * a * x)};
}

double compensated_dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                       const std::vector<double>& w) {
  CompensatedSum s;
  for (Eigen::Index i = 0; i < a.size(); ++i) s.add(w[i] * a[i] * b[i]);
  return s.value();
}

}  // namespace

double stream_function_rayleigh(int m, int n, double extent) {
  const double m2 = double(m) * m, n2 = double(n) * n;
  const double k2 = kPi * kPi / (extent * extent);
  return k2 * (4.0 * (m2 * m2 + n2 * n2) / (m2 + n2) + (8.0 / 3.0) * m2 * n2 / (m2 + n2));
}

Vec2 generator_value(DomainMode mode, double extent, const VelocityGenerator& g, const Point& x) {
  if (mode == DomainMode::UnitSquareDirichlet) {
    const double kappa = kPi / extent;
    const auto fx = stream_factors(g.m, kappa, x.x);
    const auto fy = stream_factors(g.n, kappa, x.y);
    return {fx.s * fy.ds, -fx.ds * fy.s};
  }
  const double kk = 2.0 * kPi / extent;
  const double kn = std::sqrt(double(g.m) * g.m + double(g.n) * g.n);
  const double amp = std::sqrt(2.0) / extent;
  const double th = kk * (g.m * x.x + g.n * x.y);
  const double phi = g.sine ? std::sin(th) : std::cos(th);
  return {amp * (g.n / kn) * phi, amp * (-g.m / kn) * phi};
}

Jacobian generator_jacobian(DomainMode mode, double extent, const VelocityGenerator& g,
                            const Point& x) {
  if (mode == DomainMode::UnitSquareDirichlet) {
    const double kappa = kPi / extent;
    const auto fx = stream_factors(g.m, kappa, x.x);
    const auto fy = stream_factors(g.n, kappa, x.y);
    const double cross = fx.ds * fy.ds;
    return {cross, fx.s * fy.dds, -fx.dds * fy.s, -cross};
  }
  const double kk = 2.0 * kPi / extent;
  const double kn = std::sqrt(double(g.m) * g.m + double(g.n) * g.n);
  const double amp = std::sqrt(2.0) / extent;
  const double th = kk * (g.m * x.x + g.n * x.y);
  const double dphi = (g.sine ? std::cos(th) : -std::sin(th)) * kk * amp;
  const double e1 = g.n / kn, e2 = -g.m / kn;
  return {e1 * dphi * g.m, e1 * dphi * g.n, e2 * dphi * g.m, e2 * dphi * g.n};
}

VelocityBasis VelocityBasis::build(const QuadraturePtr& quad, int n, int max_size) {
  if (n < 1) throw InputError("velocity basis size must be >= 1");
  if (n > max_size) {
    throw BasisTooLarge("velocity basis size " + std::to_string(n) + " exceeds maximum " +
                        std::to_string(max_size));
  }
  const Domain& dom = quad->domain();
  auto pool = dom.mode == DomainMode::UnitSquareDirichlet ? square_generator_pool(dom.extent)
                                                           : torus_generator_pool(dom.extent);
  if (static_cast<int>(pool.size()) < n) throw BasisTooLarge("generator pool exhausted");
  pool.resize(n);

  VelocityBasis b;
  b.quad_ = quad;
  b.generators_ = pool;
  const auto q = static_cast<Eigen::Index>(quad->size());
  const auto& w = quad->weights();
  for (auto& v : b.values_) v.resize(q, n);
  for (auto& j : b.jacobian_) j.resize(q, n);
  for (int c = 0; c < n; ++c) {
    for (Eigen::Index i = 0; i < q; ++i) {
      const Point& x = quad->nodes()[i];
      const Vec2 v = generator_value(dom.mode, dom.extent, pool[c], x);
      const Jacobian jj = generator_jacobian(dom.mode, dom.extent, pool[c], x);
      b.values_[0](i, c) = v[0];
      b.values_[1](i, c) = v[1];
      for (int e = 0; e < 4; ++e) b.jacobian_[e](i, c) = jj[e];
    }
  }
  b.transform_ = Eigen::MatrixXd::Identity(n, n);

  auto inner = [&](int a, int c) {
    return compensated_dot(b.values_[0].col(a), b.values_[0].col(c), w) +
           compensated_dot(b.values_[1].col(a), b.values_[1].col(c), w);
  };
  auto axpy = [&](int target, double coef, int source) {
    for (auto& v : b.values_) v.col(target) -= coef * v.col(source);
    for (auto& j : b.jacobian_) j.col(target) -= coef * j.col(source);
    b.transform_.row(target) -= coef * b.transform_.row(source);
  };
  auto scale = [&](int target, double s) {
    for (auto& v : b.values_) v.col(target) *= s;
    for (auto& j : b.jacobian_) j.col(target) *= s;
    b.transform_.row(target) *= s;
  };

  // Modified Gram-Schmidt with one re-orthogonalization pass.
  for (int c = 0; c < n; ++c) {
    const double initial = std::sqrt(inner(c, c));
    for (int pass = 0; pass < 2; ++pass) {
      for (int a = 0; a < c; ++a) axpy(c, inner(a, c), a);
    }
    const double nrm = std::sqrt(inner(c, c));
    if (!(nrm > 1e-10 * initial)) throw SingularGram("velocity generators are linearly dependent");
    scale(c, 1.0 / nrm);
  }

  // Stiffness in the orthonormal coordinates.
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  for (int e = 0; e < 4; ++e) {
    const Eigen::MatrixXd& je = b.jacobian_[e];
    for (int a = 0; a < n; ++a) {
      for (int c = a; c < n; ++c) k(a, c) += compensated_dot(je.col(a), je.col(c), w);
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int c = 0; c < a; ++c) k(a, c) = k(c, a);
  }
  double off = 0.0, diag = 0.0;
  for (int a = 0; a < n; ++a) {
    diag = std::max(diag, std::abs(k(a, a)));
    for (int c = 0; c < n; ++c) {
      if (a != c) off = std::max(off, std::abs(k(a, c)));
    }
  }
  b.rayleigh_.resize(n);
  if (off <= 1e-10 * diag) {
    for (int a = 0; a < n; ++a) b.rayleigh_[a] = k(a, a);
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k);
    if (eig.info() != Eigen::Success) throw SingularGram("Ritz eigen-decomposition failed");
    Eigen::MatrixXd v = eig.eigenvectors();
    for (int c = 0; c < n; ++c) {
      Eigen::Index imax = 0;
      v.col(c).cwiseAbs().maxCoeff(&imax);
      if (v(imax, c) < 0.0) v.col(c) *= -1.0;
      b.rayleigh_[c] = eig.eigenvalues()[c];
    }
    for (auto& m : b.values_) m = (m * v).eval();
    for (auto& m : b.jacobian_) m = (m * v).eval();
    b.transform_ = (v.transpose() * b.transform_).eval();
  }
  return b;
}

VectorField VelocityBasis::field(int j) const {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(size());
  a[j] = 1.0;
  return expand(a);
}

VectorField VelocityBasis::expand(const Eigen::VectorXd& a) const {
  if (a.size() != size()) throw DimensionMismatch("velocity coefficient length mismatch");
  const Eigen::VectorXd u0 = values_[0] * a, u1 = values_[1] * a;
  Eigen::VectorXd jac[4];
  for (int e = 0; e < 4; ++e) jac[e] = jacobian_[e] * a;
  VectorField f{quad_, {}, std::vector<Jacobian>(quad_->size())};
  f.values.resize(quad_->size());
  for (std::size_t i = 0; i < quad_->size(); ++i) {
    f.values[i] = {u0[i], u1[i]};
    (*f.jacobian)[i] = {jac[0][i], jac[1][i], jac[2][i], jac[3][i]};
  }
  return f;
}

Vec2 VelocityBasis::evaluate(const Eigen::VectorXd& a, const Point& x) const {
  const Eigen::VectorXd coef = transform_.transpose() * a;
  const Domain& d = quad_->domain();
  Vec2 v{0.0, 0.0};
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    const Vec2 g = generator_value(d.mode, d.extent, generators_[i], x);
    v[0] += coef[i] * g[0];
    v[1] += coef[i] * g[1];
  }
  return v;
}

Jacobian VelocityBasis::evaluate_jacobian(const Eigen::VectorXd& a, const Point& x) const {
  const Eigen::VectorXd coef = transform_.transpose() * a;
  const Domain& d = quad_->domain();
  Jacobian j{0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    const Jacobian g = generator_jacobian(d.mode, d.extent, generators_[i], x);
    for (int e = 0; e < 4; ++e) j[e] += coef[i] * g[e];
  }
  return j;
}

namespace {

constexpr char kMagic[8] = {'S', 'Y', 'N', 'F', 'L', 'O', 'W', 'B'};
constexpr std::uint32_t kCacheVersion = 1;

struct CacheHeader {
  char magic[8];
  std::uint32_t version;
  std::uint32_t mode;
  std::uint32_t n;
  std::uint32_t resolution;
  std::uint32_t rule;
  std::uint32_t q;
  double extent;
};

CacheHeader header_for(const Quadrature& quad, int n) {
  CacheHeader h{};
  std::memcpy(h.magic, kMagic, sizeof kMagic);
  h.version = kCacheVersion;
  h.mode = static_cast<std::uint32_t>(quad.domain().mode);
  h.n = static_cast<std::uint32_t>(n);
  h.resolution = static_cast<std::uint32_t>(quad.resolution());
  h.rule = static_cast<std::uint32_t>(quad.kind());
  h.q = static_cast<std::uint32_t>(quad.size());
  h.extent = quad.domain().extent;
  return h;
}

void write_matrix(std::ofstream& out, const Eigen::MatrixXd& m) {
  out.write(reinterpret_cast<const char*>(m.data()),
            static_cast<std::streamsize>(sizeof(double) * m.size()));
}

bool read_matrix(std::ifstream& in, Eigen::MatrixXd& m, Eigen::Index rows, Eigen::Index cols) {
  m.resize(rows, cols);
  in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(sizeof(double) * m.size()));
  return static_cast<bool>(in);
}

}  // namespace

void VelocityBasis::save_cache(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write basis cache '" + path + "'");
  const CacheHeader h = header_for(*quad_, size());
  out.write(reinterpret_cast<const char*>(&h), sizeof h);
  for (const auto& g : generators_) {
    const std::int32_t mn[3] = {g.m, g.n, g.sine ? 1 : 0};
    out.write(reinterpret_cast<const char*>(mn), sizeof mn);
    out.write(reinterpret_cast<const char*>(&g.rayleigh), sizeof g.rayleigh);
  }
  out.write(reinterpret_cast<const char*>(rayleigh_.data()),
            static_cast<std::streamsize>(sizeof(double) * rayleigh_.size()));
  write_matrix(out, transform_);
  for (const auto& v : values_) write_matrix(out, v);
  for (const auto& j : jacobian_) write_matrix(out, j);
}

std::optional<VelocityBasis> VelocityBasis::load_cache(const std::string& path,
                                                       const QuadraturePtr& quad, int n) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  CacheHeader h{};
  in.read(reinterpret_cast<char*>(&h), sizeof h);
  const CacheHeader want = header_for(*quad, n);
  if (!in || std::memcmp(h.magic, want.magic, sizeof kMagic) != 0 || h.version != want.version ||
      h.mode != want.mode || h.n != want.n || h.resolution != want.resolution ||
      h.rule != want.rule || h.q != want.q || h.extent != want.extent) {
    return std::nullopt;
  }
  VelocityBasis b;
  b.quad_ = quad;
  b.generators_.resize(n);
  for (auto& g : b.generators_) {
    std::int32_t mn[3];
    in.read(reinterpret_cast<char*>(mn), sizeof mn);
    in.read(reinterpret_cast<char*>(&g.rayleigh), sizeof g.rayleigh);
    g.m = mn[0];
    g.n = mn[1];
    g.sine = mn[2] != 0;
  }
  b.rayleigh_.resize(n);
  in.read(reinterpret_cast<char*>(b.rayleigh_.data()),
          static_cast<std::streamsize>(sizeof(double) * n));
  const auto q = static_cast<Eigen::Index>(quad->size());
  if (!read_matrix(in, b.transform_, n, n)) return std::nullopt;
  for (auto& v : b.values_) {
    if (!read_matrix(in, v, q, n)) return std::nullopt;
  }
  for (auto& j : b.jacobian_) {
    if (!read_matrix(in, j, q, n)) return std::nullopt;
  }
  return b;
}

VelocityBasis VelocityBasis::build_cached(const std::string& path, const QuadraturePtr& quad, int n) {
  if (auto cached = load_cache(path, quad, n)) return std::move(*cached);
  VelocityBasis b = build(quad, n);
  b.save_cache(path);
  return b;
}

namespace {

std::vector<ConcentrationMode> concentration_modes(DomainMode mode, int m) {
  std::vector<ConcentrationMode> modes;
  if (mode == DomainMode::UnitSquareDirichlet) {
    constexpr int kMax = 32;
    std::vector<std::pair<int, int>> kl;
    for (int k = 1; k <= kMax; ++k) {
      for (int l = 1; l <= kMax; ++l) kl.emplace_back(k, l);
    }
    std::sort(kl.begin(), kl.end(), [](const auto& a, const auto& b) {
      return enumeration_key(a.first, a.second) < enumeration_key(b.first, b.second);
    });
    for (int i = 0; i < m; ++i) modes.push_back({kl[i].first, kl[i].second, false});
    return modes;
  }
  modes.push_back({0, 0, false});
  for (auto [k, l] : half_plane_modes(16)) {
    if (static_cast<int>(modes.size()) >= m) break;
    modes.push_back({k, l, false});
    if (static_cast<int>(modes.size()) >= m) break;
    modes.push_back({k, l, true});
  }
  modes.resize(m);
  return modes;
}

double mode_value_at(DomainMode mode, double extent, const ConcentrationMode& z, const Point& x) {
  if (mode == DomainMode::UnitSquareDirichlet) {
    if (x.x < 0.0 || x.x > extent || x.y < 0.0 || x.y > extent) return 0.0;
    const double kappa = kPi / extent;
    return (2.0 / extent) * std::sin(z.k * kappa * x.x) * std::sin(z.l * kappa * x.y);
  }
  if (z.k == 0 && z.l == 0) return 1.0 / extent;
  const double kk = 2.0 * kPi / extent;
  const double th = kk * (z.k * x.x + z.l * x.y);
  return (std::sqrt(2.0) / extent) * (z.sine ? std::sin(th) : std::cos(th));
}

Vec2 mode_gradient_at(DomainMode mode, double extent, const ConcentrationMode& z, const Point& x) {
  if (mode == DomainMode::UnitSquareDirichlet) {
    if (x.x < 0.0 || x.x > extent || x.y < 0.0 || x.y > extent) return {0.0, 0.0};
    const double kappa = kPi / extent;
    const double a = z.k * kappa, b = z.l * kappa;
    const double amp = 2.0 / extent;
    return {amp * a * std::cos(a * x.x) * std::sin(b * x.y),
            amp * b * std::sin(a * x.x) * std::cos(b * x.y)};
  }
  if (z.k == 0 && z.l == 0) return {0.0, 0.0};
  const double kk = 2.0 * kPi / extent;
  const double th = kk * (z.k * x.x + z.l * x.y);
  const double d = (std::sqrt(2.0) / extent) * (z.sine ? std::cos(th) : -std::sin(th)) * kk;
  return {d * z.k, d * z.l};
}

}  // namespace

ConcentrationBasis ConcentrationBasis::build(const QuadraturePtr& quad, int m, int max_size) {
  if (m < 1) throw InputError("concentration basis size must be >= 1");
  if (m > max_size) {
    throw BasisTooLarge("concentration basis size " + std::to_string(m) + " exceeds maximum " +
                        std::to_string(max_size));
  }
  const Domain& dom = quad->domain();
  ConcentrationBasis b;
  b.quad_ = quad;
  b.modes_ = concentration_modes(dom.mode, m);
  const auto q = static_cast<Eigen::Index>(quad->size());
  b.values_.resize(q, m);
  b.gradient_[0].resize(q, m);
  b.gradient_[1].resize(q, m);
  for (int k = 0; k < m; ++k) {
    for (Eigen::Index i = 0; i < q; ++i) {
      const Point& x = quad->nodes()[i];
      b.values_(i, k) = mode_value_at(dom.mode, dom.extent, b.modes_[k], x);
      const Vec2 g = mode_gradient_at(dom.mode, dom.extent, b.modes_[k], x);
      b.gradient_[0](i, k) = g[0];
      b.gradient_[1](i, k) = g[1];
    }
  }
  const auto& w = quad->weights();
  b.stiffness_.resize(m, m);
  for (int k = 0; k < m; ++k) {
    for (int l = k; l < m; ++l) {
      const double s = compensated_dot(b.gradient_[0].col(k), b.gradient_[0].col(l), w) +
                       compensated_dot(b.gradient_[1].col(k), b.gradient_[1].col(l), w);
      b.stiffness_(k, l) = b.stiffness_(l, k) = s;
    }
  }
  return b;
}

ScalarField ConcentrationBasis::field(int k) const {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(size());
  b[k] = 1.0;
  return expand(b);
}

ScalarField ConcentrationBasis::expand(const Eigen::VectorXd& b) const {
  if (b.size() != size()) throw DimensionMismatch("concentration coefficient length mismatch");
  const Eigen::VectorXd c = values_ * b;
  const Eigen::VectorXd gx = gradient_[0] * b, gy = gradient_[1] * b;
  ScalarField f{quad_, std::vector<double>(c.data(), c.data() + c.size()),
                std::vector<Vec2>(quad_->size())};
  for (std::size_t i = 0; i < quad_->size(); ++i) (*f.gradient)[i] = {gx[i], gy[i]};
  return f;
}

double ConcentrationBasis::mode_value(int k, const Point& x) const {
  const Domain& d = quad_->domain();
  return mode_value_at(d.mode, d.extent, modes_[k], x);
}

double ConcentrationBasis::evaluate(const Eigen::VectorXd& b, const Point& x) const {
  double s = 0.0;
  for (int k = 0; k < size(); ++k) s += b[k] * mode_value(k, x);
  return s;
}

Vec2 ConcentrationBasis::evaluate_gradient(const Eigen::VectorXd& b, const Point& x) const {
  const Domain& d = quad_->domain();
  Vec2 g{0.0, 0.0};
  for (int k = 0; k < size(); ++k) {
    const Vec2 gk = mode_gradient_at(d.mode, d.extent, modes_[k], x);
    g[0] += b[k] * gk[0];
    g[1] += b[k] * gk[1];
  }
  return g;
}

VelocityBasis build_velocity_basis(const Domain& domain, int n) {
  return VelocityBasis::build(Quadrature::make_default(domain), n);
}

ConcentrationBasis build_concentration_basis(const Domain& domain, int m) {
  return ConcentrationBasis::build(Quadrature::make_default(domain), m);
}

namespace {

void require_quadrature(const QuadraturePtr& a, const QuadraturePtr& b, std::size_t n) {
  const bool same = a && b &&
                    (a == b || (a->kind() == b->kind() && a->resolution() == b->resolution() &&
                                a->domain().mode == b->domain().mode &&
                                a->domain().extent == b->domain().extent));
  if (!same || n != b->size()) throw QuadratureMismatch("field and basis use different quadrature");
}

}  // namespace

Eigen::VectorXd project_L2(const VectorField& f, const VelocityBasis& basis) {
  require_quadrature(f.quad, basis.quadrature(), f.values.size());
  const auto& w = basis.quadrature()->weights();
  const auto q = static_cast<Eigen::Index>(w.size());
  Eigen::VectorXd f0(q), f1(q);
  for (Eigen::Index i = 0; i < q; ++i) {
    f0[i] = w[i] * f.values[i][0];
    f1[i] = w[i] * f.values[i][1];
  }
  return basis.values(0).transpose() * f0 + basis.values(1).transpose() * f1;
}

Eigen::VectorXd project_L2(const ScalarField& f, const ConcentrationBasis& basis) {
  require_quadrature(f.quad, basis.quadrature(), f.values.size());
  const auto& w = basis.quadrature()->weights();
  const auto q = static_cast<Eigen::Index>(w.size());
  Eigen::VectorXd fw(q);
  for (Eigen::Index i = 0; i < q; ++i) fw[i] = w[i] * f.values[i];
  return basis.values().transpose() * fw;
}

Eigen::VectorXd project_H10(const ScalarField& f, const ConcentrationBasis& basis) {
  if (!f.gradient) throw NonDifferentiableField("project_H10 needs the analytic gradient of f");
  require_quadrature(f.quad, basis.quadrature(), f.values.size());
  const auto& w = basis.quadrature()->weights();
  const auto q = static_cast<Eigen::Index>(w.size());
  Eigen::VectorXd gx(q), gy(q);
  for (Eigen::Index i = 0; i < q; ++i) {
    gx[i] = w[i] * (*f.gradient)[i][0];
    gy[i] = w[i] * (*f.gradient)[i][1];
  }
  Eigen::VectorXd rhs = basis.gradient(0).transpose() * gx + basis.gradient(1).transpose() * gy;
  Eigen::MatrixXd gram = basis.stiffness();
  if (basis.quadrature()->domain().mode == DomainMode::PeriodicTorus) {
    gram += basis.values().transpose() * (Eigen::Map<const Eigen::VectorXd>(w.data(), q).asDiagonal() *
                                          basis.values());
    rhs += project_L2(f, basis);
  }
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) throw SingularGram("H1_0 Gram matrix is not positive definite");
  return llt.solve(rhs);
}

}  // namespace synflow
