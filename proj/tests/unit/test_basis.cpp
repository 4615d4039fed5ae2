#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "synflow/basis.hpp"
#include "synflow/config.hpp"
#include "synflow/errors.hpp"
#include "synflow/numeric.hpp"

using namespace synflow;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::MatrixXd velocity_gram(const VelocityBasis& b) {
  const auto& w = b.quadrature()->weights();
  const Eigen::Map<const Eigen::VectorXd> wv(w.data(), static_cast<Eigen::Index>(w.size()));
  return b.values(0).transpose() * wv.asDiagonal() * b.values(0) +
         b.values(1).transpose() * wv.asDiagonal() * b.values(1);
}

Eigen::MatrixXd velocity_stiffness(const VelocityBasis& b) {
  const auto& w = b.quadrature()->weights();
  const Eigen::Map<const Eigen::VectorXd> wv(w.data(), static_cast<Eigen::Index>(w.size()));
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(b.size(), b.size());
  for (int e = 0; e < 4; ++e) s += b.jacobian(e).transpose() * wv.asDiagonal() * b.jacobian(e);
  return s;
}

}  // namespace

TEST_CASE("square velocity basis is orthonormal, solenoidal and stiffness-diagonal") {
  const auto quad = Quadrature::make_default(Domain::unit_square());
  const auto b = VelocityBasis::build(quad, 32);
  REQUIRE(b.size() == 32);
  const Eigen::MatrixXd g = velocity_gram(b);
  CHECK((g - Eigen::MatrixXd::Identity(32, 32)).cwiseAbs().maxCoeff() < 1e-10);

  const Eigen::MatrixXd div = b.jacobian(0) + b.jacobian(3);
  CHECK(div.cwiseAbs().maxCoeff() < 1e-12);

  for (int j = 1; j < b.size(); ++j) CHECK(b.rayleigh()[j] >= b.rayleigh()[j - 1] - 1e-12);

  const Eigen::MatrixXd s = velocity_stiffness(b);
  for (int i = 0; i < 32; ++i) {
    CHECK(s(i, i) == doctest::Approx(b.rayleigh()[i]).epsilon(1e-10));
    for (int j = 0; j < 32; ++j) {
      if (i != j) CHECK(std::abs(s(i, j)) < 1e-8 * s(i, i));
    }
  }
}

TEST_CASE("velocity basis vanishes on the boundary") {
  const auto quad = Quadrature::make_default(Domain::unit_square(), 16);
  const auto b = VelocityBasis::build(quad, 8);
  Eigen::VectorXd a = Eigen::VectorXd::LinSpaced(8, 1.0, 2.0);
  for (double s = 0.0; s <= 1.0; s += 0.125) {
    for (const Point& p : {Point{s, 0.0}, Point{s, 1.0}, Point{0.0, s}, Point{1.0, s}}) {
      const Vec2 v = b.evaluate(a, p);
      CHECK(std::abs(v[0]) < 1e-14);
      CHECK(std::abs(v[1]) < 1e-14);
    }
  }
}

TEST_CASE("Rayleigh quotient of the lowest stream function") {
  CHECK(stream_function_rayleigh(1, 1) == doctest::Approx(16.0 * kPi * kPi / 3.0).epsilon(1e-14));
  // independent tensor-product Gauss-Legendre oracle
  for (auto [m, n] : {std::pair{1, 1}, std::pair{1, 2}, std::pair{3, 2}}) {
    const auto [x, w] = gauss_legendre(48, 0.0, 1.0);
    const VelocityGenerator g{m, n, false, 0.0};
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (std::size_t j = 0; j < x.size(); ++j) {
        const Point p{x[i], x[j]};
        const Vec2 v = generator_value(DomainMode::UnitSquareDirichlet, 1.0, g, p);
        const Jacobian d = generator_jacobian(DomainMode::UnitSquareDirichlet, 1.0, g, p);
        den += w[i] * w[j] * (v[0] * v[0] + v[1] * v[1]);
        num += w[i] * w[j] * (d[0] * d[0] + d[1] * d[1] + d[2] * d[2] + d[3] * d[3]);
      }
    }
    CHECK(num / den == doctest::Approx(stream_function_rayleigh(m, n)).epsilon(1e-12));
  }
}

TEST_CASE("generator Jacobian matches finite differences") {
  const VelocityGenerator g{2, 3, false, 0.0};
  const Point p{0.31, 0.67};
  const double h = 1e-6;
  const Jacobian d = generator_jacobian(DomainMode::UnitSquareDirichlet, 1.0, g, p);
  const Vec2 px = generator_value(DomainMode::UnitSquareDirichlet, 1.0, g, {p.x + h, p.y});
  const Vec2 mx = generator_value(DomainMode::UnitSquareDirichlet, 1.0, g, {p.x - h, p.y});
  const Vec2 py = generator_value(DomainMode::UnitSquareDirichlet, 1.0, g, {p.x, p.y + h});
  const Vec2 my = generator_value(DomainMode::UnitSquareDirichlet, 1.0, g, {p.x, p.y - h});
  CHECK(d[0] == doctest::Approx((px[0] - mx[0]) / (2 * h)).epsilon(1e-7));
  CHECK(d[1] == doctest::Approx((py[0] - my[0]) / (2 * h)).epsilon(1e-7));
  CHECK(d[2] == doctest::Approx((px[1] - mx[1]) / (2 * h)).epsilon(1e-7));
  CHECK(d[3] == doctest::Approx((py[1] - my[1]) / (2 * h)).epsilon(1e-7));
}

TEST_CASE("torus span contains the Taylor-Green vortex") {
  const Domain dom = Domain::torus();
  const auto quad = Quadrature::make_default(dom);
  const auto b = VelocityBasis::build(quad, 8);
  const Eigen::MatrixXd g = velocity_gram(b);
  CHECK((g - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((b.jacobian(0) + b.jacobian(3)).cwiseAbs().maxCoeff() < 1e-12);
  for (double r : b.rayleigh()) CHECK(r <= 2.0 + 1e-12);

  const auto u = sample(quad, [&](const Point& p) { return taylor_green_velocity(1.0, 1, dom.extent, p); });
  const Eigen::VectorXd a = project_L2(u, b);
  const auto back = b.expand(a);
  double err = 0.0;
  for (std::size_t i = 0; i < quad->size(); ++i) {
    err = std::max(err, std::abs(back.values[i][0] - u.values[i][0]));
    err = std::max(err, std::abs(back.values[i][1] - u.values[i][1]));
  }
  CHECK(err < 1e-12);
}

TEST_CASE("concentration basis on the square") {
  const auto quad = Quadrature::make_default(Domain::unit_square());
  const auto c = ConcentrationBasis::build(quad, 32);
  const auto& w = quad->weights();
  const Eigen::Map<const Eigen::VectorXd> wv(w.data(), static_cast<Eigen::Index>(w.size()));
  const Eigen::MatrixXd gram = c.values().transpose() * wv.asDiagonal() * c.values();
  CHECK((gram - Eigen::MatrixXd::Identity(32, 32)).cwiseAbs().maxCoeff() < 1e-10);
  for (int k = 0; k < 32; ++k) {
    const auto& m = c.modes()[k];
    CHECK(c.stiffness()(k, k) == doctest::Approx(kPi * kPi * (m.k * m.k + m.l * m.l)).epsilon(1e-10));
  }
  CHECK(c.mode_value(0, {1.5, 0.5}) == 0.0);
  CHECK(c.mode_value(0, {0.5, 0.5}) == doctest::Approx(2.0));
}

TEST_CASE("projections are idempotent on the span") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> nd;
  const auto quad = Quadrature::make_default(Domain::unit_square(), 32);
  const auto v = VelocityBasis::build(quad, 12);
  const auto c = ConcentrationBasis::build(quad, 12);
  Eigen::VectorXd a(12), b(12);
  for (int i = 0; i < 12; ++i) {
    a[i] = nd(rng);
    b[i] = nd(rng);
  }
  CHECK((project_L2(v.expand(a), v) - a).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((project_L2(c.expand(b), c) - b).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((project_H10(c.expand(b), c) - b).cwiseAbs().maxCoeff() < 1e-9);

  const auto other = Quadrature::make_default(Domain::unit_square(), 16);
  const auto f = sample(other, [](const Point&) { return 1.0; });
  CHECK_THROWS_AS(project_L2(f, c), QuadratureMismatch);
}

TEST_CASE("point evaluation agrees with node values") {
  const auto quad = Quadrature::make_default(Domain::unit_square(), 16);
  const auto v = VelocityBasis::build(quad, 10);
  const auto c = ConcentrationBasis::build(quad, 10);
  const Eigen::VectorXd a = Eigen::VectorXd::LinSpaced(10, -1.0, 1.0);
  const Eigen::VectorXd u0 = v.values(0) * a, u1 = v.values(1) * a, cc = c.values() * a;
  for (std::size_t i = 0; i < quad->size(); i += 17) {
    const Point& p = quad->nodes()[i];
    const Vec2 e = v.evaluate(a, p);
    CHECK(e[0] == doctest::Approx(u0[i]).epsilon(1e-10));
    CHECK(e[1] == doctest::Approx(u1[i]).epsilon(1e-10));
    CHECK(c.evaluate(a, p) == doctest::Approx(cc[i]).epsilon(1e-10));
  }
}

TEST_CASE("basis size limits") {
  const auto quad = Quadrature::make_default(Domain::unit_square(), 16);
  CHECK_THROWS_AS(VelocityBasis::build(quad, 65), BasisTooLarge);
  CHECK_THROWS_AS(VelocityBasis::build(quad, 0), InputError);
  CHECK_THROWS_AS(ConcentrationBasis::build(quad, 300), BasisTooLarge);
}

TEST_CASE("velocity basis cache round trip") {
  const auto quad = Quadrature::make_default(Domain::unit_square(), 16);
  const auto b = VelocityBasis::build(quad, 6);
  const auto path = (std::filesystem::temp_directory_path() / "synflow_basis_cache_test.bin").string();
  std::filesystem::remove(path);
  CHECK_FALSE(VelocityBasis::load_cache(path, quad, 6).has_value());
  b.save_cache(path);
  const auto loaded = VelocityBasis::load_cache(path, quad, 6);
  REQUIRE(loaded.has_value());
  CHECK(loaded->values(0) == b.values(0));
  CHECK(loaded->jacobian(2) == b.jacobian(2));
  CHECK_FALSE(VelocityBasis::load_cache(path, quad, 7).has_value());
  std::filesystem::remove(path);
}
