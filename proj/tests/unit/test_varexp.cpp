#include <doctest.h>

#include <cmath>
#include <random>

#include "synflow/errors.hpp"
#include "synflow/varexp.hpp"

using namespace synflow;

namespace {

SpaceTimeGridPtr small_grid() {
  return SpaceTimeGrid::uniform(Quadrature::uniform(Domain::unit_square(), 6), 1.0, 3);
}

SpaceTimeSamples random_samples(const SpaceTimeGridPtr& g, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  SpaceTimeSamples s{g, std::vector<double>(g->size())};
  for (double& v : s.values) v = u(rng);
  return s;
}

}  // namespace

TEST_CASE("space-time grid weights integrate Q_T") {
  const auto g = small_grid();
  double m = 0.0;
  for (double w : g->weights()) m += w;
  CHECK(m == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g->measure() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g->size() == 36u * 4u);
  const auto p = g->point(36 + 7);
  CHECK(p.t == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("modular and Luxembourg norm with a constant exponent") {
  const auto g = small_grid();
  std::mt19937_64 rng(1);
  for (double q : {1.5, 2.0, 3.0}) {
    const auto p = ExponentField::constant(g, q);
    for (int k = 0; k < 20; ++k) {
      const auto f = random_samples(g, rng, -2.0, 2.0);
      double mod = 0.0;
      for (std::size_t i = 0; i < f.values.size(); ++i) mod += g->weights()[i] * std::pow(std::abs(f.values[i]), q);
      CHECK(modular(f, p) == doctest::Approx(mod).epsilon(1e-13));
      const double lux = luxembourg_norm(f, p);
      CHECK(std::abs(lux - std::pow(mod, 1.0 / q)) / lux < 1e-8);
    }
  }
}

TEST_CASE("Luxembourg norm of a constant function") {
  // f = 3 on a set of measure 2: modular(f / l) = 2 (3 / l)^p = 1 at l = 3 * 2^(1/p).
  const auto g = SpaceTimeGrid::uniform(Quadrature::uniform(Domain::unit_square(), 4), 2.0, 2);
  SpaceTimeSamples f{g, std::vector<double>(g->size(), 3.0)};
  const auto p = ExponentField::constant(g, 2.5);
  CHECK(luxembourg_norm(f, p) == doctest::Approx(3.0 * std::pow(2.0, 1.0 / 2.5)).epsilon(1e-9));
  SpaceTimeSamples zero{g, std::vector<double>(g->size(), 0.0)};
  CHECK(luxembourg_norm(zero, p) == 0.0);
}

TEST_CASE("Luxembourg norm is a norm for variable exponents") {
  const auto g = small_grid();
  std::mt19937_64 rng(2);
  for (int k = 0; k < 100; ++k) {
    const auto p = ExponentField::make(g, random_samples(g, rng, 1.1, 4.0).values);
    const auto f = random_samples(g, rng, -3.0, 3.0);
    const auto h = random_samples(g, rng, -3.0, 3.0);
    const double lam = -2.5;
    SpaceTimeSamples lf = f, fh = f;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      lf.values[i] *= lam;
      fh.values[i] += h.values[i];
    }
    const double nf = luxembourg_norm(f, p);
    CHECK(std::abs(luxembourg_norm(lf, p) - std::abs(lam) * nf) <= 1e-8 * std::abs(lam) * nf);
    CHECK(luxembourg_norm(fh, p) <= (nf + luxembourg_norm(h, p)) * (1.0 + 1e-8));
    // the norm sits where the modular crosses one
    SpaceTimeSamples scaled = f;
    for (double& v : scaled.values) v /= nf;
    CHECK(modular(scaled, p) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("exponent fields reject p <= 1") {
  const auto g = small_grid();
  CHECK_THROWS_AS(ExponentField::constant(g, 1.0), ExponentOutOfRange);
  std::vector<double> v(g->size(), 2.0);
  v[3] = 0.95;
  CHECK_THROWS_AS(ExponentField::make(g, v), ExponentOutOfRange);
  const auto ok = ExponentField::make(g, std::vector<double>(g->size(), 1.7));
  CHECK(ok.p_min == 1.7);
  CHECK(ok.p_max == 1.7);
}

TEST_CASE("Hölder and Young inequalities on conjugate triples") {
  const auto g = small_grid();
  std::mt19937_64 rng(4);
  for (int k = 0; k < 100; ++k) {
    const auto p = ExponentField::make(g, random_samples(g, rng, 2.05, 6.0).values);
    const auto q = ExponentField::make(g, random_samples(g, rng, 2.05, 6.0).values);
    std::vector<double> sv(g->size());
    for (std::size_t i = 0; i < sv.size(); ++i) sv[i] = 1.0 / (1.0 / p.values[i] + 1.0 / q.values[i]);
    const auto s = ExponentField::make(g, sv);
    const auto f = random_samples(g, rng, -4.0, 4.0);
    const auto h = random_samples(g, rng, -4.0, 4.0);
    const auto hr = holder_check(f, h, p, q, s);
    CHECK(hr.holds);
    CHECK(hr.lhs <= hr.rhs * (1.0 + 1e-12));
    const auto yr = young_check(f, h, p, q, s);
    CHECK(yr.holds);
    // independent modular oracle for Young: |fg|^s <= |f|^p + |g|^q pointwise
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < sv.size(); ++i) {
      const double w = g->weights()[i];
      lhs += w * std::pow(std::abs(f.values[i] * h.values[i]), sv[i]);
      rhs += w * (std::pow(std::abs(f.values[i]), p.values[i]) + std::pow(std::abs(h.values[i]), q.values[i]));
    }
    CHECK(lhs <= rhs);
  }
}

TEST_CASE("mismatched exponents are rejected") {
  const auto g = small_grid();
  const auto p = ExponentField::constant(g, 2.0);
  const auto q = ExponentField::constant(g, 3.0);
  const auto s = ExponentField::constant(g, 1.5);
  SpaceTimeSamples f{g, std::vector<double>(g->size(), 1.0)};
  CHECK_THROWS_AS(holder_check(f, f, p, q, s), ExponentMismatch);
  CHECK_THROWS_AS(young_check(f, f, p, q, s), ExponentMismatch);
}

TEST_CASE("parabolic distance") {
  CHECK(parabolic_distance({0, 0, 0}, {3, 4, 0}) == doctest::Approx(5.0));
  CHECK(parabolic_distance({0, 0, 0}, {3, 4, 4}) == doctest::Approx(7.0));
  CHECK(parabolic_distance({1, 1, 0.25}, {1, 1, 0}) == doctest::Approx(0.5));
  CHECK(euclidean_distance({0, 0, 0}, {1, 2, 2}) == doctest::Approx(3.0));

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 10000; ++k) {
    const SpaceTimePoint a{u(rng), u(rng), u(rng)}, b{u(rng), u(rng), u(rng)}, c{u(rng), u(rng), u(rng)};
    CHECK(parabolic_distance(a, a) == 0.0);
    CHECK(parabolic_distance(a, b) == parabolic_distance(b, a));
    CHECK(parabolic_distance(a, b) > 0.0);
    CHECK(parabolic_distance(a, c) <= (parabolic_distance(a, b) + parabolic_distance(b, c)) * (1.0 + 1e-12));
  }
}

TEST_CASE("parabolic Hölder seminorm of t^(alpha/2) is one") {
  const auto g = SpaceTimeGrid::uniform(Quadrature::uniform(Domain::unit_square(), 5), 1.0, 10);
  SpaceTimeSamples f{g, std::vector<double>(g->size())};
  for (std::size_t i = 0; i < g->size(); ++i) f.values[i] = std::pow(g->point(i).t, 0.25);
  CHECK(parabolic_holder_seminorm(f, 0.5, 500, 3) == doctest::Approx(1.0).epsilon(1e-12));
  SpaceTimeSamples c{g, std::vector<double>(g->size(), 4.0)};
  CHECK(parabolic_holder_seminorm(c, 0.5, 10, 3) == 0.0);
  CHECK_THROWS_AS(parabolic_holder_seminorm(f, 1.5, 10, 3), InputError);
}

TEST_CASE("log-Hölder modulus") {
  const auto g = SpaceTimeGrid::uniform(Quadrature::uniform(Domain::unit_square(), 4), 1.0, 3);
  CHECK(log_holder_modulus(ExponentField::constant(g, 2.0), 0.5) == 0.0);
  std::vector<double> v(g->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.5 + 0.5 * g->point(i).x;
  const auto p = ExponentField::make(g, v);
  // Lipschitz p: |p1 - p2| (-log r) <= 0.5 r (-log r) <= 0.5 / e
  const double m = log_holder_modulus(p, 0.5);
  CHECK(m > 0.0);
  CHECK(m <= 0.5 / std::exp(1.0) + 1e-12);
}

TEST_CASE("Hölder continuity implies log-Hölder continuity") {
  for (double alpha : {0.25, 0.5, 0.9}) {
    const double c = holder_log_constant(alpha);
    // max of x^(alpha/2) (-log x) is attained at x = exp(-2 / alpha)
    const double x = std::exp(-2.0 / alpha);
    CHECK(std::pow(x, alpha / 2.0) * -std::log(x) == doctest::Approx(c).epsilon(1e-14));
    for (double y = 1e-12; y < 0.5; y *= 1.3) CHECK(std::pow(y, alpha / 2.0) * -std::log(y) <= c * (1.0 + 1e-14));
    const auto r = holder_log_inclusion_check(alpha, 1.0, 1.0, 10000, 77);
    CHECK(r.holds);
    CHECK(r.pairs == 10000);
    CHECK(r.max_ratio <= 1.0);
  }
}

TEST_CASE("variable Sobolev norm adds the two parts") {
  const auto g = small_grid();
  SpaceTimeSamples u{g, std::vector<double>(g->size(), 2.0)};
  SpaceTimeSamples du{g, std::vector<double>(g->size(), 1.0)};
  const auto p = ExponentField::constant(g, 2.0);
  CHECK(variable_sobolev_norm(u, du, p) == doctest::Approx(2.0 + 1.0).epsilon(1e-9));
}
