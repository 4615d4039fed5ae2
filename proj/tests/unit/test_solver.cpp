#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "synflow/config.hpp"
#include "synflow/errors.hpp"
#include "synflow/solver.hpp"

using namespace synflow;

namespace {

constexpr double kPi = std::numbers::pi;

Config small_square(const std::string& preset) {
  Config c = default_config();
  apply_preset(c, preset);
  c.quadrature_resolution = 24;
  return c;
}

Eigen::VectorXd lookup(const Trajectory& tr, double t) {
  const auto it = std::find(tr.times.begin(), tr.times.end(), t);
  REQUIRE(it != tr.times.end());
  return tr.a[static_cast<std::size_t>(it - tr.times.begin())];
}

}  // namespace

TEST_CASE("rest state is an equilibrium without forcing") {
  Config c = small_square("heat_only");
  c.c_kind = "zero";
  const GalerkinModel model(make_scenario(c));
  const GalerkinState s = model.initial_state();
  CHECK(s.a.cwiseAbs().maxCoeff() == 0.0);
  CHECK(s.b.cwiseAbs().maxCoeff() == 0.0);
  CHECK(model.rhs_velocity(s).cwiseAbs().maxCoeff() == 0.0);
  CHECK(model.rhs_concentration(s).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Taylor-Green right-hand side is pure viscous decay") {
  const Config c = default_config();
  const GalerkinModel model(make_scenario(c));
  const GalerkinState s = model.initial_state();
  REQUIRE(s.a.norm() > 0.1);
  const Eigen::VectorXd da = model.rhs_velocity(s);
  CHECK((da + 2.0 * c.nu0 * s.a).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("single velocity mode: linear part of the right-hand side") {
  Config c = small_square("synovial");
  c.index_kind = IndexKind::PiecewiseLinearInC;
  c.p_min = c.p_max = 2.0;
  c.basis_n = 6;
  c.basis_m = 4;
  const GalerkinModel model(make_scenario(c));
  const auto& lam = model.velocity_basis().rayleigh();
  for (int j = 0; j < model.n(); ++j) {
    GalerkinState s{0.0, Eigen::VectorXd::Zero(model.n()), Eigen::VectorXd::Zero(model.m())};
    s.a[j] = 0.7;
    const Eigen::VectorXd da = model.rhs_velocity(s);
    // the convective term of a single mode tested against itself vanishes
    CHECK(da[j] == doctest::Approx(-c.nu0 * lam[j] * 0.7 + model.forcing_projection()[j]).epsilon(1e-9));
  }
}

TEST_CASE("single concentration mode decays at its stiffness rate") {
  Config c = small_square("heat_only");
  c.basis_m = 6;
  const GalerkinModel model(make_scenario(c));
  const auto& g = model.concentration_basis().stiffness();
  for (int k = 0; k < model.m(); ++k) {
    GalerkinState s{0.0, Eigen::VectorXd::Zero(model.n()), Eigen::VectorXd::Zero(model.m())};
    s.b[k] = 1.0;
    const Eigen::VectorXd db = model.rhs_concentration(s);
    const Eigen::VectorXd expect = -(c.k0 + c.k1) * g.col(k);
    CHECK((db - expect).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("coefficient length mismatch") {
  const GalerkinModel model(make_scenario(small_square("heat_only")));
  GalerkinState s{0.0, Eigen::VectorXd::Zero(model.n() + 1), Eigen::VectorXd::Zero(model.m())};
  CHECK_THROWS_AS(model.rhs_velocity(s), DimensionMismatch);
  Scenario sc = make_scenario(small_square("heat_only"));
  sc.u0_coefficients = Eigen::VectorXd::Zero(3);
  const GalerkinModel bad(sc);
  CHECK_THROWS_AS(bad.initial_state(), DimensionMismatch);
}

TEST_CASE("heat-only run follows exponential decay") {
  Config c = small_square("heat_only");
  c.output_cadence = 100;
  const Scenario sc = make_scenario(c);
  const RunResult r = run(sc);
  const double rate = (c.k0 + c.k1) * 2.0 * kPi * kPi;
  const double e0 = r.diagnostics.front().conc_energy;
  REQUIRE(e0 > 0.0);
  for (const auto& d : r.diagnostics) {
    CHECK(d.conc_energy == doctest::Approx(e0 * std::exp(-2.0 * rate * d.t)).epsilon(1e-7));
    CHECK(d.kinetic_energy == 0.0);
  }
  for (double v : energy_report(r.diagnostics)) CHECK(v == 0.0);
  for (double v : concentration_energy_report(r.diagnostics)) CHECK(v < 1e-5);
}

TEST_CASE("energy reports on synthetic records") {
  std::vector<DiagnosticsRecord> d(3);
  for (int i = 0; i < 3; ++i) d[i].t = 0.5 * i;
  for (double v : energy_report(d)) CHECK(v == 0.0);
  for (double v : concentration_energy_report(d)) CHECK(v == 0.0);
  // E(t) = 1 - t with D = 1/2, W = 0 satisfies 2E + 2 int D = 2 E(0)
  for (auto& r : d) {
    r.kinetic_energy = 1.0 - r.t;
    r.dissipation = 1.0;
  }
  for (double v : energy_report(d)) CHECK(std::abs(v) < 1e-15);
  d[2].dissipation = 3.0;
  CHECK(energy_report(d)[2] > 0.1);
  CHECK(energy_report({}).empty());
}

TEST_CASE("max/min report") {
  std::vector<DiagnosticsRecord> d(2);
  d[0].c_min = -0.1;
  d[0].c_max = 1.2;
  d[1].c_min = 0.2;
  d[1].c_max = 0.9;
  const auto m = maxmin_report(d, 1.0);
  CHECK(m[0].over == doctest::Approx(0.2));
  CHECK(m[0].under == doctest::Approx(0.1));
  CHECK(m[1].over == 0.0);
  CHECK(m[1].under == 0.0);
}

TEST_CASE("Minty gap") {
  Config c = small_square("synovial");
  c.basis_n = 6;
  c.basis_m = 6;
  c.t_final = 0.1;
  c.output_cadence = 10;
  const GalerkinModel model(make_scenario(c));
  const RunResult r = run(model);
  const auto& tr = r.trajectory;

  CHECK(minty_gap(model, tr, [&](double t) { return lookup(tr, t); }) == 0.0);

  std::vector<double> dis;
  for (const auto& d : r.diagnostics) dis.push_back(d.dissipation);
  double integral = 0.0;
  for (std::size_t k = 1; k < tr.size(); ++k) integral += 0.5 * (tr.times[k] - tr.times[k - 1]) * (dis[k] + dis[k - 1]);
  CHECK(minty_gap(model, tr, [&](double) { return Eigen::VectorXd::Zero(model.n()); }) ==
        doctest::Approx(integral).epsilon(1e-10));

  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd(0.0, 0.5);
  for (int k = 0; k < 20; ++k) {
    Eigen::VectorXd phi(model.n());
    for (auto& v : phi) v = nd(rng);
    CHECK(minty_gap(model, tr, [&](double t) { return Eigen::VectorXd(phi * (1.0 + t)); }) >= -1e-12);
  }
}

TEST_CASE("runs are deterministic and conserve the energy identity") {
  Config c = small_square("electro");
  c.basis_n = 6;
  c.basis_m = 4;
  c.t_final = 0.1;
  c.output_cadence = 20;
  const Scenario sc = make_scenario(c);
  const RunResult r1 = run(sc);
  const RunResult r2 = run(sc);
  REQUIRE(r1.trajectory.size() == 21);
  for (std::size_t i = 0; i < r1.trajectory.size(); ++i) {
    CHECK(r1.trajectory.times[i] == r2.trajectory.times[i]);
    CHECK(r1.trajectory.a[i] == r2.trajectory.a[i]);
    CHECK(r1.trajectory.b[i] == r2.trajectory.b[i]);
  }
  CHECK(r1.trajectory.times.back() == c.t_final);
  for (double v : energy_report(r1.diagnostics)) CHECK(v < 1e-5);
  for (const auto& d : r1.diagnostics) {
    CHECK(d.finite());
    CHECK(d.flux_dissipation >= 0.0);
  }
  const auto gm = GalerkinModel(sc);
  CHECK(velocity_difference(gm, r1.trajectory, gm, r2.trajectory) == 0.0);
  CHECK(concentration_difference(gm, r1.trajectory, gm, r2.trajectory) == 0.0);
}

TEST_CASE("kinetic energy does not grow without forcing") {
  Config c = small_square("synovial");
  c.forcing_kind = "none";
  c.basis_n = 8;
  c.basis_m = 6;
  c.t_final = 0.2;
  c.output_cadence = 20;
  const RunResult r = run(make_scenario(c));
  for (std::size_t k = 1; k < r.diagnostics.size(); ++k) {
    CHECK(r.diagnostics[k].kinetic_energy <= r.diagnostics[k - 1].kinetic_energy * (1.0 + 1e-12));
    CHECK(r.diagnostics[k].work == 0.0);
  }
}

TEST_CASE("differences across incompatible runs are rejected") {
  Config a = small_square("heat_only");
  a.t_final = 0.02;
  a.output_cadence = 2;
  Config b = a;
  b.quadrature_resolution = 16;
  const GalerkinModel ma(make_scenario(a)), mb(make_scenario(b));
  const RunResult ra = run(ma), rb = run(mb);
  CHECK_THROWS_AS(velocity_difference(ma, ra.trajectory, mb, rb.trajectory), QuadratureMismatch);
  Config d = a;
  d.output_cadence = 4;
  const GalerkinModel md(make_scenario(d));
  const RunResult rd = run(md);
  CHECK_THROWS_AS(concentration_difference(ma, ra.trajectory, md, rd.trajectory), GridMismatch);
}

TEST_CASE("scenario validation") {
  Config c = small_square("synovial");
  Scenario s = make_scenario(c);
  s.c0 = [](const Point&) { return -0.1; };
  CHECK_THROWS_AS(s.validate(), InputError);
  s.c0 = [](const Point& x) { return 2.0 * std::sin(kPi * x.x) * std::sin(kPi * x.y); };
  CHECK_THROWS_AS(s.validate(), InputError);
  s.c0 = [](const Point&) { return 0.5; };  // nonzero on the boundary
  CHECK_THROWS_AS(s.validate(), InputError);
  s = make_scenario(c);
  CHECK_NOTHROW(s.validate());
  s.n_velocity = 0;
  CHECK_THROWS_AS(s.validate(), InputError);
}

TEST_CASE("mollified run stays finite and close to the unmollified one") {
  Config c = small_square("synovial");
  c.basis_n = 4;
  c.basis_m = 4;
  c.t_final = 0.05;
  c.output_cadence = 5;
  const GalerkinModel plain(make_scenario(c));
  c.epsilon = 0.05;
  const GalerkinModel moll(make_scenario(c));
  REQUIRE(moll.mollifier() != nullptr);
  CHECK(plain.mollifier() == nullptr);
  const RunResult r0 = run(plain), r1 = run(moll);
  for (const auto& d : r1.diagnostics) CHECK(d.finite());
  for (double v : energy_report(r1.diagnostics)) CHECK(v < 1e-5);
  const double diff = velocity_difference(plain, r0.trajectory, moll, r1.trajectory);
  CHECK(diff < 1e-2);
}

TEST_CASE("output times") {
  const auto t = output_times(1.0, 4);
  REQUIRE(t.size() == 5);
  CHECK(t.front() == 0.0);
  CHECK(t[2] == 0.5);
  CHECK(t.back() == 1.0);
}
