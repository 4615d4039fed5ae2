#include "synflow/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "synflow/errors.hpp"
#include "synflow/mollifier.hpp"
#include "synflow/numeric.hpp"
#include "synflow/varexp.hpp"

namespace synflow {

Vec2 Forcing::operator()(const Point& x, double t) const {
  if (!spatial) return {0.0, 0.0};
  const Vec2 f = spatial(x);
  const double g = modulation(t);
  return {g * f[0], g * f[1]};
}

void Scenario::validate() const {
  domain.validate();
  stress.validate();
  flux.validate();
  if (n_velocity < 1 || n_concentration < 1) throw InputError("scenario: basis sizes must be >= 1");
  if (quadrature_resolution < 4) throw InputError("scenario: quadrature resolution must be >= 4");
  if (output_intervals < 1) throw InputError("scenario: output_intervals must be >= 1");
  if (!(epsilon >= 0.0)) throw InputError("scenario: epsilon must be >= 0");
  if (!(c_tilde0 > 0.0)) throw InputError("scenario: c_tilde0 must be > 0");
  const auto& s = integrator;
  if (!(s.rtol > 0.0) || !(s.atol > 0.0) || !(s.dt_min > 0.0) || !(s.dt_initial > 0.0) ||
      !(s.implicit_dt > 0.0)) {
    throw InputError("scenario: integrator tolerances and steps must be > 0");
  }
  if (!c0) return;
  const auto quad = Quadrature::make_default(domain, quadrature_resolution);
  const double slack = 1e-12 * std::max(1.0, c_tilde0);
  for (const Point& x : quad->nodes()) {
    const double v = c0(x);
    if (!(v >= -slack && v <= c_tilde0 + slack)) {
      throw InputError("scenario: c0 must satisfy 0 <= c0 <= c_tilde0 on the quadrature nodes");
    }
  }
  if (domain.mode == DomainMode::UnitSquareDirichlet) {
    const double l = domain.extent;
    for (int i = 0; i <= 64; ++i) {
      const double s_ = l * i / 64.0;
      for (const Point& x : {Point{s_, 0.0}, Point{s_, l}, Point{0.0, s_}, Point{l, s_}}) {
        if (std::abs(c0(x)) > slack) throw InputError("scenario: c0 must vanish on the boundary");
      }
    }
  }
}

bool DiagnosticsRecord::finite() const {
  for (double v : {t, kinetic_energy, dissipation, work, conc_energy, flux_dissipation, c_min, c_max,
                   lux_grad_u, lux_stress, holder_c}) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

const std::vector<std::string>& diagnostics_columns() {
  static const std::vector<std::string> cols = {
      "t",      "kinetic_energy", "dissipation", "work",       "conc_energy", "flux_dissipation",
      "c_min",  "c_max",          "clamp_count", "lux_grad_u", "lux_stress",  "holder_c"};
  return cols;
}

namespace {

/// S = 2 nu(p, |B|) B at every node; shared by the right-hand side and the Minty gap.
void stress_nodes(const StressModel& model, const Eigen::ArrayXd& p, const Eigen::ArrayXd& d11,
                  const Eigen::ArrayXd& d12, const Eigen::ArrayXd& d22, Eigen::ArrayXd& s11,
                  Eigen::ArrayXd& s12, Eigen::ArrayXd& s22) {
  const Eigen::Index q = p.size();
  s11.resize(q);
  s12.resize(q);
  s22.resize(q);
  for (Eigen::Index i = 0; i < q; ++i) {
    const SymTensor s = model.evaluate(p[i], {d11[i], d12[i], d22[i]});
    s11[i] = s.xx;
    s12[i] = s.xy;
    s22[i] = s.yy;
  }
}

double weighted_sum(const Eigen::ArrayXd& w, const Eigen::ArrayXd& f) {
  const Eigen::ArrayXd prod = w * f;
  return pairwise_sum(std::span<const double>(prod.data(), static_cast<std::size_t>(prod.size())));
}

std::vector<double> trapezoid_weights(const std::vector<double>& t) {
  std::vector<double> w(t.size(), 0.0);
  if (t.size() == 1) w[0] = 1.0;
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    const double h = t[k + 1] - t[k];
    w[k] += 0.5 * h;
    w[k + 1] += 0.5 * h;
  }
  return w;
}

class GalerkinOde final : public OdeSystem {
 public:
  explicit GalerkinOde(const GalerkinModel& model) : model_(model), n_(model.n()), m_(model.m()) {
    if (model.mollifier()) window_ = 2.0 * model.mollifier()->epsilon() * (1.0 + 1e-12);
  }

  GalerkinState split(double t, const Eigen::VectorXd& y) const {
    return {t, y.head(n_), y.tail(m_)};
  }

  Eigen::VectorXd rhs(double t, const Eigen::VectorXd& y) override {
    const GalerkinState s = split(t, y);
    Eigen::VectorXd da, db;
    if (const LaggedMollifier* mol = model_.mollifier()) {
      const Eigen::ArrayXd c_bar = mol->evaluate(t, s.b, history_);
      model_.rhs(s, &c_bar, da, db);
    } else {
      model_.rhs(s, nullptr, da, db);
    }
    Eigen::VectorXd out(n_ + m_);
    out << da, db;
    return out;
  }

  void accept(double t, const Eigen::VectorXd& y) override {
    if (model_.mollifier()) history_.record(t, y.tail(m_), window_);
  }

  Eigen::VectorXd linear_diagonal(Eigen::Index) const override { return model_.linear_diagonal(); }

  DiagnosticsRecord diagnostics(double t, const Eigen::VectorXd& y) const {
    const GalerkinState s = split(t, y);
    if (const LaggedMollifier* mol = model_.mollifier()) {
      const Eigen::ArrayXd c_bar = mol->evaluate(t, s.b, history_);
      return model_.diagnostics(s, &c_bar);
    }
    return model_.diagnostics(s);
  }

 private:
  const GalerkinModel& model_;
  int n_, m_;
  double window_ = 0.0;
  MollifierHistory history_;
};

}  // namespace

GalerkinModel::GalerkinModel(Scenario scenario) : scenario_(std::move(scenario)) {
  scenario_.validate();
  quad_ = Quadrature::make_default(scenario_.domain, scenario_.quadrature_resolution);
  vbasis_ = std::make_shared<const VelocityBasis>(VelocityBasis::build(quad_, scenario_.n_velocity));
  cbasis_ = std::make_shared<const ConcentrationBasis>(
      ConcentrationBasis::build(quad_, scenario_.n_concentration));
  const auto& wq = quad_->weights();
  w_ = Eigen::Map<const Eigen::ArrayXd>(wq.data(), static_cast<Eigen::Index>(wq.size()));
  dw12_ = 0.5 * (vbasis_->jacobian(1) + vbasis_->jacobian(2));

  forcing_proj_ = Eigen::VectorXd::Zero(vbasis_->size());
  if (scenario_.forcing.active()) {
    const auto& nodes = quad_->nodes();
    Eigen::ArrayXd f1(w_.size()), f2(w_.size());
    for (Eigen::Index i = 0; i < w_.size(); ++i) {
      const Vec2 f = scenario_.forcing.spatial(nodes[static_cast<std::size_t>(i)]);
      f1[i] = f[0];
      f2[i] = f[1];
    }
    forcing_proj_ = vbasis_->values(0).transpose() * (w_ * f1).matrix() +
                    vbasis_->values(1).transpose() * (w_ * f2).matrix();
  }
  if (scenario_.epsilon > 0.0) {
    mollifier_ = std::make_unique<LaggedMollifier>(*cbasis_, scenario_.epsilon);
  }
}

GalerkinModel::~GalerkinModel() = default;
GalerkinModel::GalerkinModel(GalerkinModel&&) noexcept = default;
GalerkinModel& GalerkinModel::operator=(GalerkinModel&&) noexcept = default;

GalerkinState GalerkinModel::initial_state() const {
  GalerkinState s;
  s.t = 0.0;
  if (scenario_.u0_coefficients) {
    if (scenario_.u0_coefficients->size() != n()) {
      throw DimensionMismatch("u0 coefficients: expected " + std::to_string(n()) + ", got " +
                              std::to_string(scenario_.u0_coefficients->size()));
    }
    s.a = *scenario_.u0_coefficients;
  } else if (scenario_.u0) {
    s.a = project_L2(sample(quad_, scenario_.u0), *vbasis_);
  } else {
    s.a = Eigen::VectorXd::Zero(n());
  }
  s.b = scenario_.c0 ? project_L2(sample(quad_, scenario_.c0), *cbasis_)
                     : Eigen::VectorXd::Zero(m());
  return s;
}

void GalerkinModel::check_dims(const GalerkinState& s) const {
  if (s.a.size() != n() || s.b.size() != m()) {
    throw DimensionMismatch("state has (" + std::to_string(s.a.size()) + ", " +
                            std::to_string(s.b.size()) + ") coefficients, bases have (" +
                            std::to_string(n()) + ", " + std::to_string(m()) + ")");
  }
}

void GalerkinModel::velocity_nodes(const Eigen::VectorXd& a, Eigen::ArrayXd& u1,
                                   Eigen::ArrayXd& u2) const {
  u1 = (vbasis_->values(0) * a).array();
  u2 = (vbasis_->values(1) * a).array();
}

NodeFields GalerkinModel::reconstruct(const GalerkinState& s, const Eigen::ArrayXd* c_bar) const {
  check_dims(s);
  NodeFields f;
  velocity_nodes(s.a, f.u1, f.u2);
  for (int e = 0; e < 4; ++e) f.j[e] = (vbasis_->jacobian(e) * s.a).array();
  f.d11 = f.j[0];
  f.d12 = 0.5 * (f.j[1] + f.j[2]);
  f.d22 = f.j[3];
  f.c = (cbasis_->values() * s.b).array();
  f.cx = (cbasis_->gradient(0) * s.b).array();
  f.cy = (cbasis_->gradient(1) * s.b).array();

  const Eigen::ArrayXd& c_idx = c_bar ? *c_bar : f.c;
  const auto& nodes = quad_->nodes();
  const Eigen::Index q = f.c.size();
  f.p.resize(q);
  for (Eigen::Index i = 0; i < q; ++i) {
    f.p[i] = power_index(scenario_.stress.index, c_idx[i], nodes[static_cast<std::size_t>(i)], s.t);
  }
  stress_nodes(scenario_.stress, f.p, f.d11, f.d12, f.d22, f.s11, f.s12, f.s22);
  const Eigen::ArrayXd b2 = f.d11.square() + 2.0 * f.d12.square() + f.d22.square();
  f.k = scenario_.flux.k0 + scenario_.flux.k1 / (1.0 + b2);
  return f;
}

void GalerkinModel::rhs(const GalerkinState& s, const Eigen::ArrayXd* c_bar, Eigen::VectorXd& da,
                        Eigen::VectorXd& db) const {
  const NodeFields f = reconstruct(s, c_bar);
  const Eigen::VectorXd a11 = (w_ * (f.u1.square() - f.s11)).matrix();
  const Eigen::VectorXd a12 = (w_ * (2.0 * f.u1 * f.u2 - 2.0 * f.s12)).matrix();
  const Eigen::VectorXd a22 = (w_ * (f.u2.square() - f.s22)).matrix();
  da = vbasis_->jacobian(0).transpose() * a11;
  da.noalias() += dw12_.transpose() * a12;
  da.noalias() += vbasis_->jacobian(3).transpose() * a22;
  if (scenario_.forcing.active()) da += scenario_.forcing.modulation(s.t) * forcing_proj_;

  const Eigen::VectorXd gx = (w_ * (f.c * f.u1 - f.k * f.cx)).matrix();
  const Eigen::VectorXd gy = (w_ * (f.c * f.u2 - f.k * f.cy)).matrix();
  db = cbasis_->gradient(0).transpose() * gx;
  db.noalias() += cbasis_->gradient(1).transpose() * gy;
}

namespace {

Eigen::ArrayXd static_c_bar(const LaggedMollifier& mol, const GalerkinState& s) {
  return mol.evaluate(s.t, s.b, MollifierHistory{});
}

}  // namespace

Eigen::VectorXd GalerkinModel::rhs_velocity(const GalerkinState& s) const {
  Eigen::VectorXd da, db;
  if (mollifier_) {
    check_dims(s);
    const Eigen::ArrayXd c_bar = static_c_bar(*mollifier_, s);
    rhs(s, &c_bar, da, db);
  } else {
    rhs(s, nullptr, da, db);
  }
  return da;
}

Eigen::VectorXd GalerkinModel::rhs_concentration(const GalerkinState& s) const {
  Eigen::VectorXd da, db;
  rhs(s, nullptr, da, db);  // the exponent does not enter the concentration equation
  return db;
}

Eigen::VectorXd GalerkinModel::linear_diagonal() const {
  Eigen::VectorXd d(n() + m());
  for (int j = 0; j < n(); ++j) d[j] = scenario_.stress.nu0 * vbasis_->rayleigh()[j];
  for (int k = 0; k < m(); ++k) d[n() + k] = scenario_.flux.c4() * cbasis_->stiffness()(k, k);
  return d;
}

double holder_estimate(const GalerkinModel& model, const GalerkinState& s) {
  const auto grid = SpaceTimeGrid::make(model.quadrature(), {s.t});
  const Eigen::VectorXd c = model.concentration_basis().values() * s.b;
  SpaceTimeSamples samples{grid, std::vector<double>(c.data(), c.data() + c.size())};
  return parabolic_holder_seminorm(samples, 0.5, 256, 1);
}

DiagnosticsRecord GalerkinModel::diagnostics(const GalerkinState& s, const Eigen::ArrayXd* c_bar) const {
  const NodeFields f = reconstruct(s, c_bar);
  DiagnosticsRecord r;
  r.t = s.t;
  r.kinetic_energy = 0.5 * s.a.squaredNorm();
  r.conc_energy = 0.5 * s.b.squaredNorm();
  r.dissipation = weighted_sum(w_, f.s11 * f.d11 + 2.0 * f.s12 * f.d12 + f.s22 * f.d22);
  r.work = scenario_.forcing.active() ? scenario_.forcing.modulation(s.t) * forcing_proj_.dot(s.a) : 0.0;
  r.flux_dissipation = weighted_sum(w_, f.k * (f.cx.square() + f.cy.square()));
  r.c_min = f.c.minCoeff();
  r.c_max = f.c.maxCoeff();
  r.clamp_count = (f.c < 0.0).count();

  const Eigen::ArrayXd grad = (f.j[0].square() + f.j[1].square() + f.j[2].square() + f.j[3].square()).sqrt();
  const Eigen::ArrayXd smag = (f.s11.square() + 2.0 * f.s12.square() + f.s22.square()).sqrt();
  Eigen::ArrayXd pd(f.p.size());
  for (Eigen::Index i = 0; i < pd.size(); ++i) pd[i] = dual_exponent(f.p[i]);
  auto span = [](const Eigen::ArrayXd& v) {
    return std::span<const double>(v.data(), static_cast<std::size_t>(v.size()));
  };
  r.lux_grad_u = luxembourg_norm(span(grad), span(f.p), span(w_));
  r.lux_stress = luxembourg_norm(span(smag), span(pd), span(w_));
  r.holder_c = holder_estimate(*this, s);
  return r;
}

std::vector<double> output_times(double t_final, int intervals) {
  std::vector<double> t(static_cast<std::size_t>(intervals) + 1);
  for (int k = 0; k <= intervals; ++k) t[static_cast<std::size_t>(k)] = t_final * k / intervals;
  t.back() = t_final;
  return t;
}

RunResult run(const GalerkinModel& model) {
  const auto start = std::chrono::steady_clock::now();
  const Scenario& sc = model.scenario();
  GalerkinOde ode(model);
  const GalerkinState s0 = model.initial_state();
  Eigen::VectorXd y(model.n() + model.m());
  y << s0.a, s0.b;

  RunResult res;
  const std::vector<double> times = output_times(sc.domain.t_final, sc.output_intervals);
  auto record = [&](double t) {
    res.trajectory.times.push_back(t);
    res.trajectory.a.push_back(y.head(model.n()));
    res.trajectory.b.push_back(y.tail(model.m()));
    DiagnosticsRecord d = ode.diagnostics(t, y);
    if (!d.finite()) throw NoConvergence("non-finite diagnostics at t = " + std::to_string(t));
    res.diagnostics.push_back(d);
  };

  ode.accept(0.0, y);
  record(0.0);
  double dt_hint = sc.integrator.dt_initial;
  for (std::size_t k = 1; k < times.size(); ++k) {
    y = advance(ode, times[k - 1], y, times[k], sc.integrator, dt_hint, res.stats);
    record(times[k]);
  }
  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

RunResult run(const Scenario& scenario) {
  const GalerkinModel model(scenario);
  return run(model);
}

namespace {

std::vector<double> cumulative_trapezoid(const std::vector<DiagnosticsRecord>& d,
                                         double DiagnosticsRecord::*field) {
  std::vector<double> out(d.size(), 0.0);
  for (std::size_t k = 1; k < d.size(); ++k) {
    out[k] = out[k - 1] + 0.5 * (d[k].t - d[k - 1].t) * (d[k].*field + d[k - 1].*field);
  }
  return out;
}

}  // namespace

std::vector<double> energy_report(const std::vector<DiagnosticsRecord>& diag) {
  std::vector<double> r(diag.size(), 0.0);
  if (diag.empty()) return r;
  const auto dis = cumulative_trapezoid(diag, &DiagnosticsRecord::dissipation);
  const auto work = cumulative_trapezoid(diag, &DiagnosticsRecord::work);
  const double e0 = 2.0 * diag.front().kinetic_energy;
  for (std::size_t k = 0; k < diag.size(); ++k) {
    const double lhs = 2.0 * diag[k].kinetic_energy + 2.0 * dis[k];
    const double rhs = e0 + 2.0 * work[k];
    r[k] = std::abs(lhs - rhs) / (1.0 + std::abs(rhs));
  }
  return r;
}

std::vector<double> concentration_energy_report(const std::vector<DiagnosticsRecord>& diag) {
  std::vector<double> r(diag.size(), 0.0);
  if (diag.empty()) return r;
  const auto fl = cumulative_trapezoid(diag, &DiagnosticsRecord::flux_dissipation);
  const double rhs = 2.0 * diag.front().conc_energy;
  for (std::size_t k = 0; k < diag.size(); ++k) {
    const double lhs = 2.0 * diag[k].conc_energy + 2.0 * fl[k];
    r[k] = std::abs(lhs - rhs) / (1.0 + std::abs(rhs));
  }
  return r;
}

std::vector<MaxMinSample> maxmin_report(const std::vector<DiagnosticsRecord>& diag, double c_tilde0) {
  std::vector<MaxMinSample> out;
  out.reserve(diag.size());
  for (const auto& d : diag) {
    out.push_back({d.t, std::max(0.0, d.c_max - c_tilde0), std::max(0.0, -d.c_min)});
  }
  return out;
}

double minty_gap(const GalerkinModel& model, const Trajectory& traj, const ProbePath& probe) {
  const std::vector<double> wt = trapezoid_weights(traj.times);
  const auto& qw = model.quadrature()->weights();
  const Eigen::Map<const Eigen::ArrayXd> w(qw.data(), static_cast<Eigen::Index>(qw.size()));
  const VelocityBasis& vb = model.velocity_basis();
  CompensatedSum total;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const GalerkinState s = traj.state(i);
    const NodeFields f = model.reconstruct(s);
    const Eigen::VectorXd phi = probe(s.t);
    if (phi.size() != model.n()) throw DimensionMismatch("minty_gap: probe has wrong length");
    Eigen::ArrayXd j[4];
    for (int e = 0; e < 4; ++e) j[e] = (vb.jacobian(e) * phi).array();
    const Eigen::ArrayXd e11 = j[0];
    const Eigen::ArrayXd e12 = 0.5 * (j[1] + j[2]);
    const Eigen::ArrayXd e22 = j[3];
    Eigen::ArrayXd t11, t12, t22;
    stress_nodes(model.scenario().stress, f.p, e11, e12, e22, t11, t12, t22);
    const Eigen::ArrayXd integrand = (f.s11 - t11) * (f.d11 - e11) +
                                     2.0 * (f.s12 - t12) * (f.d12 - e12) +
                                     (f.s22 - t22) * (f.d22 - e22);
    total.add(wt[i] * weighted_sum(w, integrand));
  }
  return total.value();
}

namespace {

void check_compatible(const GalerkinModel& m1, const Trajectory& t1, const GalerkinModel& m2,
                      const Trajectory& t2) {
  const Quadrature& q1 = *m1.quadrature();
  const Quadrature& q2 = *m2.quadrature();
  if (q1.kind() != q2.kind() || q1.resolution() != q2.resolution() ||
      q1.domain().mode != q2.domain().mode || q1.domain().extent != q2.domain().extent) {
    throw QuadratureMismatch("trajectories live on different quadrature rules");
  }
  if (t1.times.size() != t2.times.size()) throw GridMismatch("trajectories have different output times");
  for (std::size_t i = 0; i < t1.times.size(); ++i) {
    if (std::abs(t1.times[i] - t2.times[i]) > 1e-12 * std::max(1.0, std::abs(t1.times[i]))) {
      throw GridMismatch("trajectories have different output times");
    }
  }
}

}  // namespace

double velocity_difference(const GalerkinModel& m1, const Trajectory& t1, const GalerkinModel& m2,
                           const Trajectory& t2) {
  check_compatible(m1, t1, m2, t2);
  const auto wt = trapezoid_weights(t1.times);
  const auto& qw = m1.quadrature()->weights();
  const Eigen::Map<const Eigen::ArrayXd> w(qw.data(), static_cast<Eigen::Index>(qw.size()));
  CompensatedSum s;
  for (std::size_t i = 0; i < t1.size(); ++i) {
    Eigen::ArrayXd u1, u2, v1, v2;
    m1.velocity_nodes(t1.a[i], u1, u2);
    m2.velocity_nodes(t2.a[i], v1, v2);
    s.add(wt[i] * weighted_sum(w, (u1 - v1).square() + (u2 - v2).square()));
  }
  return std::sqrt(std::max(0.0, s.value()));
}

double concentration_difference(const GalerkinModel& m1, const Trajectory& t1,
                                const GalerkinModel& m2, const Trajectory& t2) {
  check_compatible(m1, t1, m2, t2);
  const auto wt = trapezoid_weights(t1.times);
  const auto& qw = m1.quadrature()->weights();
  const Eigen::Map<const Eigen::ArrayXd> w(qw.data(), static_cast<Eigen::Index>(qw.size()));
  CompensatedSum s;
  for (std::size_t i = 0; i < t1.size(); ++i) {
    const Eigen::ArrayXd c1 = (m1.concentration_basis().values() * t1.b[i]).array();
    const Eigen::ArrayXd c2 = (m2.concentration_basis().values() * t2.b[i]).array();
    s.add(wt[i] * weighted_sum(w, (c1 - c2).square()));
  }
  return std::sqrt(std::max(0.0, s.value()));
}

SpaceTimeNorms space_time_norms(const GalerkinModel& model, const Trajectory& traj) {
  const auto wt = trapezoid_weights(traj.times);
  const auto& qw = model.quadrature()->weights();
  const std::size_t q = qw.size();
  std::vector<double> grad, smag, p, pd, w;
  const std::size_t total = q * traj.size();
  grad.reserve(total);
  smag.reserve(total);
  p.reserve(total);
  pd.reserve(total);
  w.reserve(total);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const NodeFields f = model.reconstruct(traj.state(i));
    for (std::size_t k = 0; k < q; ++k) {
      const auto e = static_cast<Eigen::Index>(k);
      grad.push_back(std::sqrt(f.j[0][e] * f.j[0][e] + f.j[1][e] * f.j[1][e] + f.j[2][e] * f.j[2][e] +
                               f.j[3][e] * f.j[3][e]));
      smag.push_back(std::sqrt(f.s11[e] * f.s11[e] + 2.0 * f.s12[e] * f.s12[e] + f.s22[e] * f.s22[e]));
      p.push_back(f.p[e]);
      pd.push_back(dual_exponent(f.p[e]));
      w.push_back(wt[i] * qw[k]);
    }
  }
  return {luxembourg_norm(grad, p, w), luxembourg_norm(smag, pd, w)};
}

}  // namespace synflow
