#include "synflow/studies.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "synflow/errors.hpp"
#include "synflow/mollifier.hpp"
#include "synflow/numeric.hpp"

namespace synflow {

namespace {

struct LevelRun {
  std::unique_ptr<GalerkinModel> model;
  RunResult result;
};

template <class T>
void require_ascending(const std::vector<T>& v, const char* what) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i - 1] < v[i])) throw InputError(std::string(what) + " must be strictly ascending");
  }
}

std::vector<LevelRun> run_levels(std::vector<Scenario> scenarios) {
  std::vector<std::future<LevelRun>> jobs;
  jobs.reserve(scenarios.size());
  for (auto& sc : scenarios) {
    jobs.push_back(std::async(std::launch::async, [sc = std::move(sc)]() {
      LevelRun r;
      r.model = std::make_unique<GalerkinModel>(sc);
      r.result = run(*r.model);
      return r;
    }));
  }
  std::vector<LevelRun> out;
  out.reserve(jobs.size());
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

}  // namespace

LevelSummary summarize(const GalerkinModel& model, const RunResult& result) {
  LevelSummary s;
  s.n = model.n();
  s.m = model.m();
  s.norms = space_time_norms(model, result.trajectory);
  for (const auto& mm : maxmin_report(result.diagnostics, model.scenario().c_tilde0)) {
    s.max_over = std::max(s.max_over, mm.over);
    s.max_under = std::max(s.max_under, mm.under);
  }
  for (const auto& d : result.diagnostics) s.holder_max = std::max(s.holder_max, d.holder_c);
  for (double r : energy_report(result.diagnostics)) {
    s.max_energy_residual = std::max(s.max_energy_residual, r);
  }
  s.wall_seconds = result.wall_seconds;
  return s;
}

ConvergenceStudy galerkin_convergence_study(const Scenario& scenario, const std::vector<int>& n_list,
                                            const std::vector<int>& m_list) {
  require_ascending(n_list, "N list");
  require_ascending(m_list, "M list");
  ConvergenceStudy study;

  std::vector<Scenario> sn;
  for (int n : n_list) {
    Scenario s = scenario;
    s.n_velocity = n;
    s.u0_coefficients.reset();
    sn.push_back(std::move(s));
  }
  const auto nruns = run_levels(std::move(sn));
  for (std::size_t i = 0; i < nruns.size(); ++i) {
    study.n_levels.push_back(summarize(*nruns[i].model, nruns[i].result));
    if (i > 0) {
      study.n_differences.push_back(
          {n_list[i - 1], n_list[i],
           velocity_difference(*nruns[i - 1].model, nruns[i - 1].result.trajectory, *nruns[i].model,
                               nruns[i].result.trajectory)});
    }
  }

  std::vector<Scenario> sm;
  for (int m : m_list) {
    Scenario s = scenario;
    s.n_concentration = m;
    sm.push_back(std::move(s));
  }
  const auto mruns = run_levels(std::move(sm));
  for (std::size_t i = 0; i < mruns.size(); ++i) {
    study.m_levels.push_back(summarize(*mruns[i].model, mruns[i].result));
    if (i > 0) {
      study.m_differences.push_back(
          {m_list[i - 1], m_list[i],
           concentration_difference(*mruns[i - 1].model, mruns[i - 1].result.trajectory,
                                    *mruns[i].model, mruns[i].result.trajectory)});
    }
  }
  return study;
}

SpaceTimeSamples sample_concentration_lattice(const GalerkinModel& model, const Trajectory& traj,
                                              int n, int stride) {
  if (n < 2 || stride < 1) throw InputError("lattice sampling: need n >= 2 and stride >= 1");
  const auto lattice = Quadrature::uniform(model.scenario().domain, n);
  std::vector<double> times;
  std::vector<std::size_t> picks;
  for (std::size_t i = 0; i < traj.size(); i += static_cast<std::size_t>(stride)) {
    times.push_back(traj.times[i]);
    picks.push_back(i);
  }
  const auto grid = SpaceTimeGrid::make(lattice, times);
  const ConcentrationBasis& cb = model.concentration_basis();
  Eigen::MatrixXd z(static_cast<Eigen::Index>(lattice->size()), cb.size());
  for (std::size_t q = 0; q < lattice->size(); ++q) {
    for (int k = 0; k < cb.size(); ++k) z(static_cast<Eigen::Index>(q), k) = cb.mode_value(k, lattice->nodes()[q]);
  }
  SpaceTimeSamples out{grid, {}};
  out.values.reserve(grid->size());
  for (std::size_t i : picks) {
    const Eigen::VectorXd c = z * traj.b[i];
    out.values.insert(out.values.end(), c.data(), c.data() + c.size());
  }
  return out;
}

std::vector<EpsilonRow> epsilon_study(const Scenario& scenario, const std::vector<double>& eps_list) {
  for (double e : eps_list) {
    if (!(e > 0.0)) throw InputError("epsilon list entries must be > 0");
  }
  std::vector<Scenario> runs;
  Scenario base = scenario;
  base.epsilon = 0.0;
  runs.push_back(base);
  for (double e : eps_list) {
    Scenario s = scenario;
    s.epsilon = e;
    runs.push_back(s);
  }
  const auto res = run_levels(std::move(runs));
  const GalerkinModel& m0 = *res[0].model;
  const Trajectory& t0 = res[0].result.trajectory;

  const int stride = std::max(1, static_cast<int>(std::ceil(static_cast<double>(t0.size() - 1) / 50.0)));
  const SpaceTimeSamples c = sample_concentration_lattice(m0, t0, 32, stride);

  std::vector<EpsilonRow> rows;
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    EpsilonRow row;
    row.epsilon = eps_list[i];
    row.velocity_difference =
        velocity_difference(m0, t0, *res[i + 1].model, res[i + 1].result.trajectory);
    const SpaceTimeSamples mc = mollify(c, eps_list[i]);
    CompensatedSum s;
    const auto& w = c.grid->weights();
    for (std::size_t k = 0; k < w.size(); ++k) {
      const double d = mc.values[k] - c.values[k];
      s.add(w[k] * d * d);
    }
    row.mollify_difference = std::sqrt(std::max(0.0, s.value()));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace synflow
