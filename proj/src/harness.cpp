#include "synflow/harness.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "synflow/constitutive.hpp"
#include "synflow/studies.hpp"
#include "synflow/varexp.hpp"

namespace synflow {

namespace {

Check make_check(std::string name, double value, double bound, bool passed, std::string detail = {}) {
  return {std::move(name), value, bound, passed, std::move(detail)};
}

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

std::string join_path(const std::string& dir, const std::string& file) {
  return dir.empty() ? file : dir + "/" + file;
}

bool is_taylor_green_oracle(const Config& c) {
  return c.domain_mode == DomainMode::PeriodicTorus && c.u_kind == "taylor_green" &&
         (c.forcing_kind == "none" || c.forcing_amplitude == 0.0) && c.p_min == 2.0 && c.p_max == 2.0 &&
         c.epsilon == 0.0;
}

void add_run_values(Summary& s, const GalerkinModel& model, const RunResult& r) {
  s.values.emplace_back("basis_n", std::to_string(model.n()));
  s.values.emplace_back("basis_m", std::to_string(model.m()));
  s.values.emplace_back("outputs", std::to_string(r.diagnostics.size()));
  s.values.emplace_back("steps_accepted", std::to_string(r.stats.accepted));
  s.values.emplace_back("steps_rejected", std::to_string(r.stats.rejected));
  s.values.emplace_back("rhs_evaluations", std::to_string(r.stats.rhs_evaluations));
  s.values.emplace_back("wall_seconds", format_double(r.wall_seconds));
  s.values.emplace_back("final_kinetic_energy", format_double(r.diagnostics.back().kinetic_energy));
  s.values.emplace_back("final_conc_energy", format_double(r.diagnostics.back().conc_energy));
}

Summary single_run(const Config& config, const std::string& dir) {
  Summary s;
  const GalerkinModel model(make_scenario(config));
  const RunResult r = run(model);
  write_diagnostics_csv(join_path(dir, "diagnostics.csv"), r.diagnostics);

  const std::size_t n_out = r.trajectory.size();
  const int snaps = std::min<int>(config.output_snapshots, static_cast<int>(n_out));
  for (int k = 0; k < snaps; ++k) {
    const std::size_t i = snaps == 1 ? n_out - 1 : (n_out - 1) * k / (snaps - 1);
    char name[64];
    std::snprintf(name, sizeof name, "snapshot_%04zu.vtk", i);
    write_vtk_snapshot(join_path(dir, name), model, r.trajectory.state(i), config.output_vtk_resolution);
  }

  add_run_values(s, model, r);
  const double e_res = max_of(energy_report(r.diagnostics));
  const double c_res = max_of(concentration_energy_report(r.diagnostics));
  double min_flux = 0.0, over = 0.0, under = 0.0, holder = 0.0;
  for (const auto& d : r.diagnostics) {
    min_flux = std::min(min_flux, d.flux_dissipation);
    holder = std::max(holder, d.holder_c);
  }
  for (const auto& m : maxmin_report(r.diagnostics, config.c_tilde)) {
    over = std::max(over, m.over);
    under = std::max(under, m.under);
  }
  s.values.emplace_back("max_overshoot", format_double(over));
  s.values.emplace_back("max_undershoot", format_double(under));
  s.values.emplace_back("max_holder_c", format_double(holder));
  s.checks.push_back(make_check("energy_identity", e_res, 1e-5, e_res < 1e-5, "max relative residual"));
  s.checks.push_back(
      make_check("concentration_energy_identity", c_res, 1e-5, c_res < 1e-5, "max relative residual"));
  s.checks.push_back(make_check("flux_dissipation_nonnegative", min_flux, 0.0, min_flux >= 0.0));
  if (is_taylor_green_oracle(config)) {
    const double err = taylor_green_error(model, r.trajectory, config.u_amplitude, config.u_mode);
    s.values.emplace_back("taylor_green_max_relative_error", format_double(err));
    s.checks.push_back(make_check("taylor_green_error", err, 1e-6, err < 1e-6,
                                  "max relative L2 velocity error vs analytic solution"));
  }
  return s;
}

std::string level_table(const std::vector<LevelSummary>& levels) {
  std::string t = "n,m,lux_grad_u,lux_stress,max_over,max_under,holder_max,max_energy_residual,wall_seconds\n";
  for (const auto& l : levels) {
    t += std::to_string(l.n) + "," + std::to_string(l.m) + "," + format_double(l.norms.lux_grad_u) + "," +
         format_double(l.norms.lux_stress) + "," + format_double(l.max_over) + "," +
         format_double(l.max_under) + "," + format_double(l.holder_max) + "," +
         format_double(l.max_energy_residual) + "," + format_double(l.wall_seconds) + "\n";
  }
  return t;
}

std::string cauchy_table(const std::vector<CauchyEntry>& d) {
  std::string t = "from,to,difference\n";
  for (const auto& e : d) {
    t += std::to_string(e.from) + "," + std::to_string(e.to) + "," + format_double(e.difference) + "\n";
  }
  return t;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

bool nonincreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[i - 1]) return false;
  }
  return true;
}

Summary refinement(const Config& config, const std::string& dir, bool velocity) {
  Summary s;
  const Scenario sc = make_scenario(config);
  const ConvergenceStudy st = velocity ? galerkin_convergence_study(sc, config.n_list, {})
                                       : galerkin_convergence_study(sc, {}, config.m_list);
  const auto& levels = velocity ? st.n_levels : st.m_levels;
  const auto& diffs = velocity ? st.n_differences : st.m_differences;
  write_text(join_path(dir, velocity ? "levels_n.csv" : "levels_m.csv"), level_table(levels));
  write_text(join_path(dir, velocity ? "cauchy_n.csv" : "cauchy_m.csv"), cauchy_table(diffs));

  std::vector<double> d;
  for (const auto& e : diffs) d.push_back(e.difference);
  s.values.emplace_back("levels", std::to_string(levels.size()));
  s.checks.push_back(make_check(velocity ? "velocity_cauchy_decreasing" : "concentration_cauchy_decreasing",
                                d.empty() ? 0.0 : d.back(), 0.0, strictly_decreasing(d),
                                "successive L2(Q_T) differences"));
  if (velocity) {
    double lo = INFINITY, hi = 0.0;
    for (const auto& l : levels) {
      lo = std::min(lo, l.norms.lux_stress);
      hi = std::max(hi, l.norms.lux_stress);
    }
    const double band = levels.empty() || lo <= 0.0 ? 1.0 : hi / lo;
    s.checks.push_back(make_check("stress_norm_band", band, 2.0, band <= 2.0, "max/min of ||S||_{L^p'}"));
  } else {
    std::vector<double> over, under;
    for (const auto& l : levels) {
      over.push_back(l.max_over);
      under.push_back(l.max_under);
    }
    s.checks.push_back(make_check("overshoot_nonincreasing", over.empty() ? 0.0 : over.back(), 0.0,
                                  nonincreasing(over)));
    s.checks.push_back(make_check("undershoot_nonincreasing", under.empty() ? 0.0 : under.back(), 0.0,
                                  nonincreasing(under)));
  }
  return s;
}

Summary epsilon(const Config& config, const std::string& dir) {
  Summary s;
  std::vector<double> eps = config.eps_list;
  std::sort(eps.begin(), eps.end(), std::greater<>());
  const auto rows = epsilon_study(make_scenario(config), eps);
  std::string t = "epsilon,velocity_difference,mollify_difference\n";
  std::vector<double> du, dc;
  for (const auto& r : rows) {
    t += format_double(r.epsilon) + "," + format_double(r.velocity_difference) + "," +
         format_double(r.mollify_difference) + "\n";
    du.push_back(r.velocity_difference);
    dc.push_back(r.mollify_difference);
  }
  write_text(join_path(dir, "epsilon.csv"), t);
  s.checks.push_back(make_check("velocity_difference_decreasing", du.empty() ? 0.0 : du.back(), 0.0,
                                strictly_decreasing(du), "||u_eps - u|| as eps shrinks"));
  s.checks.push_back(make_check("mollify_difference_decreasing", dc.empty() ? 0.0 : dc.back(), 0.0,
                                strictly_decreasing(dc), "||eta_eps * c - c|| as eps shrinks"));
  return s;
}

}  // namespace

std::vector<Check> property_suite(const Config& config) {
  std::vector<Check> checks;
  const Scenario sc = make_scenario(config);
  const int n = config.suite_samples;

  auto structure = [&](const std::string& name, auto&& fn) {
    try {
      const StructureReport r = fn();
      checks.push_back(make_check(name, r.violations, 0.0, r.passed()));
    } catch (const StructureViolation& e) {
      checks.push_back(make_check(name, e.report().violations, 0.0, false, e.witness().check));
    }
  };
  structure("stress_structure", [&] { return check_structure(sc.stress, n, config.seed); });
  structure("flux_structure",
            [&] { return check_structure(sc.flux, n, config.seed + 1, sc.stress.index.c_ref); });

  std::mt19937_64 rng(config.seed + 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto space = Quadrature::uniform(Domain::unit_square(1.0), 8);
  const auto grid = SpaceTimeGrid::uniform(space, 1.0, 4);
  auto random_field = [&](double lo, double hi) {
    std::vector<double> v(grid->size());
    for (double& x : v) x = lo + (hi - lo) * unit(rng);
    return SpaceTimeSamples{grid, v};
  };
  auto random_exponent = [&](double lo, double hi) {
    return ExponentField::make(grid, random_field(lo, hi).values);
  };

  double lux_err = 0.0;
  for (double q : {1.5, 2.0, 3.0}) {
    const ExponentField p = ExponentField::constant(grid, q);
    for (int k = 0; k < 20; ++k) {
      const SpaceTimeSamples f = random_field(-2.0, 2.0);
      const double norm = luxembourg_norm(f, p);
      lux_err = std::max(lux_err, std::abs(norm - std::pow(modular(f, p), 1.0 / q)) / norm);
    }
  }
  checks.push_back(make_check("luxembourg_constant_exponent", lux_err, 1e-8, lux_err < 1e-8));

  double hom = 0.0, tri = 0.0;
  for (int k = 0; k < 100; ++k) {
    const ExponentField p = random_exponent(1.2, 3.5);
    const SpaceTimeSamples f = random_field(-3.0, 3.0), g = random_field(-3.0, 3.0);
    const double lam = -4.0 + 8.0 * unit(rng);
    SpaceTimeSamples lf = f, fg = f;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      lf.values[i] = lam * f.values[i];
      fg.values[i] = f.values[i] + g.values[i];
    }
    const double nf = luxembourg_norm(f, p);
    hom = std::max(hom, std::abs(luxembourg_norm(lf, p) - std::abs(lam) * nf) / (std::abs(lam) * nf));
    tri = std::max(tri, (luxembourg_norm(fg, p) - nf - luxembourg_norm(g, p)) / nf);
  }
  checks.push_back(make_check("luxembourg_homogeneity", hom, 1e-8, hom < 1e-8));
  checks.push_back(make_check("luxembourg_triangle", tri, 1e-8, tri < 1e-8));

  int holder_fail = 0, young_fail = 0;
  for (int k = 0; k < 100; ++k) {
    const ExponentField p = random_exponent(2.1, 5.0);
    const ExponentField q = random_exponent(2.1, 5.0);
    std::vector<double> sv(grid->size());
    for (std::size_t i = 0; i < sv.size(); ++i) sv[i] = 1.0 / (1.0 / p.values[i] + 1.0 / q.values[i]);
    const ExponentField s = ExponentField::make(grid, sv);
    const SpaceTimeSamples f = random_field(-5.0, 5.0), g = random_field(-5.0, 5.0);
    holder_fail += holder_check(f, g, p, q, s).holds ? 0 : 1;
    young_fail += young_check(f, g, p, q, s).holds ? 0 : 1;
  }
  checks.push_back(make_check("holder_inequality", holder_fail, 0.0, holder_fail == 0));
  checks.push_back(make_check("young_inequality", young_fail, 0.0, young_fail == 0));

  int metric_fail = 0;
  for (int k = 0; k < 10000; ++k) {
    const SpaceTimePoint a{unit(rng), unit(rng), unit(rng)}, b{unit(rng), unit(rng), unit(rng)},
        c{unit(rng), unit(rng), unit(rng)};
    const double ab = parabolic_distance(a, b), ba = parabolic_distance(b, a);
    const double ac = parabolic_distance(a, c), bc = parabolic_distance(b, c);
    const bool ok = parabolic_distance(a, a) == 0.0 && ab == ba && ab > 0.0 &&
                    ac <= (ab + bc) * (1.0 + 1e-12);
    metric_fail += ok ? 0 : 1;
  }
  checks.push_back(make_check("parabolic_metric_axioms", metric_fail, 0.0, metric_fail == 0));

  const auto inc = holder_log_inclusion_check(0.5, sc.domain.extent, sc.domain.t_final, 10000, config.seed + 3);
  checks.push_back(make_check("holder_log_inclusion", inc.max_ratio, 1.0, inc.holds));
  return checks;
}

StudyOutcome run_study(const Config& config, const StudyOptions& options) {
  config.validate();
  StudyOutcome out;
  out.output_dir = options.output_dir.value_or(config.output_dir);
  ensure_directory(out.output_dir);
  write_text(join_path(out.output_dir, "config.txt"), dump_config(config));

  Summary s;
  switch (config.study) {
    case StudyKind::SingleRun: s = single_run(config, out.output_dir); break;
    case StudyKind::NRefinement: s = refinement(config, out.output_dir, true); break;
    case StudyKind::MRefinement: s = refinement(config, out.output_dir, false); break;
    case StudyKind::EpsilonStudy: s = epsilon(config, out.output_dir); break;
    case StudyKind::PropertySuite: s.checks = property_suite(config); break;
  }
  s.values.insert(s.values.begin(), {{"scenario", config.scenario}, {"study", to_string(config.study)},
                                     {"seed", std::to_string(config.seed)}});
  write_text(join_path(out.output_dir, "run_summary.txt"), s.text());
  out.summary = std::move(s);
  return out;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const InputError*>(&e)) return kExitUsage;
  if (dynamic_cast<const NumericalError*>(&e)) return kExitNumerical;
  return kExitNumerical;
}

}  // namespace synflow
