#include "synflow/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace synflow {

std::string to_string(StudyKind k) {
  switch (k) {
    case StudyKind::SingleRun: return "single_run";
    case StudyKind::NRefinement: return "n_refinement";
    case StudyKind::MRefinement: return "m_refinement";
    case StudyKind::EpsilonStudy: return "epsilon_study";
    case StudyKind::PropertySuite: return "property_suite";
  }
  return "single_run";
}

StudyKind study_kind_from_string(const std::string& s) {
  for (StudyKind k : {StudyKind::SingleRun, StudyKind::NRefinement, StudyKind::MRefinement,
                      StudyKind::EpsilonStudy, StudyKind::PropertySuite}) {
    if (to_string(k) == s) return k;
  }
  throw RangeError("unknown study kind '" + s + "'");
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_double(const std::string& s, int line) {
  if (s.empty()) throw ParseError(line, "expected a number");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE) throw ParseError(line, "not a number: '" + s + "'");
  if (!std::isfinite(v)) throw RangeError("line " + std::to_string(line) + ": value must be finite");
  return v;
}

long long to_integer(const std::string& s, int line) {
  if (s.empty()) throw ParseError(line, "expected an integer");
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || errno == ERANGE) throw ParseError(line, "not an integer: '" + s + "'");
  return v;
}

std::uint64_t to_unsigned(const std::string& s, int line) {
  if (s.empty()) throw ParseError(line, "expected an integer");
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || errno == ERANGE) throw ParseError(line, "not an integer: '" + s + "'");
  return static_cast<std::uint64_t>(v);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

void range(bool ok, int line, const std::string& key, const std::string& what) {
  if (!ok) throw RangeError("line " + std::to_string(line) + ": " + key + " " + what);
}

struct KeySpec {
  std::string name;
  std::function<void(Config&, const std::string&, int)> set;
  std::function<std::string(const Config&)> get;
};

KeySpec real_key(const std::string& name, double Config::*field, std::function<bool(double)> ok,
                 const std::string& what) {
  return {name,
          [=](Config& c, const std::string& v, int line) {
            const double x = to_double(v, line);
            range(ok(x), line, name, what);
            c.*field = x;
          },
          [=](const Config& c) { return fmt_double(c.*field); }};
}

KeySpec int_key(const std::string& name, int Config::*field, long long lo, long long hi) {
  return {name,
          [=](Config& c, const std::string& v, int line) {
            const long long x = to_integer(v, line);
            range(x >= lo && x <= hi, line, name,
                  "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
            c.*field = static_cast<int>(x);
          },
          [=](const Config& c) { return std::to_string(c.*field); }};
}

KeySpec choice_key(const std::string& name, std::string Config::*field,
                   std::vector<std::string> choices) {
  return {name,
          [=](Config& c, const std::string& v, int line) {
            bool found = false;
            std::string all;
            for (const auto& ch : choices) {
              found = found || ch == v;
              all += (all.empty() ? "" : "|") + ch;
            }
            range(found, line, name, "must be one of " + all);
            c.*field = v;
          },
          [=](const Config& c) { return c.*field; }};
}

const bool positive_flag = true;
auto positive = [](double x) { return x > 0.0; };
auto nonnegative = [](double x) { return x >= 0.0; };
auto any_value = [](double) { return positive_flag; };

const std::vector<KeySpec>& registry() {
  static const std::vector<KeySpec> keys = [] {
    std::vector<KeySpec> k;
    k.push_back({"scenario",
                 [](Config& c, const std::string& v, int line) {
                   bool known = false;
                   for (const auto& p : preset_names()) known = known || p == v;
                   range(known, line, "scenario", "names no shipped preset");
                   c.scenario = v;
                 },
                 [](const Config& c) { return c.scenario; }});
    k.push_back({"seed",
                 [](Config& c, const std::string& v, int line) {
                   range(v.empty() || v.front() != '-', line, "seed", "must be >= 0");
                   c.seed = to_unsigned(v, line);
                 },
                 [](const Config& c) { return std::to_string(c.seed); }});
    k.push_back({"study.kind",
                 [](Config& c, const std::string& v, int line) {
                   try {
                     c.study = study_kind_from_string(v);
                   } catch (const RangeError& e) {
                     throw RangeError("line " + std::to_string(line) + ": " + e.what());
                   }
                 },
                 [](const Config& c) { return to_string(c.study); }});
    k.push_back({"output.dir",
                 [](Config& c, const std::string& v, int line) {
                   if (v.empty()) throw ParseError(line, "output.dir must not be empty");
                   c.output_dir = v;
                 },
                 [](const Config& c) { return c.output_dir; }});
    k.push_back(int_key("output.cadence", &Config::output_cadence, 1, 100000));
    k.push_back(int_key("output.snapshots", &Config::output_snapshots, 0, 10000));
    k.push_back(int_key("output.vtk_resolution", &Config::output_vtk_resolution, 2, 4096));
    k.push_back({"domain.mode",
                 [](Config& c, const std::string& v, int line) {
                   range(v == "square" || v == "torus", line, "domain.mode", "must be square|torus");
                   c.domain_mode = domain_mode_from_string(v);
                 },
                 [](const Config& c) { return to_string(c.domain_mode); }});
    k.push_back(real_key("domain.extent", &Config::domain_extent, positive, "must be > 0"));
    k.push_back(real_key("domain.t_final", &Config::t_final, positive, "must be > 0"));
    k.push_back(int_key("quadrature.resolution", &Config::quadrature_resolution, 8, 512));
    k.push_back(int_key("basis.n", &Config::basis_n, 1, 64));
    k.push_back(int_key("basis.m", &Config::basis_m, 1, 256));
    k.push_back(real_key("stress.nu0", &Config::nu0, positive, "must be > 0"));
    k.push_back(real_key("stress.nu1", &Config::nu1, positive, "must be > 0"));
    k.push_back(real_key("stress.nu2", &Config::nu2, nonnegative, "must be >= 0"));
    k.push_back({"index.kind",
                 [](Config& c, const std::string& v, int line) {
                   range(v == "piecewise_linear" || v == "exponential" || v == "prescribed", line,
                         "index.kind", "must be piecewise_linear|exponential|prescribed");
                   c.index_kind = index_kind_from_string(v);
                 },
                 [](const Config& c) { return to_string(c.index_kind); }});
    k.push_back(real_key("index.p_min", &Config::p_min, [](double x) { return x > 1.0 && x < 1e3; },
                         "must satisfy 1 < p_min < 1000"));
    k.push_back(real_key("index.p_max", &Config::p_max, [](double x) { return x > 1.0 && x < 1e3; },
                         "must satisfy 1 < p_max < 1000"));
    k.push_back(real_key("index.c_ref", &Config::c_ref, positive, "must be > 0"));
    k.push_back(real_key("index.omega", &Config::omega, nonnegative, "must be >= 0"));
    k.push_back(real_key("flux.k0", &Config::k0, positive, "must be > 0"));
    k.push_back(real_key("flux.k1", &Config::k1, nonnegative, "must be >= 0"));
    k.push_back(choice_key("forcing.kind", &Config::forcing_kind, {"none", "vortex", "taylor_green"}));
    k.push_back(real_key("forcing.amplitude", &Config::forcing_amplitude, any_value, ""));
    k.push_back(int_key("forcing.mode", &Config::forcing_mode, 1, 64));
    k.push_back(real_key("forcing.omega", &Config::forcing_omega, nonnegative, "must be >= 0"));
    k.push_back(choice_key("initial.u_kind", &Config::u_kind, {"zero", "taylor_green", "vortex"}));
    k.push_back(real_key("initial.u_amplitude", &Config::u_amplitude, any_value, ""));
    k.push_back(int_key("initial.u_mode", &Config::u_mode, 1, 64));
    k.push_back(choice_key("initial.c_kind", &Config::c_kind, {"zero", "bump", "sine"}));
    k.push_back(real_key("initial.c_amplitude", &Config::c_amplitude, nonnegative, "must be >= 0"));
    k.push_back(int_key("initial.c_mode", &Config::c_mode, 1, 64));
    k.push_back(real_key("initial.c_tilde", &Config::c_tilde, positive, "must be > 0"));
    k.push_back(real_key("mollify.epsilon", &Config::epsilon, nonnegative, "must be >= 0"));
    k.push_back({"integrator.scheme",
                 [](Config& c, const std::string& v, int line) {
                   range(v == "rk4_adaptive" || v == "implicit_euler", line, "integrator.scheme",
                         "must be rk4_adaptive|implicit_euler");
                   c.scheme = scheme_from_string(v);
                 },
                 [](const Config& c) { return to_string(c.scheme); }});
    k.push_back(real_key("integrator.rtol", &Config::rtol, positive, "must be > 0"));
    k.push_back(real_key("integrator.atol", &Config::atol, positive, "must be > 0"));
    k.push_back(real_key("integrator.dt_min", &Config::dt_min, positive, "must be > 0"));
    k.push_back(real_key("integrator.dt_initial", &Config::dt_initial, positive, "must be > 0"));
    k.push_back(real_key("integrator.dt", &Config::dt, positive, "must be > 0"));
    auto int_list = [](const std::string& name, std::vector<int> Config::*field, int hi) {
      return KeySpec{name,
                     [=](Config& c, const std::string& v, int line) {
                       std::vector<int> out;
                       for (const auto& item : split_list(v)) {
                         const long long x = to_integer(item, line);
                         range(x >= 1 && x <= hi, line, name,
                               "entries must lie in [1, " + std::to_string(hi) + "]");
                         out.push_back(static_cast<int>(x));
                       }
                       c.*field = out;
                     },
                     [=](const Config& c) {
                       std::string s;
                       for (int x : c.*field) s += (s.empty() ? "" : ", ") + std::to_string(x);
                       return s;
                     }};
    };
    k.push_back(int_list("study.n_list", &Config::n_list, 64));
    k.push_back(int_list("study.m_list", &Config::m_list, 256));
    k.push_back({"study.eps_list",
                 [](Config& c, const std::string& v, int line) {
                   std::vector<double> out;
                   for (const auto& item : split_list(v)) {
                     const double x = to_double(item, line);
                     range(x > 0.0, line, "study.eps_list", "entries must be > 0");
                     out.push_back(x);
                   }
                   c.eps_list = out;
                 },
                 [](const Config& c) {
                   std::string s;
                   for (double x : c.eps_list) s += (s.empty() ? "" : ", ") + fmt_double(x);
                   return s;
                 }});
    k.push_back(int_key("suite.samples", &Config::suite_samples, 1, 100000000));
    return k;
  }();
  return keys;
}

const KeySpec* find_key(const std::string& name) {
  for (const auto& k : registry()) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

}  // namespace

void Config::validate() const {
  if (p_max < p_min) throw RangeError("index.p_max must be >= index.p_min");
  if (c_amplitude > c_tilde) throw RangeError("initial.c_amplitude must be <= initial.c_tilde");
  if (c_kind == "sine" && domain_mode == DomainMode::PeriodicTorus) {
    throw RangeError("initial.c_kind = sine needs domain.mode = square");
  }
  if (c_kind == "sine" && c_mode != 1) throw RangeError("initial.c_kind = sine needs c_mode = 1 (c0 >= 0)");
  if (u_kind == "taylor_green" && domain_mode == DomainMode::UnitSquareDirichlet) {
    throw RangeError("initial.u_kind = taylor_green needs domain.mode = torus");
  }
  if (forcing_kind == "taylor_green" && domain_mode == DomainMode::UnitSquareDirichlet) {
    throw RangeError("forcing.kind = taylor_green needs domain.mode = torus");
  }
  if (dt_min > dt_initial) throw RangeError("integrator.dt_min must be <= integrator.dt_initial");
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"taylor_green", "synovial", "electro", "heat_only"};
  return names;
}

void apply_preset(Config& c, const std::string& name) {
  const Config d;  // built-in defaults carry the taylor_green scenario
  auto reset = [&] {
    c.domain_mode = d.domain_mode;
    c.domain_extent = d.domain_extent;
    c.t_final = d.t_final;
    c.quadrature_resolution = d.quadrature_resolution;
    c.basis_n = d.basis_n;
    c.basis_m = d.basis_m;
    c.nu0 = d.nu0;
    c.nu1 = d.nu1;
    c.nu2 = d.nu2;
    c.index_kind = d.index_kind;
    c.p_min = d.p_min;
    c.p_max = d.p_max;
    c.c_ref = d.c_ref;
    c.omega = d.omega;
    c.k0 = d.k0;
    c.k1 = d.k1;
    c.forcing_kind = d.forcing_kind;
    c.forcing_amplitude = d.forcing_amplitude;
    c.forcing_mode = d.forcing_mode;
    c.forcing_omega = d.forcing_omega;
    c.u_kind = d.u_kind;
    c.u_amplitude = d.u_amplitude;
    c.u_mode = d.u_mode;
    c.c_kind = d.c_kind;
    c.c_amplitude = d.c_amplitude;
    c.c_mode = d.c_mode;
    c.c_tilde = d.c_tilde;
    c.epsilon = d.epsilon;
  };
  reset();
  c.scenario = name;
  if (name == "taylor_green") return;
  // Shared square-domain settings of the three non-torus presets.
  c.domain_mode = DomainMode::UnitSquareDirichlet;
  c.domain_extent = 1.0;
  c.t_final = 0.5;
  c.nu0 = 0.05;
  c.k0 = 0.01;
  c.k1 = 0.02;
  c.c_kind = "bump";
  c.c_amplitude = 1.0;
  c.c_tilde = 1.0;
  if (name == "synovial") {
    c.basis_n = 16;
    c.basis_m = 16;
    c.index_kind = IndexKind::PiecewiseLinearInC;
    c.p_min = 1.5;
    c.p_max = 2.5;
    c.c_ref = 1.0;
    c.forcing_kind = "vortex";
    c.forcing_amplitude = 0.5;
    c.u_kind = "vortex";
    c.u_amplitude = 0.1;
  } else if (name == "electro") {
    c.basis_n = 16;
    c.basis_m = 8;
    c.index_kind = IndexKind::PrescribedInXT;
    c.p_min = 1.6;
    c.p_max = 2.4;
    c.omega = kTwoPi;
    c.forcing_kind = "vortex";
    c.forcing_amplitude = 0.5;
    c.u_kind = "vortex";
    c.u_amplitude = 0.1;
  } else if (name == "heat_only") {
    c.basis_n = 4;
    c.basis_m = 16;
    c.index_kind = IndexKind::PiecewiseLinearInC;
    c.p_min = 1.5;
    c.p_max = 2.5;
    c.k0 = 0.025;
    c.k1 = 0.025;
    c.forcing_kind = "none";
    c.forcing_amplitude = 0.0;
    c.u_kind = "zero";
    c.u_amplitude = 0.0;
    c.c_kind = "sine";
  } else {
    throw RangeError("unknown scenario preset '" + name + "'");
  }
}

Config default_config() { return Config{}; }

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& k : registry()) n.push_back(k.name);
    return n;
  }();
  return names;
}

Config parse_config_text(const std::string& text) {
  struct Entry {
    int line;
    std::string key, value;
  };
  std::vector<Entry> entries;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw ParseError(line, "missing key");
    if (!find_key(key)) throw UnknownKey(line, key);
    if (!seen.insert(key).second) throw ParseError(line, "duplicate key '" + key + "'");
    entries.push_back({line, key, value});
  }

  Config c;
  for (const auto& e : entries) {
    if (e.key == "scenario") {
      find_key("scenario")->set(c, e.value, e.line);
      apply_preset(c, c.scenario);
    }
  }
  for (const auto& e : entries) {
    if (e.key != "scenario") find_key(e.key)->set(c, e.value, e.line);
  }
  c.validate();
  return c;
}

Config parse_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

std::string dump_config(const Config& c) {
  std::string out = "# synflow configuration\n";
  for (const auto& k : registry()) out += k.name + " = " + k.get(c) + "\n";
  return out;
}

Vec2 taylor_green_velocity(double amplitude, int mode, double extent, const Point& x) {
  const double k = kTwoPi * mode / extent;
  return {amplitude * std::sin(k * x.x) * std::cos(k * x.y),
          -amplitude * std::cos(k * x.x) * std::sin(k * x.y)};
}

Scenario make_scenario(const Config& c) {
  c.validate();
  Scenario s;
  s.name = c.scenario;
  s.domain = {c.domain_mode, c.domain_extent, c.t_final};
  s.quadrature_resolution = c.quadrature_resolution;
  s.n_velocity = c.basis_n;
  s.n_concentration = c.basis_m;
  PowerIndexFamily idx{c.index_kind, c.p_min, c.p_max, c.c_ref, c.omega, c.domain_extent};
  idx.validate();
  s.stress = StressModel::make(c.nu0, idx, c.nu1, c.nu2);
  s.flux = {c.k0, c.k1};
  const double L = c.domain_extent;

  if (c.forcing_kind != "none" && c.forcing_amplitude != 0.0) {
    const double a = c.forcing_amplitude;
    const int m = c.forcing_mode;
    if (c.forcing_kind == "vortex") {
      s.forcing.spatial = [a, L](const Point& x) {
        return Vec2{-a * (x.y - 0.5 * L) / L, a * (x.x - 0.5 * L) / L};
      };
    } else {
      s.forcing.spatial = [a, m, L](const Point& x) { return taylor_green_velocity(a, m, L, x); };
    }
    if (c.forcing_omega != 0.0) {
      const double w = c.forcing_omega;
      s.forcing.temporal = [w](double t) { return std::cos(w * t); };
    }
  }

  if (c.u_kind == "taylor_green" && c.u_amplitude != 0.0) {
    const double a = c.u_amplitude;
    const int m = c.u_mode;
    s.u0 = [a, m, L](const Point& x) { return taylor_green_velocity(a, m, L, x); };
  } else if (c.u_kind == "vortex" && c.u_amplitude != 0.0) {
    // u = A L / (m pi) curl(sin^2(m pi x / L) sin^2(m pi y / L)), so |u| <= A.
    const double a = c.u_amplitude;
    const double k = std::numbers::pi * c.u_mode / L;
    s.u0 = [a, k](const Point& x) {
      const double sx = std::sin(k * x.x), sy = std::sin(k * x.y);
      return Vec2{a * sx * sx * std::sin(2.0 * k * x.y), -a * sy * sy * std::sin(2.0 * k * x.x)};
    };
  }

  if (c.c_kind == "bump" && c.c_amplitude != 0.0) {
    const double a = c.c_amplitude;
    const double k = std::numbers::pi * c.c_mode / L;
    s.c0 = [a, k](const Point& x) {
      const double sx = std::sin(k * x.x), sy = std::sin(k * x.y);
      return a * std::pow(sx * sy, 4);
    };
  } else if (c.c_kind == "sine" && c.c_amplitude != 0.0) {
    const double a = c.c_amplitude;
    const double k = std::numbers::pi / L;
    s.c0 = [a, k](const Point& x) { return a * std::sin(k * x.x) * std::sin(k * x.y); };
  }
  s.c_tilde0 = c.c_tilde;
  s.epsilon = c.epsilon;
  s.integrator.scheme = c.scheme;
  s.integrator.rtol = c.rtol;
  s.integrator.atol = c.atol;
  s.integrator.dt_min = c.dt_min;
  s.integrator.dt_initial = c.dt_initial;
  s.integrator.implicit_dt = c.dt;
  s.output_intervals = c.output_cadence;
  return s;
}

double taylor_green_error(const GalerkinModel& model, const Trajectory& traj, double amplitude, int mode) {
  const auto& quad = *model.quadrature();
  const double L = quad.domain().extent;
  const double k = kTwoPi * mode / L;
  const double nu0 = model.scenario().stress.nu0;
  double worst = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    Eigen::ArrayXd u1, u2;
    model.velocity_nodes(traj.a[i], u1, u2);
    const double decay = std::exp(-2.0 * nu0 * k * k * traj.times[i]);
    double err = 0.0, ref = 0.0;
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const Vec2 e = taylor_green_velocity(amplitude * decay, mode, L, quad.nodes()[q]);
      const auto qi = static_cast<Eigen::Index>(q);
      err += quad.weights()[q] * ((u1[qi] - e[0]) * (u1[qi] - e[0]) + (u2[qi] - e[1]) * (u2[qi] - e[1]));
      ref += quad.weights()[q] * (e[0] * e[0] + e[1] * e[1]);
    }
    if (ref > 0.0) worst = std::max(worst, std::sqrt(err / ref));
  }
  return worst;
}

}  // namespace synflow
