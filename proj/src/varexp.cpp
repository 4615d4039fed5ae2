#include "synflow/varexp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "synflow/errors.hpp"
#include "synflow/numeric.hpp"

namespace synflow {

SpaceTimeGrid::SpaceTimeGrid(QuadraturePtr space, std::vector<double> times)
    : space_(std::move(space)), times_(std::move(times)) {
  const std::size_t nt = times_.size();
  std::vector<double> tw(nt, 0.0);
  if (nt == 1) {
    tw[0] = 1.0;
  } else {
    for (std::size_t k = 0; k + 1 < nt; ++k) {
      const double h = times_[k + 1] - times_[k];
      tw[k] += 0.5 * h;
      tw[k + 1] += 0.5 * h;
    }
  }
  const auto& sw = space_->weights();
  weights_.reserve(nt * sw.size());
  for (std::size_t k = 0; k < nt; ++k) {
    for (double w : sw) weights_.push_back(tw[k] * w);
  }
}

SpaceTimeGridPtr SpaceTimeGrid::make(QuadraturePtr space, std::vector<double> times) {
  if (!space) throw InputError("space-time grid needs a spatial quadrature");
  if (times.empty()) throw InputError("space-time grid needs at least one time level");
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) throw InputError("time levels must be strictly increasing");
  }
  return std::shared_ptr<const SpaceTimeGrid>(new SpaceTimeGrid(std::move(space), std::move(times)));
}

SpaceTimeGridPtr SpaceTimeGrid::uniform(QuadraturePtr space, double t_final, int n_intervals) {
  if (n_intervals < 1) throw InputError("need at least one time interval");
  std::vector<double> t(n_intervals + 1);
  for (int k = 0; k <= n_intervals; ++k) t[k] = t_final * k / n_intervals;
  return make(std::move(space), std::move(t));
}

SpaceTimePoint SpaceTimeGrid::point(std::size_t i) const {
  const std::size_t q = i % space_->size();
  const std::size_t k = i / space_->size();
  const auto& x = space_->nodes()[q];
  return {x.x, x.y, times_[k]};
}

double SpaceTimeGrid::measure() const { return pairwise_sum(weights_); }

ExponentField ExponentField::make(SpaceTimeGridPtr grid, std::vector<double> values) {
  if (!grid || values.size() != grid->size()) throw GridMismatch("exponent field size mismatch");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (!(*lo > 1.0) || !std::isfinite(*hi)) {
    throw ExponentOutOfRange("variable exponent must satisfy 1 < p_min <= p_max < inf");
  }
  ExponentField e;
  e.p_min = *lo;
  e.p_max = *hi;
  e.grid = std::move(grid);
  e.values = std::move(values);
  return e;
}

ExponentField ExponentField::constant(SpaceTimeGridPtr grid, double p) {
  const std::size_t n = grid ? grid->size() : 0;
  return make(std::move(grid), std::vector<double>(n, p));
}

namespace {

void require_grid(const SpaceTimeSamples& f, const ExponentField& p) {
  if (!f.grid || f.grid != p.grid || f.values.size() != p.values.size() ||
      f.values.size() != f.grid->size()) {
    throw GridMismatch("samples and exponent live on different grids");
  }
}

void require_sizes(std::span<const double> f, std::span<const double> p,
                   std::span<const double> w) {
  if (f.size() != p.size() || f.size() != w.size()) throw GridMismatch("sample size mismatch");
}

// Sum w |f|^p / lambda^p using precomputed logs; entries with f == 0 contribute nothing.
double scaled_modular(std::span<const double> logf, std::span<const double> p,
                      std::span<const double> w, double log_lambda) {
  std::vector<double> terms(logf.size(), 0.0);
  for (std::size_t i = 0; i < logf.size(); ++i) {
    if (logf[i] == -std::numeric_limits<double>::infinity()) continue;
    terms[i] = w[i] * std::exp(p[i] * (logf[i] - log_lambda));
  }
  return pairwise_sum(terms);
}

}  // namespace

double modular(std::span<const double> f, std::span<const double> p,
               std::span<const double> weights) {
  require_sizes(f, p, weights);
  std::vector<double> terms(f.size(), 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a = std::abs(f[i]);
    if (a != 0.0) terms[i] = weights[i] * std::pow(a, p[i]);
  }
  return pairwise_sum(terms);
}

double modular(const SpaceTimeSamples& f, const ExponentField& p) {
  require_grid(f, p);
  return modular(f.values, p.values, f.grid->weights());
}

double luxembourg_norm(std::span<const double> f, std::span<const double> p,
                       std::span<const double> weights, double tol) {
  require_sizes(f, p, weights);
  if (!(tol > 0.0)) throw InputError("luxembourg_norm: tol must be > 0");
  std::vector<double> logf(f.size());
  bool nonzero = false;
  double p_lo = std::numeric_limits<double>::infinity(), p_hi = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!std::isfinite(f[i])) throw NoConvergence("luxembourg_norm: non-finite sample");
    const double a = std::abs(f[i]);
    if (a != 0.0 && weights[i] > 0.0) nonzero = true;
    logf[i] = a == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(a);
    p_lo = std::min(p_lo, p[i]);
    p_hi = std::max(p_hi, p[i]);
  }
  if (!nonzero) return 0.0;

  auto rho = [&](double log_lambda) { return scaled_modular(logf, p, weights, log_lambda); };
  const double m = rho(0.0);
  if (!std::isfinite(m) || !(m > 0.0)) throw NoConvergence("luxembourg_norm: modular not finite");

  // Start from max(m^(1/p-), m^(1/p+)) and bracket by doubling or halving.
  const double log0 = std::max(std::log(m) / p_lo, std::log(m) / p_hi);
  double lo = log0, hi = log0;
  const double step = std::log(2.0);
  int expansions = 0;
  if (rho(log0) > 1.0) {
    while (rho(hi) > 1.0) {
      lo = hi;
      hi += step;
      if (++expansions > 64) throw NoConvergence("luxembourg_norm: bracket exceeded 2^64");
    }
  } else {
    while (rho(lo) < 1.0) {
      hi = lo;
      lo -= step;
      if (++expansions > 64) throw NoConvergence("luxembourg_norm: bracket exceeded 2^64");
    }
  }

  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double r = rho(mid);
    if (std::abs(r - 1.0) <= tol) return std::exp(mid);
    if (r > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(mid))) {
      return std::exp(mid);
    }
  }
  throw NoConvergence("luxembourg_norm: bisection did not reach tolerance");
}

double luxembourg_norm(const SpaceTimeSamples& f, const ExponentField& p, double tol) {
  require_grid(f, p);
  return luxembourg_norm(f.values, p.values, f.grid->weights(), tol);
}

double variable_sobolev_norm(const SpaceTimeSamples& u_magnitude,
                             const SpaceTimeSamples& grad_magnitude, const ExponentField& p,
                             double tol) {
  require_grid(u_magnitude, p);
  require_grid(grad_magnitude, p);
  const auto& w = u_magnitude.grid->weights();
  std::vector<double> sq(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) sq[i] = w[i] * u_magnitude.values[i] * u_magnitude.values[i];
  return std::sqrt(pairwise_sum(sq)) + luxembourg_norm(grad_magnitude, p, tol);
}

namespace {

void require_conjugate(const ExponentField& p, const ExponentField& q, const ExponentField& s) {
  if (p.grid != q.grid || p.grid != s.grid) throw GridMismatch("exponents on different grids");
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    const double gap = 1.0 / s.values[i] - 1.0 / p.values[i] - 1.0 / q.values[i];
    if (std::abs(gap) > 1e-12) throw ExponentMismatch("1/s != 1/p + 1/q at some sample");
  }
}

SpaceTimeSamples product(const SpaceTimeSamples& f, const SpaceTimeSamples& g) {
  if (f.grid != g.grid || f.values.size() != g.values.size()) {
    throw GridMismatch("samples on different grids");
  }
  SpaceTimeSamples fg{f.grid, f.values};
  for (std::size_t i = 0; i < fg.values.size(); ++i) fg.values[i] *= g.values[i];
  return fg;
}

}  // namespace

InequalityReport holder_check(const SpaceTimeSamples& f, const SpaceTimeSamples& g,
                              const ExponentField& p, const ExponentField& q,
                              const ExponentField& s) {
  require_conjugate(p, q, s);
  const SpaceTimeSamples fg = product(f, g);
  InequalityReport r;
  const double nf = luxembourg_norm(f, p);
  const double ng = luxembourg_norm(g, q);
  r.lhs = luxembourg_norm(fg, s);
  r.rhs = 2.0 * nf * ng;
  r.ratio = (nf == 0.0 || ng == 0.0) ? 0.0 : r.lhs / (nf * ng);
  r.holds = r.lhs <= r.rhs * (1.0 + 1e-12);
  return r;
}

InequalityReport young_check(const SpaceTimeSamples& f, const SpaceTimeSamples& g,
                             const ExponentField& p, const ExponentField& q,
                             const ExponentField& s) {
  require_conjugate(p, q, s);
  const SpaceTimeSamples fg = product(f, g);
  InequalityReport r;
  r.lhs = modular(fg, s);
  r.rhs = modular(f, p) + modular(g, q);
  r.ratio = r.rhs == 0.0 ? 0.0 : r.lhs / r.rhs;
  r.holds = r.lhs <= r.rhs * (1.0 + 1e-12);
  return r;
}

double parabolic_distance(const SpaceTimePoint& a, const SpaceTimePoint& b) {
  return std::hypot(a.x - b.x, a.y - b.y) + std::sqrt(std::abs(a.t - b.t));
}

double euclidean_distance(const SpaceTimePoint& a, const SpaceTimePoint& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dt = a.t - b.t;
  return std::sqrt(dx * dx + dy * dy + dt * dt);
}

double parabolic_holder_seminorm(const SpaceTimeSamples& f, double alpha, int n_pairs,
                                 std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("holder seminorm: alpha must be in (0, 1)");
  if (n_pairs < 1) throw InputError("holder seminorm: n_pairs must be >= 1");
  if (!f.grid || f.values.size() != f.grid->size()) throw GridMismatch("samples/grid mismatch");
  const auto& grid = *f.grid;
  const std::size_t nq = grid.space_size();
  const std::size_t nt = grid.times().size();
  const std::size_t n = static_cast<std::size_t>(grid.space()->resolution());

  double best = 0.0;
  auto visit = [&](std::size_t i, std::size_t j) {
    const double d = parabolic_distance(grid.point(i), grid.point(j));
    if (d > 0.0) best = std::max(best, std::abs(f.values[i] - f.values[j]) / std::pow(d, alpha));
  };
  for (std::size_t k = 0; k < nt; ++k) {
    for (std::size_t iy = 0; iy < n; ++iy) {
      for (std::size_t ix = 0; ix < n; ++ix) {
        const std::size_t i = k * nq + iy * n + ix;
        if (ix + 1 < n) visit(i, i + 1);
        if (iy + 1 < n) visit(i, i + n);
        if (k + 1 < nt) visit(i, i + nq);
      }
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, grid.size() - 1);
  for (int r = 0; r < n_pairs; ++r) visit(pick(rng), pick(rng));
  return best;
}

double log_holder_modulus(const ExponentField& p, double threshold) {
  if (!(threshold > 0.0 && threshold <= 0.5)) {
    throw InputError("log_holder_modulus: threshold must be in (0, 1/2]");
  }
  const auto& grid = *p.grid;
  double best = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const SpaceTimePoint zi = grid.point(i);
    for (std::size_t j = i + 1; j < grid.size(); ++j) {
      const double r = euclidean_distance(zi, grid.point(j));
      if (r > 0.0 && r <= threshold) {
        best = std::max(best, std::abs(p.values[i] - p.values[j]) * -std::log(r));
      }
    }
  }
  return best;
}

double holder_log_constant(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must be in (0, 1)");
  // max of x^b (-log x) on (0, 1) is 1 / (e b) at x = exp(-1/b) < 1/2 for b = alpha / 2.
  return 2.0 / (std::numbers::e * alpha);
}

HolderLogInclusionReport holder_log_inclusion_check(double alpha, double extent, double t_final,
                                                    int n_pairs, std::uint64_t seed) {
  HolderLogInclusionReport r;
  r.constant = holder_log_constant(alpha);
  const double bound_scale = r.constant * std::pow(2.0, alpha);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.0, extent), ut(0.0, t_final);
  std::uniform_real_distribution<double> ue(-15.0, std::log10(0.125));
  std::normal_distribution<double> dir(0.0, 1.0);
  while (r.pairs < n_pairs) {
    const SpaceTimePoint a{ux(rng), ux(rng), ut(rng)};
    double v[3] = {dir(rng), dir(rng), dir(rng)};
    const double vn = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    const double len = std::pow(10.0, ue(rng));
    const SpaceTimePoint b{a.x + len * v[0] / vn, a.y + len * v[1] / vn, a.t + len * v[2] / vn};
    if (b.x < 0.0 || b.x > extent || b.y < 0.0 || b.y > extent || b.t < 0.0 || b.t > t_final) {
      continue;
    }
    const double e = euclidean_distance(a, b);
    if (!(e > 0.0 && e < 0.125)) continue;
    ++r.pairs;
    const double ratio = std::pow(parabolic_distance(a, b), alpha) * -std::log(e) / bound_scale;
    r.max_ratio = std::max(r.max_ratio, ratio);
  }
  r.holds = r.max_ratio <= 1.0;
  return r;
}

}  // namespace synflow
