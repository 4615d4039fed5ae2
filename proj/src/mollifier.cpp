#include "synflow/mollifier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "synflow/errors.hpp"
#include "synflow/numeric.hpp"

namespace synflow {

double bump(double r2) { return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0; }

namespace {

struct Offset {
  int dx, dy, dt;
  double w;
};

bool uniform_times(const std::vector<double>& t, double& h) {
  if (t.size() < 2) {
    h = 1.0;
    return true;
  }
  h = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (std::abs(t[k] - (t.front() + h * static_cast<double>(k))) > 1e-9 * std::max(1.0, std::abs(h))) {
      return false;
    }
  }
  return h > 0.0;
}

}  // namespace

SpaceTimeSamples mollify(const SpaceTimeSamples& c, double epsilon) {
  if (!(epsilon > 0.0)) throw InputError("mollify: epsilon must be > 0");
  const auto& grid = *c.grid;
  if (c.values.size() != grid.size()) throw GridMismatch("mollify: sample count does not match grid");
  const Quadrature& quad = *grid.space();
  if (quad.kind() != QuadratureKind::Uniform) {
    throw GridMismatch("mollify: requires a uniform spatial rule");
  }
  double ht = 0.0;
  if (!uniform_times(grid.times(), ht)) throw GridMismatch("mollify: requires uniform time levels");

  const int n = quad.resolution();
  const int nt = static_cast<int>(grid.times().size());
  const double h = quad.domain().extent / n;
  const int rx = static_cast<int>(std::floor(epsilon / h));
  const int rt = nt > 1 ? static_cast<int>(std::floor(epsilon / ht)) : 0;

  std::vector<Offset> offsets;
  double mass = 0.0;
  for (int k = -rt; k <= rt; ++k) {
    for (int j = -rx; j <= rx; ++j) {
      for (int i = -rx; i <= rx; ++i) {
        const double r2 = ((i * h) * (i * h) + (j * h) * (j * h) + (k * ht) * (k * ht)) /
                          (epsilon * epsilon);
        const double w = bump(r2);
        if (w > 0.0) {
          offsets.push_back({i, j, k, w});
          mass += w;
        }
      }
    }
  }
  if (offsets.empty()) offsets.push_back({0, 0, 0, mass = 1.0});
  for (auto& o : offsets) o.w /= mass;

  SpaceTimeSamples out{c.grid, std::vector<double>(c.values.size(), 0.0)};
  const std::size_t q_size = static_cast<std::size_t>(n) * n;
  for (int it = 0; it < nt; ++it) {
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < n; ++ix) {
        double s = 0.0;
        for (const Offset& o : offsets) {
          const int jt = it - o.dt, jy = iy - o.dy, jx = ix - o.dx;
          if (jt < 0 || jt >= nt || jy < 0 || jy >= n || jx < 0 || jx >= n) continue;
          s += o.w * c.values[static_cast<std::size_t>(jt) * q_size + static_cast<std::size_t>(jy) * n + jx];
        }
        out.values[static_cast<std::size_t>(it) * q_size + static_cast<std::size_t>(iy) * n + ix] = s;
      }
    }
  }
  return out;
}

void MollifierHistory::record(double t, const Eigen::VectorXd& b, double window) {
  if (!entries_.empty() && t <= entries_.back().first) {
    entries_.back().second = b;
    return;
  }
  entries_.emplace_back(t, b);
  // Keep one entry at or before t - window so interpolation stays bracketed.
  while (entries_.size() > 2 && entries_[1].first <= t - window) entries_.pop_front();
}

Eigen::VectorXd MollifierHistory::at(double s, double t_now, const Eigen::VectorXd& b_now) const {
  if (s < 0.0) return Eigen::VectorXd::Zero(b_now.size());
  if (entries_.empty()) return b_now;
  const auto& last = entries_.back();
  if (s >= last.first) {
    const double span = t_now - last.first;
    if (span <= 0.0) return b_now;
    const double th = std::min(1.0, (s - last.first) / span);
    return (1.0 - th) * last.second + th * b_now;
  }
  if (s <= entries_.front().first) return entries_.front().second;
  const auto it = std::upper_bound(entries_.begin(), entries_.end(), s,
                                   [](double v, const auto& e) { return v < e.first; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double th = (s - lo.first) / (hi.first - lo.first);
  return (1.0 - th) * lo.second + th * hi.second;
}

LaggedMollifier::LaggedMollifier(const ConcentrationBasis& basis, double epsilon, int n_lags,
                                 int n_radial, int n_angular)
    : epsilon_(epsilon) {
  if (!(epsilon > 0.0)) throw InputError("LaggedMollifier: epsilon must be > 0");
  const auto& nodes = basis.quadrature()->nodes();
  const Domain& dom = basis.quadrature()->domain();
  const int m = basis.size();
  const std::size_t q = nodes.size();

  const auto [sig, wsig] = gauss_legendre(n_lags, -epsilon, epsilon);
  const double dth = 2.0 * std::numbers::pi / n_angular;

  // Weights of every (lag, radius, angle) node, normalized to unit total mass.
  struct Ring {
    double rho, w;
  };
  std::vector<std::vector<Ring>> rings(n_lags);
  double mass = 0.0;
  for (int l = 0; l < n_lags; ++l) {
    const double r = std::sqrt(std::max(0.0, epsilon * epsilon - sig[l] * sig[l]));
    const auto [rho, wr] = gauss_legendre(n_radial, 0.0, r);
    for (int i = 0; i < n_radial; ++i) {
      const double w = wsig[l] * wr[i] * rho[i] * dth *
                       bump((rho[i] * rho[i] + sig[l] * sig[l]) / (epsilon * epsilon));
      rings[l].push_back({rho[i], w});
      mass += w * n_angular;
    }
  }

  // Mode values at displaced points; sine tables make the square case cheap.
  const bool square = dom.mode == DomainMode::UnitSquareDirichlet;
  int kmax = 0;
  for (const auto& md : basis.modes()) kmax = std::max({kmax, md.k, md.l});
  std::vector<double> sx(kmax + 1), sy(kmax + 1);
  const double kappa = std::numbers::pi / dom.extent;
  auto accumulate = [&](const Point& x, double w, Eigen::Ref<Eigen::RowVectorXd> row) {
    if (square) {
      if (x.x < 0.0 || x.x > dom.extent || x.y < 0.0 || x.y > dom.extent) return;
      for (int k = 1; k <= kmax; ++k) {
        sx[k] = std::sin(k * kappa * x.x);
        sy[k] = std::sin(k * kappa * x.y);
      }
      const double scale = w * 2.0 / dom.extent;
      for (int k = 0; k < m; ++k) row[k] += scale * sx[basis.modes()[k].k] * sy[basis.modes()[k].l];
    } else {
      for (int k = 0; k < m; ++k) row[k] += w * basis.mode_value(k, x);
    }
  };

  lags_.resize(n_lags);
  kernel_.resize(n_lags);
  for (int l = 0; l < n_lags; ++l) {
    lags_[l] = epsilon + sig[l];
    Eigen::MatrixXd& kl = kernel_[l];
    kl = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(q), m);
    for (std::size_t iq = 0; iq < q; ++iq) {
      Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(m);
      for (const Ring& rg : rings[l]) {
        for (int a = 0; a < n_angular; ++a) {
          const double th = (a + 0.5) * dth;
          const Point y{nodes[iq].x - rg.rho * std::cos(th), nodes[iq].y - rg.rho * std::sin(th)};
          accumulate(y, rg.w / mass, row);
        }
      }
      kl.row(static_cast<Eigen::Index>(iq)) = row;
    }
  }
}

Eigen::ArrayXd LaggedMollifier::evaluate(double t, const Eigen::VectorXd& b_now,
                                         const MollifierHistory& history) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(kernel_.front().rows());
  for (std::size_t l = 0; l < lags_.size(); ++l) {
    const double s = t - lags_[l];
    if (s < 0.0) continue;
    out.noalias() += kernel_[l] * history.at(s, t, b_now);
  }
  return out.array();
}

}  // namespace synflow
