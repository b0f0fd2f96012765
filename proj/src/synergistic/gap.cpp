#include "hyseek/synergistic/gap.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "hyseek/errors.hpp"

namespace hyseek {

namespace {

using std::numbers::pi;

/// Orthonormal tangent basis at p, one column per chart direction.
Eigen::MatrixXd tangent_basis(ManifoldKind kind, const Vec& p) {
  switch (kind) {
    case ManifoldKind::Circle: {
      Eigen::MatrixXd b(2, 1);
      b.col(0) = circle_field(p.head<2>());
      return b;
    }
    case ManifoldKind::Sphere: {
      Vec3 n = p.head<3>();
      Vec3 a = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
      Vec3 u = (a - n * n.dot(a)).normalized();
      Eigen::MatrixXd b(3, 2);
      b.col(0) = u;
      b.col(1) = n.cross(u);
      return b;
    }
    case ManifoldKind::SO3: {
      Eigen::MatrixXd b(9, 3);
      for (int i = 0; i < 3; ++i) b.col(i) = so3_field(i, p) / std::sqrt(2.0);
      return b;
    }
    case ManifoldKind::Polar: {
      Eigen::MatrixXd b = Eigen::MatrixXd::Zero(3, 2);
      b(0, 0) = 1.0;
      b.block<2, 1>(1, 1) = circle_field(p.tail<2>());
      return b;
    }
  }
  return {};
}

Vec retract(ManifoldKind kind, const Vec& p, const Eigen::MatrixXd& basis, const Vec& v) {
  if (kind == ManifoldKind::SO3) {
    Vec3 w = v / std::sqrt(2.0);
    double ang = w.norm();
    Mat3 step = ang > 0.0 ? rodrigues(skew(w / ang), ang) : Mat3::Identity();
    return vec(unvec_raw(p) * step);
  }
  Vec out = p + basis * v;
  if (kind == ManifoldKind::Polar) {
    out.tail(2).normalize();
  } else {
    out.normalize();
  }
  return out;
}

/// Structured chart grid with neighbour lookup.
struct ChartGrid {
  std::vector<int> shape;
  std::vector<bool> periodic;
  std::vector<Vec> points;  // row-major over shape; empty Vec marks a hole
};

ChartGrid make_grid(const PotentialFamily& fam, int n) {
  ChartGrid g;
  switch (fam.manifold()) {
    case ManifoldKind::Circle: {
      g.shape = {n};
      g.periodic = {true};
      for (int i = 0; i < n; ++i) {
        double a = 2.0 * pi * i / n;
        g.points.push_back(Vec2(std::cos(a), std::sin(a)));
      }
      break;
    }
    case ManifoldKind::Sphere: {
      int nlat = std::max(8, static_cast<int>(std::sqrt(n / 2.0)));
      int nlon = 2 * nlat;
      g.shape = {nlat, nlon};
      g.periodic = {false, true};
      for (int i = 0; i < nlat; ++i) {
        double th = pi * (i + 0.5) / nlat;
        for (int j = 0; j < nlon; ++j) {
          double ph = 2.0 * pi * j / nlon;
          g.points.push_back(Vec3(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)));
        }
      }
      break;
    }
    case ManifoldKind::SO3: {
      // Exponential coordinates on the cube [-pi, pi]^3, clipped to the ball.
      int m = std::max(8, static_cast<int>(std::cbrt(n * 6.0 / pi)));
      g.shape = {m, m, m};
      g.periodic = {false, false, false};
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          for (int k = 0; k < m; ++k) {
            Vec3 w(-pi + 2.0 * pi * (i + 0.5) / m, -pi + 2.0 * pi * (j + 0.5) / m,
                   -pi + 2.0 * pi * (k + 0.5) / m);
            double ang = w.norm();
            if (ang > pi) {
              g.points.emplace_back();
              continue;
            }
            Mat3 r = ang > 0.0 ? rodrigues(skew(w / ang), ang) : Mat3::Identity();
            g.points.push_back(vec(r));
          }
      break;
    }
    case ManifoldKind::Polar: {
      int side = std::max(8, static_cast<int>(std::sqrt(static_cast<double>(n))));
      g.shape = {side, side};
      g.periodic = {false, true};
      double r0 = fam.target()[0];
      for (int i = 0; i < side; ++i) {
        double rho = r0 - 4.0 + 8.0 * i / (side - 1);
        for (int j = 0; j < side; ++j) {
          double a = 2.0 * pi * j / side;
          Vec p(3);
          p << rho, std::cos(a), std::sin(a);
          g.points.push_back(p);
        }
      }
      break;
    }
  }
  return g;
}

/// Indices of grid points whose value is <= every existing neighbour's.
std::vector<std::size_t> local_minima(const ChartGrid& g, const std::vector<double>& val) {
  const int d = static_cast<int>(g.shape.size());
  std::vector<std::size_t> stride(d, 1);
  for (int a = d - 2; a >= 0; --a) stride[a] = stride[a + 1] * g.shape[a + 1];

  std::vector<std::size_t> out;
  std::vector<int> idx(d, 0);
  for (std::size_t flat = 0; flat < g.points.size(); ++flat) {
    std::size_t rem = flat;
    for (int a = 0; a < d; ++a) {
      idx[a] = static_cast<int>(rem / stride[a]);
      rem %= stride[a];
    }
    if (g.points[flat].size() == 0) continue;
    bool is_min = true;
    // All 3^d - 1 neighbours.
    int total = 1;
    for (int a = 0; a < d; ++a) total *= 3;
    for (int code = 0; code < total && is_min; ++code) {
      int c = code;
      std::size_t nb = 0;
      bool valid = true;
      bool self = true;
      for (int a = 0; a < d; ++a) {
        int off = c % 3 - 1;
        c /= 3;
        if (off != 0) self = false;
        int k = idx[a] + off;
        if (k < 0 || k >= g.shape[a]) {
          if (!g.periodic[a]) {
            valid = false;
            break;
          }
          k = (k + g.shape[a]) % g.shape[a];
        }
        nb += static_cast<std::size_t>(k) * stride[a];
      }
      if (!valid || self || g.points[nb].size() == 0) continue;
      if (val[nb] < val[flat]) is_min = false;
    }
    if (is_min) out.push_back(flat);
  }
  return out;
}

}  // namespace

bool refine_critical_point(const PotentialFamily& fam, int q, Vec& p, const GapSearchOptions& opts) {
  const ManifoldKind kind = fam.manifold();
  const double fd = 1e-6;
  for (int it = 0; it < opts.max_iterations; ++it) {
    Vec g = fam.tangent_grad(q, p);
    if (g.norm() < opts.converge) return true;
    Eigen::MatrixXd basis = tangent_basis(kind, p);
    const int n = static_cast<int>(basis.cols());
    Vec g0 = basis.transpose() * g;
    Eigen::MatrixXd jac(n, n);
    for (int k = 0; k < n; ++k) {
      Vec v = Vec::Zero(n);
      v[k] = fd;
      Vec gp = basis.transpose() * fam.tangent_grad(q, retract(kind, p, basis, v));
      v[k] = -fd;
      Vec gm = basis.transpose() * fam.tangent_grad(q, retract(kind, p, basis, v));
      jac.col(k) = (gp - gm) / (2.0 * fd);
    }
    Vec step = jac.completeOrthogonalDecomposition().solve(-g0);
    if (!step.allFinite()) return false;
    double len = step.norm();
    if (len > opts.max_step) step *= opts.max_step / len;
    p = retract(kind, p, basis, step);
  }
  return fam.tangent_grad(q, p).norm() < opts.converge;
}

GapReport estimate_synergy_gap(const PotentialFamily& fam, const GapSearchOptions& opts) {
  ChartGrid grid = make_grid(fam, opts.grid_points);
  GapReport report;
  report.gap = std::numeric_limits<double>::infinity();
  std::vector<double> gnorm(grid.points.size(), std::numeric_limits<double>::infinity());

  for (int q = 1; q <= fam.modes(); ++q) {
    for (std::size_t i = 0; i < grid.points.size(); ++i) {
      if (grid.points[i].size() != 0) gnorm[i] = fam.tangent_grad(q, grid.points[i]).norm();
    }
    std::vector<Vec> found;
    for (std::size_t s : local_minima(grid, gnorm)) {
      ++report.seeds;
      Vec p = grid.points[s];
      if (!refine_critical_point(fam, q, p, opts)) continue;
      bool dup = false;
      for (const auto& f : found) {
        if ((f - p).norm() < opts.dedupe_radius) {
          dup = true;
          break;
        }
      }
      if (dup) continue;
      found.push_back(p);
      if ((p - fam.target()).norm() < opts.dedupe_radius) continue;
      CriticalPoint cp{q, p, fam.eval(q, p), synergy_mu(fam, p, q), fam.tangent_grad(q, p).norm()};
      report.gap = std::min(report.gap, cp.margin);
      report.points.push_back(std::move(cp));
    }
  }
  if (report.points.empty()) {
    throw NoCriticalPointsFound("no critical point other than the target converged from " +
                                std::to_string(report.seeds) + " seeds");
  }
  return report;
}

}  // namespace hyseek
