#pragma once

// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls the library's element basis or assembly routines.

#include "smrom/common.hpp"
#include "smrom/mesh.hpp"
#include "smrom/quadrature.hpp"
#include "smrom/space.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using smrom::Mat;
using smrom::Mat2;
using smrom::Vec;
using smrom::Vec2;

struct Triangle {
  std::array<Vec2, 3> x;
  std::array<Vec2, 3> grad_l;
  double area = 0.0;

  Triangle(const smrom::TriMesh& mesh, int k) {
    const auto& t = mesh.triangles[static_cast<std::size_t>(k)];
    for (int a = 0; a < 3; ++a) x[a] = mesh.vertices[t[a]];
    const double det = (x[1] - x[0]).x() * (x[2] - x[0]).y() - (x[1] - x[0]).y() * (x[2] - x[0]).x();
    area = 0.5 * std::abs(det);
    for (int a = 0; a < 3; ++a) {
      const Vec2& p = x[(a + 1) % 3];
      const Vec2& q = x[(a + 2) % 3];
      grad_l[a] = Vec2(p.y() - q.y(), q.x() - p.x()) / det;
    }
  }
  Vec2 point(const std::array<double, 3>& l) const { return l[0] * x[0] + l[1] * x[1] + l[2] * x[2]; }
};

/// P2 shape values/gradients in the local order 0,1,2, mid(01), mid(12), mid(20).
inline void p2_shape(const Triangle& t, const std::array<double, 3>& l, double n[6], Vec2 g[6]) {
  static constexpr int e[3][2] = {{0, 1}, {1, 2}, {2, 0}};
  for (int a = 0; a < 3; ++a) {
    n[a] = l[a] * (2.0 * l[a] - 1.0);
    g[a] = (4.0 * l[a] - 1.0) * t.grad_l[a];
  }
  for (int m = 0; m < 3; ++m) {
    const int i = e[m][0], j = e[m][1];
    n[3 + m] = 4.0 * l[i] * l[j];
    g[3 + m] = 4.0 * (l[i] * t.grad_l[j] + l[j] * t.grad_l[i]);
  }
}

struct PointValue {
  Vec2 u = Vec2::Zero();
  Mat2 grad = Mat2::Zero();  // grad(c, d) = d u_c / d x_d
};

inline PointValue eval_p2(const smrom::TaylorHoodSpace& space, const Vec& u, int k, const std::array<double, 3>& l) {
  const Triangle t(space.mesh(), k);
  double n[6];
  Vec2 g[6];
  p2_shape(t, l, n, g);
  PointValue out;
  const auto& nodes = space.element_nodes(k);
  for (int a = 0; a < 6; ++a) {
    for (int c = 0; c < 2; ++c) {
      const double v = u[space.vel_dof(c, nodes[a])];
      out.u[c] += v * n[a];
      out.grad.row(c) += v * g[a].transpose();
    }
  }
  return out;
}

inline double eval_p1(const smrom::TaylorHoodSpace& space, const Vec& p, int k, const std::array<double, 3>& l) {
  const auto& t = space.mesh().triangles[static_cast<std::size_t>(k)];
  return l[0] * p[t[0]] + l[1] * p[t[1]] + l[2] * p[t[2]];
}

inline Vec2 grad_p1(const smrom::TaylorHoodSpace& space, const Vec& p, int k) {
  const Triangle tr(space.mesh(), k);
  const auto& t = space.mesh().triangles[static_cast<std::size_t>(k)];
  return p[t[0]] * tr.grad_l[0] + p[t[1]] * tr.grad_l[1] + p[t[2]] * tr.grad_l[2];
}

/// Sum over elements of a high-degree (collapsed Gauss, degree 2n-2) quadrature.
inline double integrate(const smrom::TaylorHoodSpace& space,
                        const std::function<double(int, const std::array<double, 3>&, const Vec2&)>& f, int n = 6) {
  const smrom::TriangleRule rule = smrom::collapsed_gauss(n);
  double sum = 0.0;
  for (int k = 0; k < space.mesh().n_elements(); ++k) {
    const Triangle t(space.mesh(), k);
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      sum += rule.weights[q] * t.area * f(k, rule.points[q], t.point(rule.points[q]));
    }
  }
  return sum;
}

/// b(u, v, w) = 1/2 [(u . grad v, w) - (u . grad w, v)].
inline double trilinear(const smrom::TaylorHoodSpace& space, const Vec& u, const Vec& v, const Vec& w) {
  return integrate(space, [&](int k, const std::array<double, 3>& l, const Vec2&) {
    const PointValue pu = eval_p2(space, u, k, l), pv = eval_p2(space, v, k, l), pw = eval_p2(space, w, k, l);
    return 0.5 * ((pv.grad * pu.u).dot(pw.u) - (pw.grad * pu.u).dot(pv.u));
  });
}

inline Vec random_vec(std::mt19937_64& rng, Eigen::Index n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

/// Element containing x (brute force), with its barycentric coordinates.
inline int locate(const smrom::TriMesh& mesh, const Vec2& x, std::array<double, 3>& l) {
  for (int k = 0; k < mesh.n_elements(); ++k) {
    const Triangle t(mesh, k);
    bool inside = true;
    for (int a = 0; a < 3; ++a) {
      l[a] = 1.0 / 3.0 + t.grad_l[a].dot(x - (t.x[0] + t.x[1] + t.x[2]) / 3.0);
      if (l[a] < -1e-12) inside = false;
    }
    if (inside) return k;
  }
  return -1;
}

/// Least-squares slope/intercept on (log10 x, log10 y) by the normal equations.
inline std::array<double, 2> loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log10(x[i]), ly = std::log10(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {slope, (sy - slope * sx) / n};
}

/// dt * sum_n |u_n - sum_{i<r} (u_n, phi_i) phi_i|^2 through explicit reconstruction.
inline double reconstruction_error(const Mat& snaps, const Mat& modes, const smrom::SparseMatrix& w, double dt, int r) {
  double sum = 0.0;
  for (Eigen::Index n = 0; n < snaps.cols(); ++n) {
    Vec rec = Vec::Zero(snaps.rows());
    for (int i = 0; i < r; ++i) rec += modes.col(i).dot(w * snaps.col(n)) * modes.col(i);
    const Vec e = snaps.col(n) - rec;
    sum += e.dot(w * e);
  }
  return dt * sum;
}

/// A random admissible instance of the discrete Gronwall recursion
/// (1 - sigma dt) a_{n+1} + b_{n+1} <= (1 + tau dt) a_n + g_{n+1}, with a
/// sequence built by spending a random fraction of the right side.
struct GronwallCase {
  double alpha0, sigma, tau, delta, dt;
  std::vector<double> gamma, alpha, beta;
};

inline GronwallCase random_gronwall_case(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  GronwallCase c;
  c.delta = 0.02 + 0.98 * u(rng);
  c.dt = std::pow(10.0, -3.0 + 3.0 * u(rng));
  c.sigma = u(rng) < 0.15 ? 0.0 : u(rng) * (1.0 - c.delta) / c.dt;
  c.tau = u(rng) < 0.15 ? 0.0 : 4.0 * u(rng);
  c.alpha0 = u(rng) < 0.1 ? 0.0 : 10.0 * u(rng);
  const int n = 1 + static_cast<int>(60 * u(rng));
  double a = c.alpha0;
  for (int l = 0; l < n; ++l) {
    const double g = u(rng) < 0.2 ? 0.0 : 2.0 * u(rng);
    const double rhs = (1.0 + c.tau * c.dt) * a + g;
    const double slack = u(rng) < 0.3 ? 1.0 : u(rng);
    const double theta = u(rng);
    const double b = (1.0 - theta) * slack * rhs;
    a = theta * slack * rhs / (1.0 - c.sigma * c.dt);
    c.gamma.push_back(g);
    c.alpha.push_back(a);
    c.beta.push_back(b);
  }
  return c;
}

}  // namespace oracle
