#include "smrom/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace smrom {

const TriangleRule& gauss7() {
  static const TriangleRule rule = [] {
    const double s = std::sqrt(15.0);
    const double a1 = (9.0 - 2.0 * s) / 21.0, b1 = (6.0 + s) / 21.0;
    const double a2 = (9.0 + 2.0 * s) / 21.0, b2 = (6.0 - s) / 21.0;
    const double w0 = 9.0 / 40.0;
    const double w1 = (155.0 + s) / 1200.0;
    const double w2 = (155.0 - s) / 1200.0;
    TriangleRule r;
    r.degree = 5;
    r.points = {{1.0 / 3, 1.0 / 3, 1.0 / 3}, {a1, b1, b1}, {b1, a1, b1}, {b1, b1, a1},
                {a2, b2, b2},                {b2, a2, b2}, {b2, b2, a2}};
    r.weights = {w0, w1, w1, w1, w2, w2, w2};
    return r;
  }();
  return rule;
}

LineRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre needs n >= 1");
  LineRule rule;
  rule.points.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? x : p1;
      const double pm = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pm) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.points[static_cast<std::size_t>(i)] = 0.5 * (1.0 - x);
    rule.weights[static_cast<std::size_t>(i)] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

TriangleRule collapsed_gauss(int n) {
  const LineRule g = gauss_legendre(n);
  TriangleRule r;
  r.degree = 2 * n - 2;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double u = g.points[i];
      const double v = g.points[j];
      const double xi = u;
      const double eta = v * (1.0 - u);
      r.points.push_back({1.0 - xi - eta, xi, eta});
      // reference area is 1/2; weights normalised to sum one
      r.weights.push_back(2.0 * g.weights[i] * g.weights[j] * (1.0 - u));
    }
  }
  return r;
}

}  // namespace smrom
