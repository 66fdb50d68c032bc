#pragma once

#include <array>
#include <vector>

namespace smrom {

/// Quadrature on the reference triangle in barycentric coordinates; the
/// weights sum to one, so integrals are weight * area.
struct TriangleRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int degree = 0;
};

/// 7-point rule, exact for total degree 5. All assembly uses it.
const TriangleRule& gauss7();

/// Collapsed (Duffy) tensor Gauss-Legendre rule with n points per direction,
/// exact for total degree 2n-2. Tests use it as an independent oracle.
TriangleRule collapsed_gauss(int n);

/// Gauss-Legendre nodes/weights on [0,1].
struct LineRule {
  std::vector<double> points;
  std::vector<double> weights;
};
LineRule gauss_legendre(int n);

}  // namespace smrom
