#pragma once

#include "smrom/common.hpp"
#include "smrom/mesh.hpp"

#include <array>

namespace smrom {

/// Local P2 node numbering: 0,1,2 vertices; 3 = mid(0,1), 4 = mid(1,2), 5 = mid(2,0).
inline constexpr std::array<std::array<int, 2>, 3> p2_edge_vertices{{{0, 1}, {1, 2}, {2, 0}}};

using Bary = std::array<double, 3>;

/// Lagrange P1/P2 shape functions on one affine triangle, expressed through
/// barycentric coordinates and their (constant) physical gradients.
class ElementBasis {
 public:
  ElementBasis(const TriMesh& mesh, int k);

  double area() const { return area_; }
  const std::array<Vec2, 3>& grad_bary() const { return grad_l_; }
  Vec2 point(const Bary& l) const;

  std::array<double, 6> p2_values(const Bary& l) const;
  std::array<Vec2, 6> p2_gradients(const Bary& l) const;
  /// Second derivatives are constant on affine triangles.
  std::array<Mat2, 6> p2_hessians() const;

  std::array<double, 3> p1_values(const Bary& l) const { return l; }
  const std::array<Vec2, 3>& p1_gradients() const { return grad_l_; }

 private:
  std::array<Vec2, 3> x_;
  std::array<Vec2, 3> grad_l_;
  double area_ = 0.0;
};

}  // namespace smrom
