#include "smrom/fe.hpp"

namespace smrom {

ElementBasis::ElementBasis(const TriMesh& mesh, int k) {
  const auto& t = mesh.triangles[static_cast<std::size_t>(k)];
  for (int i = 0; i < 3; ++i) x_[i] = mesh.vertices[t[i]];
  const ElementGeometry g = element_geometry(mesh, k);
  grad_l_[1] = g.inverse_jacobian_transpose.col(0);
  grad_l_[2] = g.inverse_jacobian_transpose.col(1);
  grad_l_[0] = -grad_l_[1] - grad_l_[2];
  area_ = 0.5 * g.det;
}

Vec2 ElementBasis::point(const Bary& l) const { return l[0] * x_[0] + l[1] * x_[1] + l[2] * x_[2]; }

std::array<double, 6> ElementBasis::p2_values(const Bary& l) const {
  std::array<double, 6> v{};
  for (int i = 0; i < 3; ++i) v[i] = l[i] * (2.0 * l[i] - 1.0);
  for (int e = 0; e < 3; ++e) {
    const auto [a, b] = p2_edge_vertices[e];
    v[3 + e] = 4.0 * l[a] * l[b];
  }
  return v;
}

std::array<Vec2, 6> ElementBasis::p2_gradients(const Bary& l) const {
  std::array<Vec2, 6> g;
  for (int i = 0; i < 3; ++i) g[i] = (4.0 * l[i] - 1.0) * grad_l_[i];
  for (int e = 0; e < 3; ++e) {
    const auto [a, b] = p2_edge_vertices[e];
    g[3 + e] = 4.0 * (l[a] * grad_l_[b] + l[b] * grad_l_[a]);
  }
  return g;
}

std::array<Mat2, 6> ElementBasis::p2_hessians() const {
  std::array<Mat2, 6> h;
  for (int i = 0; i < 3; ++i) h[i] = 4.0 * grad_l_[i] * grad_l_[i].transpose();
  for (int e = 0; e < 3; ++e) {
    const auto [a, b] = p2_edge_vertices[e];
    h[3 + e] = 4.0 * (grad_l_[a] * grad_l_[b].transpose() + grad_l_[b] * grad_l_[a].transpose());
  }
  return h;
}

}  // namespace smrom
