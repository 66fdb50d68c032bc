#pragma once

#include "smrom/common.hpp"
#include "smrom/mesh.hpp"

#include <array>
#include <functional>
#include <memory>
#include <vector>

namespace smrom {

/// Taylor-Hood P2/P1 dof bookkeeping. Scalar P2 nodes are the mesh vertices
/// followed by one node per edge; velocity dofs are blocked by component
/// (dof = component * n_nodes + node). Pressure dofs are the mesh vertices.
class TaylorHoodSpace {
 public:
  explicit TaylorHoodSpace(std::shared_ptr<const TriMesh> mesh);

  const TriMesh& mesh() const { return *mesh_; }
  std::shared_ptr<const TriMesh> mesh_ptr() const { return mesh_; }

  int n_nodes() const { return static_cast<int>(node_coords_.size()); }
  int n_edges() const { return static_cast<int>(edges_.size()); }
  int n_vel_dofs() const { return 2 * n_nodes(); }
  int n_pres_dofs() const { return mesh_->n_vertices(); }

  int vel_dof(int component, int node) const { return component * n_nodes() + node; }
  const std::array<int, 6>& element_nodes(int k) const { return element_nodes_[static_cast<std::size_t>(k)]; }
  /// Velocity dofs of element k: x-components of the 6 nodes, then y-components.
  std::array<int, 12> element_vel_dofs(int k) const;
  const std::array<int, 3>& element_pres_dofs(int k) const { return mesh_->triangles[static_cast<std::size_t>(k)]; }

  const Vec2& node(int i) const { return node_coords_[static_cast<std::size_t>(i)]; }
  const std::array<int, 2>& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }
  /// Tags of the boundary facets touching node i (empty for interior nodes).
  const std::vector<int>& node_boundary_tags(int i) const { return node_tags_[static_cast<std::size_t>(i)]; }

  Vec interpolate_velocity(const std::function<Vec2(const Vec2&)>& u) const;
  Vec interpolate_pressure(const std::function<double(const Vec2&)>& p) const;

  /// Value of a velocity field at barycentric coordinates of element k.
  Vec2 eval_velocity(const Vec& u, int k, const std::array<double, 3>& bary) const;

 private:
  std::shared_ptr<const TriMesh> mesh_;
  std::vector<Vec2> node_coords_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<int, 6>> element_nodes_;
  std::vector<std::vector<int>> node_tags_;
};

/// One Dirichlet condition on all facets with `tag`; `components` selects which
/// velocity components are prescribed (free slip prescribes only one). Where
/// several conditions meet at a node, the highest priority wins per component.
struct BoundaryCondition {
  int tag = 0;
  int priority = 0;
  std::array<bool, 2> components{true, true};
  std::function<Vec2(const Vec2&, double)> value;
  bool time_dependent = false;
};

class DirichletData {
 public:
  DirichletData() = default;
  DirichletData(const TaylorHoodSpace& space, std::vector<BoundaryCondition> conditions);

  const std::vector<int>& dofs() const { return dofs_; }
  bool is_dirichlet(int dof) const { return mask_[static_cast<std::size_t>(dof)] != 0; }
  bool time_dependent() const { return time_dependent_; }
  /// Full-length velocity vector holding the prescribed values at time t and
  /// zero on free dofs.
  Vec values(double t) const;
  /// Overwrite the Dirichlet entries of u with the values at time t.
  void apply(Vec& u, double t) const;

 private:
  struct Entry {
    int dof;
    int component;
    Vec2 x;
    int condition;
  };
  std::vector<BoundaryCondition> conditions_;
  std::vector<Entry> entries_;
  std::vector<int> dofs_;
  std::vector<char> mask_;
  int n_vel_ = 0;
  bool time_dependent_ = false;
};

}  // namespace smrom
