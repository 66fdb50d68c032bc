#include "smrom/space.hpp"

#include "smrom/fe.hpp"

#include <algorithm>
#include <map>

namespace smrom {

TaylorHoodSpace::TaylorHoodSpace(std::shared_ptr<const TriMesh> mesh) : mesh_(std::move(mesh)) {
  const TriMesh& m = *mesh_;
  node_coords_ = m.vertices;
  std::map<std::pair<int, int>, int> edge_index;
  element_nodes_.resize(m.triangles.size());
  for (int k = 0; k < m.n_elements(); ++k) {
    const auto& t = m.triangles[static_cast<std::size_t>(k)];
    auto& nodes = element_nodes_[static_cast<std::size_t>(k)];
    for (int i = 0; i < 3; ++i) nodes[i] = t[i];
    for (int e = 0; e < 3; ++e) {
      int a = t[p2_edge_vertices[e][0]];
      int b = t[p2_edge_vertices[e][1]];
      if (a > b) std::swap(a, b);
      auto [it, inserted] = edge_index.try_emplace({a, b}, static_cast<int>(edges_.size()));
      if (inserted) {
        edges_.push_back({a, b});
        node_coords_.push_back(0.5 * (m.vertices[a] + m.vertices[b]));
      }
      nodes[3 + e] = m.n_vertices() + it->second;
    }
  }
  node_tags_.resize(node_coords_.size());
  auto add_tag = [this](int node, int tag) {
    auto& tags = node_tags_[static_cast<std::size_t>(node)];
    if (std::find(tags.begin(), tags.end(), tag) == tags.end()) tags.push_back(tag);
  };
  for (const auto& f : m.boundary_facets) {
    add_tag(f.v[0], f.tag);
    add_tag(f.v[1], f.tag);
    const int a = std::min(f.v[0], f.v[1]);
    const int b = std::max(f.v[0], f.v[1]);
    add_tag(m.n_vertices() + edge_index.at({a, b}), f.tag);
  }
}

std::array<int, 12> TaylorHoodSpace::element_vel_dofs(int k) const {
  const auto& nodes = element_nodes(k);
  std::array<int, 12> dofs{};
  for (int a = 0; a < 6; ++a) {
    dofs[a] = vel_dof(0, nodes[a]);
    dofs[6 + a] = vel_dof(1, nodes[a]);
  }
  return dofs;
}

Vec TaylorHoodSpace::interpolate_velocity(const std::function<Vec2(const Vec2&)>& u) const {
  Vec out(n_vel_dofs());
  for (int i = 0; i < n_nodes(); ++i) {
    const Vec2 v = u(node_coords_[static_cast<std::size_t>(i)]);
    out[vel_dof(0, i)] = v.x();
    out[vel_dof(1, i)] = v.y();
  }
  return out;
}

Vec TaylorHoodSpace::interpolate_pressure(const std::function<double(const Vec2&)>& p) const {
  Vec out(n_pres_dofs());
  for (int i = 0; i < n_pres_dofs(); ++i) out[i] = p(node_coords_[static_cast<std::size_t>(i)]);
  return out;
}

Vec2 TaylorHoodSpace::eval_velocity(const Vec& u, int k, const std::array<double, 3>& bary) const {
  const ElementBasis basis(*mesh_, k);
  const auto phi = basis.p2_values(bary);
  const auto& nodes = element_nodes(k);
  Vec2 v = Vec2::Zero();
  for (int a = 0; a < 6; ++a) {
    v.x() += phi[a] * u[vel_dof(0, nodes[a])];
    v.y() += phi[a] * u[vel_dof(1, nodes[a])];
  }
  return v;
}

DirichletData::DirichletData(const TaylorHoodSpace& space, std::vector<BoundaryCondition> conditions)
    : conditions_(std::move(conditions)), n_vel_(space.n_vel_dofs()) {
  mask_.assign(static_cast<std::size_t>(n_vel_), 0);
  for (const auto& c : conditions_) time_dependent_ = time_dependent_ || c.time_dependent;
  for (int node = 0; node < space.n_nodes(); ++node) {
    const auto& tags = space.node_boundary_tags(node);
    if (tags.empty()) continue;
    for (int comp = 0; comp < 2; ++comp) {
      int best = -1;
      for (int ci = 0; ci < static_cast<int>(conditions_.size()); ++ci) {
        const auto& c = conditions_[static_cast<std::size_t>(ci)];
        if (!c.components[static_cast<std::size_t>(comp)]) continue;
        if (std::find(tags.begin(), tags.end(), c.tag) == tags.end()) continue;
        if (best < 0 || c.priority > conditions_[static_cast<std::size_t>(best)].priority) best = ci;
      }
      if (best < 0) continue;
      const int dof = space.vel_dof(comp, node);
      entries_.push_back({dof, comp, space.node(node), best});
      mask_[static_cast<std::size_t>(dof)] = 1;
    }
  }
  std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) { return a.dof < b.dof; });
  for (const auto& e : entries_) dofs_.push_back(e.dof);
}

Vec DirichletData::values(double t) const {
  Vec g = Vec::Zero(n_vel_);
  for (const auto& e : entries_) {
    g[e.dof] = conditions_[static_cast<std::size_t>(e.condition)].value(e.x, t)[e.component];
  }
  return g;
}

void DirichletData::apply(Vec& u, double t) const {
  for (const auto& e : entries_) {
    u[e.dof] = conditions_[static_cast<std::size_t>(e.condition)].value(e.x, t)[e.component];
  }
}

}  // namespace smrom
