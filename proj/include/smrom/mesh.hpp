#pragma once

#include "smrom/common.hpp"

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace smrom {

namespace square_tag {
inline constexpr int bottom = 1;
inline constexpr int right = 2;
inline constexpr int top = 3;
inline constexpr int left = 4;
}  // namespace square_tag

namespace channel_tag {
inline constexpr int inlet = 1;
inline constexpr int outlet = 2;
inline constexpr int walls = 3;
inline constexpr int cylinder = 4;
}  // namespace channel_tag

struct BoundaryFacet {
  std::array<int, 2> v;
  int tag = 0;
};

/// Conforming triangulation. Triangles are counterclockwise; h_per_element is
/// the longest edge of each triangle and h_global its maximum.
struct TriMesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryFacet> boundary_facets;
  std::vector<double> h_per_element;
  double h_global = 0.0;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_elements() const { return static_cast<int>(triangles.size()); }
  double signed_area(int k) const;
  double total_area() const;
  std::string descriptor;  ///< e.g. "square n=16", recorded in run metadata
};

/// Builds facets and diameters from raw vertices/triangles. Triangles with
/// negative orientation are flipped. `tagger` receives the two endpoints of each
/// boundary edge and returns its tag.
TriMesh build_mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
                   const std::function<int(const Vec2&, const Vec2&)>& tagger);

TriMesh generate_structured_square(int n);

/// Channel [0,30]x[0,4.5] (unit cylinder diameter) with a 16*refinement-gon hole
/// centred at (10, 2.25).
TriMesh generate_cylinder_channel(int refinement);

struct ElementGeometry {
  Mat2 jacobian;
  double det = 0.0;
  Mat2 inverse_jacobian_transpose;
  double h = 0.0;
};

/// Affine map from the reference triangle (0,0),(1,0),(0,1) onto element k.
ElementGeometry element_geometry(const TriMesh& mesh, int k);

/// Checks orientation, conformity and the boundary cover; returns an empty
/// string when all invariants hold, otherwise the first violation.
std::string check_mesh_invariants(const TriMesh& mesh);

void write_mesh(std::ostream& os, const TriMesh& mesh);
TriMesh read_mesh(std::istream& is);

}  // namespace smrom
