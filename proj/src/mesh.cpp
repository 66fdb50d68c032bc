#include "smrom/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

namespace smrom {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::picard_divergence: return "PicardDivergence";
    case ErrorCode::singular_system: return "SingularSystem";
    case ErrorCode::empty_snapshot_set: return "EmptySnapshotSet";
    case ErrorCode::non_spd_weight: return "NonSPDWeight";
    case ErrorCode::all_zero_spectrum: return "AllZeroSpectrum";
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::time_grid_mismatch: return "TimeGridMismatch";
    case ErrorCode::hypothesis_violated: return "HypothesisViolated";
    case ErrorCode::degenerate_fit: return "DegenerateFit";
    case ErrorCode::unknown_tag: return "UnknownTag";
    case ErrorCode::non_convergence: return "NonConvergence";
    case ErrorCode::mesh_generation: return "MeshGeneration";
    case ErrorCode::io: return "IOError";
    case ErrorCode::config: return "ConfigError";
  }
  return "Unknown";
}

double TriMesh::signed_area(int k) const {
  const auto& t = triangles[static_cast<std::size_t>(k)];
  const Vec2 e1 = vertices[t[1]] - vertices[t[0]];
  const Vec2 e2 = vertices[t[2]] - vertices[t[0]];
  return 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
}

double TriMesh::total_area() const {
  double a = 0.0;
  for (int k = 0; k < n_elements(); ++k) a += signed_area(k);
  return a;
}

namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey edge_key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

double longest_edge(const TriMesh& m, const std::array<int, 3>& t) {
  double h = 0.0;
  for (int e = 0; e < 3; ++e) {
    h = std::max(h, (m.vertices[t[(e + 1) % 3]] - m.vertices[t[e]]).norm());
  }
  return h;
}

}  // namespace

TriMesh build_mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
                   const std::function<int(const Vec2&, const Vec2&)>& tagger) {
  TriMesh mesh;
  mesh.vertices = std::move(vertices);
  mesh.triangles = std::move(triangles);
  for (int k = 0; k < mesh.n_elements(); ++k) {
    if (mesh.signed_area(k) < 0.0) std::swap(mesh.triangles[k][1], mesh.triangles[k][2]);
  }

  std::map<EdgeKey, int> count;
  for (const auto& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) ++count[edge_key(t[e], t[(e + 1) % 3])];
  }
  for (const auto& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      const int a = t[e];
      const int b = t[(e + 1) % 3];
      if (count[edge_key(a, b)] == 1) {
        mesh.boundary_facets.push_back({{a, b}, tagger(mesh.vertices[a], mesh.vertices[b])});
      }
    }
  }

  mesh.h_per_element.reserve(mesh.triangles.size());
  for (const auto& t : mesh.triangles) {
    mesh.h_per_element.push_back(longest_edge(mesh, t));
    mesh.h_global = std::max(mesh.h_global, mesh.h_per_element.back());
  }
  return mesh;
}

TriMesh generate_structured_square(int n) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "square mesh needs n >= 1");
  std::vector<Vec2> verts;
  verts.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      verts.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
    }
  }
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::array<int, 3>> tris;
  tris.reserve(static_cast<std::size_t>(2 * n * n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      // split along the lower-left to upper-right diagonal
      tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  auto tagger = [](const Vec2& a, const Vec2& b) {
    const Vec2 m = 0.5 * (a + b);
    constexpr double eps = 1e-12;
    if (m.y() < eps) return square_tag::bottom;
    if (m.x() > 1.0 - eps) return square_tag::right;
    if (m.y() > 1.0 - eps) return square_tag::top;
    return square_tag::left;
  };
  TriMesh mesh = build_mesh(std::move(verts), std::move(tris), tagger);
  // every element has legs 1/n, so the diameter is exactly the diagonal
  const double h = std::sqrt(2.0) / n;
  std::fill(mesh.h_per_element.begin(), mesh.h_per_element.end(), h);
  mesh.h_global = h;
  mesh.descriptor = "square n=" + std::to_string(n);
  return mesh;
}

namespace {

std::vector<double> graded_line(const std::vector<std::pair<double, int>>& segments, double start) {
  std::vector<double> xs{start};
  double x0 = start;
  for (const auto& [x1, cells] : segments) {
    for (int c = 1; c <= cells; ++c) xs.push_back(x0 + (x1 - x0) * c / cells);
    xs.back() = x1;
    x0 = x1;
  }
  return xs;
}

}  // namespace

TriMesh generate_cylinder_channel(int refinement) {
  if (refinement < 1) throw Error(ErrorCode::invalid_argument, "cylinder mesh needs refinement >= 1");
  constexpr double length = 30.0;
  constexpr double width = 4.5;
  const Vec2 centre(10.0, 2.25);
  constexpr double radius = 0.5;
  constexpr double box_half = 1.0;

  const int ref = refinement;
  const int box_cells = 4 * ref;  // per box side, so the polygon has 16*ref vertices
  const int wall_cells = static_cast<int>(std::ceil((centre.y() - box_half) * 2.0 * ref));
  const std::vector<double> xs = graded_line(
      {{centre.x() - box_half, 18 * ref}, {centre.x() + box_half, box_cells}, {length, 38 * ref}}, 0.0);
  const std::vector<double> ys = graded_line(
      {{centre.y() - box_half, wall_cells}, {centre.y() + box_half, box_cells}, {width, wall_cells}}, 0.0);
  const int nx = static_cast<int>(xs.size());
  const int ny = static_cast<int>(ys.size());
  const int i0 = 18 * ref, i1 = i0 + box_cells;
  const int j0 = wall_cells, j1 = j0 + box_cells;

  std::vector<Vec2> verts;
  std::vector<int> grid_id(static_cast<std::size_t>(nx * ny), -1);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const bool inside_box = i > i0 && i < i1 && j > j0 && j < j1;
      if (inside_box) continue;
      grid_id[static_cast<std::size_t>(j * nx + i)] = static_cast<int>(verts.size());
      verts.emplace_back(xs[i], ys[j]);
    }
  }
  auto gid = [&](int i, int j) { return grid_id[static_cast<std::size_t>(j * nx + i)]; };

  std::vector<std::array<int, 3>> tris;
  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      if (i >= i0 && i < i1 && j >= j0 && j < j1) continue;
      tris.push_back({gid(i, j), gid(i + 1, j), gid(i + 1, j + 1)});
      tris.push_back({gid(i, j), gid(i + 1, j + 1), gid(i, j + 1)});
    }
  }

  // box perimeter, counterclockwise from the lower-left corner
  std::vector<int> perimeter;
  for (int i = i0; i < i1; ++i) perimeter.push_back(gid(i, j0));
  for (int j = j0; j < j1; ++j) perimeter.push_back(gid(i1, j));
  for (int i = i1; i > i0; --i) perimeter.push_back(gid(i, j1));
  for (int j = j1; j > j0; --j) perimeter.push_back(gid(i0, j));
  const int np = static_cast<int>(perimeter.size());

  const int layers = 2 * ref;
  std::vector<std::vector<int>> ring(static_cast<std::size_t>(layers + 1), std::vector<int>(np));
  for (int k = 0; k < np; ++k) {
    const Vec2 s = verts[perimeter[k]];
    const Vec2 d = s - centre;
    const double theta = std::atan2(d.y(), d.x());
    const Vec2 c = centre + radius * Vec2(std::cos(theta), std::sin(theta));
    if (c.x() <= 0.0 || c.x() >= length || c.y() <= 0.0 || c.y() >= width) {
      throw Error(ErrorCode::mesh_generation, "cylinder polygon intersects the channel boundary");
    }
    ring[layers][k] = perimeter[k];
    for (int l = 0; l < layers; ++l) {
      const double t = static_cast<double>(l) / layers;
      ring[l][k] = static_cast<int>(verts.size());
      verts.push_back((1.0 - t) * c + t * s);
    }
  }
  for (int l = 0; l < layers; ++l) {
    for (int k = 0; k < np; ++k) {
      const int kn = (k + 1) % np;
      const int a = ring[l][k], b = ring[l][kn], c = ring[l + 1][kn], d = ring[l + 1][k];
      tris.push_back({a, b, c});
      tris.push_back({a, c, d});
    }
  }

  auto tagger = [&](const Vec2& a, const Vec2& b) {
    const Vec2 m = 0.5 * (a + b);
    constexpr double eps = 1e-9;
    if (m.x() < eps) return channel_tag::inlet;
    if (m.x() > length - eps) return channel_tag::outlet;
    if (m.y() < eps || m.y() > width - eps) return channel_tag::walls;
    return channel_tag::cylinder;
  };
  TriMesh mesh = build_mesh(std::move(verts), std::move(tris), tagger);
  mesh.descriptor = "cylinder refinement=" + std::to_string(refinement);
  return mesh;
}

ElementGeometry element_geometry(const TriMesh& mesh, int k) {
  const auto& t = mesh.triangles[static_cast<std::size_t>(k)];
  ElementGeometry g;
  g.jacobian.col(0) = mesh.vertices[t[1]] - mesh.vertices[t[0]];
  g.jacobian.col(1) = mesh.vertices[t[2]] - mesh.vertices[t[0]];
  g.det = g.jacobian.determinant();
  const Mat2& J = g.jacobian;
  Mat2 inv;
  inv << J(1, 1), -J(0, 1), -J(1, 0), J(0, 0);
  inv /= g.det;
  g.inverse_jacobian_transpose = inv.transpose();
  g.h = mesh.h_per_element[static_cast<std::size_t>(k)];
  return g;
}

std::string check_mesh_invariants(const TriMesh& mesh) {
  std::ostringstream err;
  for (int k = 0; k < mesh.n_elements(); ++k) {
    if (!(mesh.signed_area(k) > 0.0)) {
      err << "element " << k << " has non-positive signed area";
      return err.str();
    }
  }
  std::map<EdgeKey, int> count;
  for (const auto& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) ++count[edge_key(t[e], t[(e + 1) % 3])];
  }
  std::map<EdgeKey, int> facet_count;
  for (const auto& f : mesh.boundary_facets) ++facet_count[edge_key(f.v[0], f.v[1])];
  for (const auto& [edge, c] : count) {
    if (c > 2) {
      err << "edge (" << edge.first << "," << edge.second << ") shared by " << c << " elements";
      return err.str();
    }
    const auto it = facet_count.find(edge);
    const int fc = it == facet_count.end() ? 0 : it->second;
    if ((c == 1 && fc != 1) || (c == 2 && fc != 0)) {
      err << "boundary facets do not cover edge (" << edge.first << "," << edge.second << ")";
      return err.str();
    }
  }
  if (facet_count.size() != mesh.boundary_facets.size()) return "duplicate boundary facet";
  for (const auto& [edge, fc] : facet_count) {
    if (!count.contains(edge)) return "boundary facet is not an element edge";
  }
  // hanging nodes show up as vertices strictly inside a boundary facet
  for (const auto& f : mesh.boundary_facets) {
    const Vec2 a = mesh.vertices[f.v[0]];
    const Vec2 b = mesh.vertices[f.v[1]];
    const Vec2 d = b - a;
    const double len2 = d.squaredNorm();
    for (int v = 0; v < mesh.n_vertices(); ++v) {
      if (v == f.v[0] || v == f.v[1]) continue;
      const Vec2 p = mesh.vertices[v] - a;
      const double t = p.dot(d) / len2;
      if (t <= 1e-12 || t >= 1.0 - 1e-12) continue;
      const double cross = p.x() * d.y() - p.y() * d.x();
      if (std::abs(cross) <= 1e-12 * len2) {
        err << "hanging node " << v << " on facet (" << f.v[0] << "," << f.v[1] << ")";
        return err.str();
      }
    }
  }
  double hmax = 0.0;
  for (double h : mesh.h_per_element) hmax = std::max(hmax, h);
  if (mesh.h_per_element.size() != mesh.triangles.size() || hmax != mesh.h_global) {
    return "h_global is not the maximum element diameter";
  }
  return {};
}

void write_mesh(std::ostream& os, const TriMesh& mesh) {
  os << "SMROM-MESH 1\n";
  os.precision(17);
  os << mesh.vertices.size() << '\n';
  for (const auto& v : mesh.vertices) os << v.x() << ' ' << v.y() << '\n';
  os << mesh.triangles.size() << '\n';
  for (const auto& t : mesh.triangles) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  os << mesh.boundary_facets.size() << '\n';
  for (const auto& f : mesh.boundary_facets) os << f.v[0] << ' ' << f.v[1] << ' ' << f.tag << '\n';
}

TriMesh read_mesh(std::istream& is) {
  std::string magic;
  int version = 0;
  is >> magic >> version;
  if (magic != "SMROM-MESH" || version != 1) {
    throw Error(ErrorCode::io, "not an SMROM-MESH version 1 stream");
  }
  std::size_t nv = 0, nt = 0, nf = 0;
  is >> nv;
  std::vector<Vec2> verts(nv);
  for (auto& v : verts) is >> v.x() >> v.y();
  is >> nt;
  std::vector<std::array<int, 3>> tris(nt);
  for (auto& t : tris) is >> t[0] >> t[1] >> t[2];
  is >> nf;
  std::map<EdgeKey, int> tags;
  for (std::size_t i = 0; i < nf; ++i) {
    int a = 0, b = 0, tag = 0;
    is >> a >> b >> tag;
    tags[edge_key(a, b)] = tag;
  }
  if (!is) throw Error(ErrorCode::io, "truncated mesh stream");
  std::map<std::pair<double, double>, int> index;
  for (int i = 0; i < static_cast<int>(verts.size()); ++i) index[{verts[i].x(), verts[i].y()}] = i;
  auto tagger = [&](const Vec2& a, const Vec2& b) {
    const int ia = index.at({a.x(), a.y()});
    const int ib = index.at({b.x(), b.y()});
    const auto it = tags.find(edge_key(ia, ib));
    return it == tags.end() ? 0 : it->second;
  };
  return build_mesh(std::move(verts), std::move(tris), tagger);
}

}  // namespace smrom
