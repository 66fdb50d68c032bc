#include "oracles.hpp"
#include "smrom/assembly.hpp"
#include "smrom/fe.hpp"
#include "smrom/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <doctest.h>

using namespace smrom;

namespace {

std::shared_ptr<const TaylorHoodSpace> square_space(int n) {
  return std::make_shared<const TaylorHoodSpace>(std::make_shared<const TriMesh>(generate_structured_square(n)));
}

double max_abs(const SparseMatrix& a) {
  double m = 0.0;
  for (int i = 0; i < a.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(a, i); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

double asymmetry(const SparseMatrix& a) {
  const SparseMatrix at = a.transpose();
  return max_abs(a - at);
}

}  // namespace

TEST_CASE("space dof counts") {
  for (int n : {1, 3, 6}) {
    const auto s = square_space(n);
    CHECK(s->n_vel_dofs() == 2 * (s->mesh().n_vertices() + s->n_edges()));
    CHECK(s->n_pres_dofs() == s->mesh().n_vertices());
  }
}

TEST_CASE("edge nodes are shared across neighbours") {
  const auto s = square_space(3);
  std::map<std::pair<int, int>, int> mid;
  for (int k = 0; k < s->mesh().n_elements(); ++k) {
    const auto& t = s->mesh().triangles[static_cast<std::size_t>(k)];
    const auto& nodes = s->element_nodes(k);
    for (int e = 0; e < 3; ++e) {
      const int a = t[p2_edge_vertices[e][0]], b = t[p2_edge_vertices[e][1]];
      const auto key = std::make_pair(std::min(a, b), std::max(a, b));
      const auto it = mid.find(key);
      if (it == mid.end()) mid[key] = nodes[3 + e];
      else CHECK(it->second == nodes[3 + e]);
      CHECK((s->node(nodes[3 + e]) - 0.5 * (s->mesh().vertices[a] + s->mesh().vertices[b])).norm() <= 1e-15);
    }
  }
}

TEST_CASE("quadrature rule is exact to degree 5") {
  const auto& rule = gauss7();
  for (int a = 0; a <= 5; ++a) {
    for (int b = 0; a + b <= 5; ++b) {
      double q = 0.0;
      for (std::size_t i = 0; i < rule.weights.size(); ++i)
        q += 0.5 * rule.weights[i] * std::pow(rule.points[i][1], a) * std::pow(rule.points[i][2], b);
      const double exact = std::tgamma(a + 1.0) * std::tgamma(b + 1.0) / std::tgamma(a + b + 3.0);
      CHECK(std::abs(q - exact) <= 1e-15);
    }
  }
}

TEST_CASE("velocity mass matrix") {
  for (int n : {1, 4, 7}) {
    const auto s = square_space(n);
    const SparseMatrix m = assemble_mass_velocity(*s);
    CHECK(std::abs(Vec::Ones(m.rows()).dot(m * Vec::Ones(m.rows())) - 2.0) <= 1e-12);
    CHECK(asymmetry(m) <= 1e-12 * max_abs(m));
  }
  const auto s = square_space(2);
  const Mat dense = Mat(assemble_mass_velocity(*s));
  Eigen::SelfAdjointEigenSolver<Mat> eig(dense);
  CHECK(eig.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("pressure mass of a single element") {
  const auto mesh = std::make_shared<const TriMesh>(
      build_mesh({Vec2(0, 0), Vec2(2, 0), Vec2(0.5, 1.5)}, {{0, 1, 2}}, [](const Vec2&, const Vec2&) { return 1; }));
  const TaylorHoodSpace s(mesh);
  const Mat m = Mat(assemble_mass_pressure(s));
  const double area = 1.5;
  Mat expect(3, 3);
  expect << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  expect *= area / 12.0;
  CHECK((m - expect).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("stiffness matrix") {
  const auto s = square_space(5);
  const SparseMatrix k = assemble_stiffness_velocity(*s);
  CHECK(asymmetry(k) <= 1e-12 * max_abs(k));
  const Vec c = s->interpolate_velocity([](const Vec2&) { return Vec2(0.3, -1.7); });
  CHECK((k * c).cwiseAbs().maxCoeff() <= 1e-12);
  const Vec lin = s->interpolate_velocity([](const Vec2& x) { return Vec2(x.x(), 0.0); });
  CHECK(std::abs(lin.dot(k * lin) - 1.0) <= 1e-12);
  std::mt19937_64 rng(1);
  const Vec u = oracle::random_vec(rng, s->n_vel_dofs());
  const double direct = oracle::integrate(*s, [&](int e, const std::array<double, 3>& l, const Vec2&) {
    return oracle::eval_p2(*s, u, e, l).grad.squaredNorm();
  });
  CHECK(u.dot(k * u) >= 0.0);
  CHECK(std::abs(u.dot(k * u) - direct) <= 1e-12 * direct);
}

TEST_CASE("divergence matrix") {
  const auto s = square_space(4);
  const SparseMatrix b = assemble_divergence(*s);
  CHECK(b.rows() == s->n_pres_dofs());
  CHECK(b.cols() == s->n_vel_dofs());
  const Vec c = s->interpolate_velocity([](const Vec2&) { return Vec2(1.0, 2.0); });
  CHECK((b * c).cwiseAbs().maxCoeff() <= 1e-13);
  const Vec radial = s->interpolate_velocity([](const Vec2& x) { return x; });
  CHECK(std::abs((b * radial).sum() - 2.0) <= 1e-12);
  std::mt19937_64 rng(2);
  const Vec u = oracle::random_vec(rng, s->n_vel_dofs());
  const Vec q = oracle::random_vec(rng, s->n_pres_dofs());
  const double direct = oracle::integrate(*s, [&](int e, const std::array<double, 3>& l, const Vec2&) {
    return oracle::eval_p1(*s, q, e, l) * oracle::eval_p2(*s, u, e, l).grad.trace();
  });
  CHECK(std::abs(q.dot(b * u) - direct) <= 1e-12 * std::max(1.0, std::abs(direct)));
}

TEST_CASE("grad-div matrix") {
  const auto s = square_space(4);
  const SparseMatrix g = assemble_graddiv(*s);
  CHECK(asymmetry(g) <= 1e-12 * max_abs(g));
  const Vec rot = s->interpolate_velocity([](const Vec2& x) { return Vec2(x.y(), -x.x()); });
  CHECK(std::abs(rot.dot(g * rot)) <= 1e-12);
  const Vec radial = s->interpolate_velocity([](const Vec2& x) { return x; });
  CHECK(std::abs(radial.dot(g * radial) - 4.0) <= 1e-12);
  std::mt19937_64 rng(3);
  const Vec u = oracle::random_vec(rng, s->n_vel_dofs());
  const double direct = oracle::integrate(*s, [&](int e, const std::array<double, 3>& l, const Vec2&) {
    const double d = oracle::eval_p2(*s, u, e, l).grad.trace();
    return d * d;
  });
  CHECK(std::abs(u.dot(g * u) - direct) <= 1e-12 * direct);
}

TEST_CASE("trilinear form and convection matrix") {
  std::mt19937_64 rng(4);
  for (int n : {2, 4}) {
    const auto s = square_space(n);
    const SparseMatrix m = assemble_mass_velocity(*s);
    for (int trial = 0; trial < 5; ++trial) {
      const Vec u = oracle::random_vec(rng, s->n_vel_dofs());
      const Vec v = oracle::random_vec(rng, s->n_vel_dofs());
      const Vec w = oracle::random_vec(rng, s->n_vel_dofs());
      const double nu = std::sqrt(u.dot(m * u)), nv = std::sqrt(v.dot(m * v)), nw = std::sqrt(w.dot(m * w));
      CHECK(std::abs(trilinear_b(*s, u, v, v)) <= 1e-13 * nu * nv * nv);
      const double bvw = trilinear_b(*s, u, v, w);
      CHECK(std::abs(bvw + trilinear_b(*s, u, w, v)) <= 1e-12 * (std::abs(bvw) + nu * nv * nw));
      const double ref = oracle::trilinear(*s, u, v, w);
      CHECK(std::abs(bvw - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
      const SparseMatrix c = assemble_convection(*s, u);
      CHECK(std::abs(w.dot(c * v) - bvw) <= 1e-12 * std::max(1.0, std::abs(bvw)));
      const SparseMatrix ct = c.transpose();
      CHECK(max_abs(c + ct) <= 1e-12 * max_abs(c));
    }
    const Vec zero = Vec::Zero(s->n_vel_dofs());
    const Vec v = oracle::random_vec(rng, s->n_vel_dofs());
    CHECK(trilinear_b(*s, zero, v, v) == 0.0);
    CHECK(max_abs(assemble_convection(*s, zero)) == 0.0);
  }
}

TEST_CASE("tau-weighted pressure stiffness") {
  const auto s = square_space(4);
  const int ne = s->mesh().n_elements();
  std::vector<double> ones(static_cast<std::size_t>(ne), 1.0);
  const SparseMatrix a1 = assemble_pressure_tau_stiffness(*s, ones);
  CHECK(asymmetry(a1) <= 1e-12 * max_abs(a1));
  CHECK((a1 * Vec::Ones(a1.rows())).cwiseAbs().maxCoeff() <= 1e-12);
  std::mt19937_64 rng(5);
  const Vec p = oracle::random_vec(rng, s->n_pres_dofs());
  double direct = 0.0;
  for (int k = 0; k < ne; ++k) direct += oracle::Triangle(s->mesh(), k).area * oracle::grad_p1(*s, p, k).squaredNorm();
  CHECK(std::abs(p.dot(a1 * p) - direct) <= 1e-12 * direct);
  const double h = s->mesh().h_global;
  std::vector<double> h2(static_cast<std::size_t>(ne), h * h);
  const SparseMatrix ah = assemble_pressure_tau_stiffness(*s, h2);
  CHECK(max_abs(ah - h * h * a1) <= 1e-15 * max_abs(ah));
}

TEST_CASE("elementwise laplacian") {
  const auto s = square_space(3);
  const Vec lin = s->interpolate_velocity([](const Vec2& x) { return Vec2(2 * x.x() - x.y(), 3 * x.y()); });
  for (const Vec2& l : elementwise_laplacian(*s, lin)) CHECK(l.norm() <= 1e-11);
  const Vec quad = s->interpolate_velocity([](const Vec2& x) { return Vec2(x.x() * x.x(), 0.0); });
  for (const Vec2& l : elementwise_laplacian(*s, quad)) CHECK((l - Vec2(2.0, 0.0)).norm() <= 1e-10);

  std::mt19937_64 rng(6);
  const Vec u = oracle::random_vec(rng, s->n_vel_dofs());
  const auto lap = elementwise_laplacian(*s, u);
  const double eps = 1e-3;
  for (int k = 0; k < s->mesh().n_elements(); ++k) {
    const oracle::Triangle t(s->mesh(), k);
    const Vec2 c = t.point({1.0 / 3, 1.0 / 3, 1.0 / 3});
    auto value = [&](const Vec2& x) {
      std::array<double, 3> l;
      for (int a = 0; a < 3; ++a) l[a] = 1.0 / 3.0 + t.grad_l[a].dot(x - c);
      return oracle::eval_p2(*s, u, k, l).u;
    };
    const Vec2 fd = (value(c + Vec2(eps, 0)) + value(c - Vec2(eps, 0)) + value(c + Vec2(0, eps)) +
                     value(c - Vec2(0, eps)) - 4.0 * value(c)) /
                    (eps * eps);
    CHECK((fd - lap[static_cast<std::size_t>(k)]).norm() <= 1e-6 * std::max(1.0, fd.norm()));
  }
}

TEST_CASE("tau inner product") {
  const auto s = square_space(3);
  const int ne = s->mesh().n_elements();
  const SparseMatrix m = assemble_mass_velocity(*s);
  std::mt19937_64 rng(8);
  const Vec a = oracle::random_vec(rng, s->n_vel_dofs());
  const Vec b = oracle::random_vec(rng, s->n_vel_dofs());
  const Vec z = Vec::Zero(s->n_vel_dofs());
  std::vector<double> c(static_cast<std::size_t>(ne), 0.37);
  CHECK(tau_inner_product(*s, c, z, z) == 0.0);
  CHECK(std::abs(tau_inner_product(*s, c, a, b) - 0.37 * a.dot(m * b)) <= 1e-12 * std::abs(a.dot(m * b)));
  std::vector<double> tau(static_cast<std::size_t>(ne));
  for (auto& t : tau) t = std::uniform_real_distribution<double>(0.1, 2.0)(rng);
  const double direct = oracle::integrate(*s, [&](int k, const std::array<double, 3>& l, const Vec2&) {
    return tau[static_cast<std::size_t>(k)] * oracle::eval_p2(*s, a, k, l).u.dot(oracle::eval_p2(*s, b, k, l).u);
  });
  CHECK(std::abs(tau_inner_product(*s, tau, a, b) - direct) <= 1e-12 * std::max(1.0, std::abs(direct)));
  CHECK(tau_inner_product(*s, tau, a, a) >= 0.0);
}

TEST_CASE("assembly agrees with a higher-order rule") {
  const auto s = square_space(2);
  std::mt19937_64 rng(9);
  const Vec u = oracle::random_vec(rng, s->n_vel_dofs());
  const Vec v = oracle::random_vec(rng, s->n_vel_dofs());
  const SparseMatrix m = assemble_mass_velocity(*s);
  const double mass = oracle::integrate(*s, [&](int k, const std::array<double, 3>& l, const Vec2&) {
    return oracle::eval_p2(*s, u, k, l).u.dot(oracle::eval_p2(*s, v, k, l).u);
  }, 8);
  CHECK(std::abs(u.dot(m * v) - mass) <= 1e-13 * std::max(1.0, std::abs(mass)));
}

TEST_CASE("discretely divergence-free fields are orthogonal to pressures") {
  const auto s = square_space(3);
  const Mat b = Mat(assemble_divergence(*s));
  Eigen::FullPivLU<Mat> lu(b);
  const Mat kernel = lu.kernel();
  std::mt19937_64 rng(10);
  const Vec v = kernel * oracle::random_vec(rng, kernel.cols());
  const Vec p = oracle::random_vec(rng, s->n_pres_dofs());
  CHECK(std::abs(v.dot(b.transpose() * p)) <= 1e-12 * v.norm() * p.norm());
}
