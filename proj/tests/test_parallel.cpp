#include "oracles.hpp"
#include "smrom/assembly.hpp"
#include "smrom/fom.hpp"
#include "smrom/rom.hpp"

#include <doctest.h>

using namespace smrom;

namespace {

bool same(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.nonZeros() != b.nonZeros()) return false;
  return Mat(a) == Mat(b);
}

std::shared_ptr<const TaylorHoodSpace> space(int n) {
  return std::make_shared<const TaylorHoodSpace>(std::make_shared<const TriMesh>(generate_structured_square(n)));
}

}  // namespace

TEST_CASE("assembly kernels are bit identical across backends") {
  const auto s = space(10);
  std::mt19937_64 rng(41);
  const Vec u = oracle::random_vec(rng, s->n_vel_dofs());
  CHECK(same(assemble_mass_velocity(*s, Exec::serial), assemble_mass_velocity(*s, Exec::parallel)));
  CHECK(same(assemble_stiffness_velocity(*s, Exec::serial), assemble_stiffness_velocity(*s, Exec::parallel)));
  CHECK(same(assemble_graddiv(*s, Exec::serial), assemble_graddiv(*s, Exec::parallel)));
  CHECK(same(assemble_divergence(*s, Exec::serial), assemble_divergence(*s, Exec::parallel)));
  CHECK(same(assemble_mass_pressure(*s, Exec::serial), assemble_mass_pressure(*s, Exec::parallel)));
  CHECK(same(assemble_convection(*s, u, Exec::serial), assemble_convection(*s, u, Exec::parallel)));
  const VelocityFunction f = [](const Vec2& x, double t) { return Vec2(std::sin(x.x() + t), x.y()); };
  CHECK(assemble_load(*s, f, 0.3, Exec::serial) == assemble_load(*s, f, 0.3, Exec::parallel));
}

TEST_CASE("FOM runs are bit identical across backends") {
  const auto s = space(6);
  FOMConfig c;
  c.dt = 0.02;
  c.t_end = 0.1;
  c.scheme = TimeScheme::implicit;
  const SnapshotSet a = run_fom(s, cavity_problem(1.0), c, {}, Exec::serial);
  const SnapshotSet b = run_fom(s, cavity_problem(1.0), c, {}, Exec::parallel);
  CHECK(a.velocity == b.velocity);
  CHECK(a.pressure == b.pressure);
}

TEST_CASE("reduced operators are bit identical across backends") {
  const auto s = space(5);
  auto mv = std::make_shared<const SparseMatrix>(assemble_mass_velocity(*s));
  auto mp = std::make_shared<const SparseMatrix>(assemble_mass_pressure(*s));
  std::mt19937_64 rng(43);
  Mat us(s->n_vel_dofs(), 4), ps(s->n_pres_dofs(), 3);
  for (int j = 0; j < 4; ++j) us.col(j) = oracle::random_vec(rng, us.rows());
  for (int j = 0; j < 3; ++j) ps.col(j) = oracle::random_vec(rng, ps.rows());
  PODBasis vb = compute_pod(us, mv, 1.0, -1, Exec::serial);
  vb.offset = oracle::random_vec(rng, us.rows());
  const PODBasis pb = compute_pod(ps, mp, 1.0, -1, Exec::serial);
  const TauCoefficients tau = make_tau(s->mesh(), 1.0);
  const ReducedOperators a = build_reduced_operators(vb, pb, *s, ROMConfig{}, tau, vb.offset, Exec::serial);
  const ReducedOperators b = build_reduced_operators(vb, pb, *s, ROMConfig{}, tau, vb.offset, Exec::parallel);
  CHECK(a.stiffness == b.stiffness);
  CHECK(a.pres_stiffness == b.pres_stiffness);
  CHECK(a.pres_laplacian == b.pres_laplacian);
  for (std::size_t i = 0; i < a.convection.size(); ++i) CHECK(a.convection[i] == b.convection[i]);
  for (std::size_t i = 0; i < a.pres_convection.size(); ++i) CHECK(a.pres_convection[i] == b.pres_convection[i]);
}
