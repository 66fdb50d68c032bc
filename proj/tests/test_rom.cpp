#include "oracles.hpp"
#include "smrom/assembly.hpp"
#include "smrom/rom.hpp"

#include <doctest.h>

using namespace smrom;

namespace {

struct Setup {
  std::shared_ptr<const TaylorHoodSpace> space;
  std::shared_ptr<const SparseMatrix> mv, mp;
  PODBasis vb, pb;
  TauCoefficients tau;

  Setup(int n, int r, int rp, std::uint64_t seed, bool with_lift) {
    space = std::make_shared<const TaylorHoodSpace>(std::make_shared<const TriMesh>(generate_structured_square(n)));
    mv = std::make_shared<const SparseMatrix>(assemble_mass_velocity(*space));
    mp = std::make_shared<const SparseMatrix>(assemble_mass_pressure(*space));
    std::mt19937_64 rng(seed);
    Mat us(space->n_vel_dofs(), r), ps(space->n_pres_dofs(), rp);
    for (int j = 0; j < r; ++j) us.col(j) = oracle::random_vec(rng, us.rows());
    for (int j = 0; j < rp; ++j) ps.col(j) = oracle::random_vec(rng, ps.rows());
    vb = compute_pod(us, mv, 1.0);
    pb = compute_pod(ps, mp, 1.0);
    vb.offset = with_lift ? oracle::random_vec(rng, us.rows()) : Vec::Zero(us.rows());
    tau = make_tau(space->mesh(), 0.7);
  }

  ReducedOperators build(const ROMConfig& rc, const Vec& init) const {
    return build_reduced_operators(vb, pb, *space, rc, tau, init);
  }
};

// Element Laplacian of a P2 field, from shape second derivatives.
Vec2 laplacian_p2(const TaylorHoodSpace& space, const Vec& u, int k) {
  const oracle::Triangle t(space.mesh(), k);
  static constexpr int e[3][2] = {{0, 1}, {1, 2}, {2, 0}};
  double lap[6];
  for (int a = 0; a < 3; ++a) lap[a] = 4.0 * t.grad_l[a].squaredNorm();
  for (int m = 0; m < 3; ++m) lap[3 + m] = 8.0 * t.grad_l[e[m][0]].dot(t.grad_l[e[m][1]]);
  Vec2 out = Vec2::Zero();
  const auto& nodes = space.element_nodes(k);
  for (int a = 0; a < 6; ++a) {
    for (int c = 0; c < 2; ++c) out[c] += lap[a] * u[space.vel_dof(c, nodes[a])];
  }
  return out;
}

}  // namespace

TEST_CASE("reduced operators match full-space quadrature") {
  const Setup s(3, 4, 3, 21, true);
  ROMConfig rc;
  rc.nu = 0.02;
  rc.mu_graddiv = 0.3;
  const ReducedOperators ops = s.build(rc, s.vb.offset);
  const TaylorHoodSpace& sp = *s.space;
  const Vec& lift = s.vb.offset;
  const auto phi = [&](int i) -> Vec { return s.vb.modes.col(i); };
  const auto psi = [&](int i) -> Vec { return s.pb.modes.col(i); };
  double scale = ops.convection[0].cwiseAbs().maxCoeff();
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(ops.lift_convection[i] - oracle::trilinear(sp, lift, lift, phi(i))) <= 1e-11 * scale);
    for (int j = 0; j < 4; ++j) {
      const double st = oracle::integrate(sp, [&](int k, const std::array<double, 3>& l, const Vec2&) {
        const auto a = oracle::eval_p2(sp, phi(j), k, l), b = oracle::eval_p2(sp, phi(i), k, l);
        return (a.grad.array() * b.grad.array()).sum();
      });
      CHECK(std::abs(ops.stiffness(i, j) - st) <= 1e-10 * std::abs(st));
      CHECK(std::abs(ops.lift_advected(i, j) - oracle::trilinear(sp, lift, phi(j), phi(i))) <= 1e-11 * scale);
      CHECK(std::abs(ops.lift_advecting(i, j) - oracle::trilinear(sp, phi(j), lift, phi(i))) <= 1e-11 * scale);
      for (int k = 0; k < 4; ++k) {
        const double c = ops.convection[static_cast<std::size_t>(i)](j, k);
        CHECK(std::abs(c - oracle::trilinear(sp, phi(j), phi(k), phi(i))) <= 1e-11 * scale);
        CHECK(std::abs(c + ops.convection[static_cast<std::size_t>(k)](j, i)) <= 1e-12 * scale);
      }
    }
  }
  const auto tau_k = [&](int k) { return s.tau.values[static_cast<std::size_t>(k)]; };
  REQUIRE(ops.rp == 3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double ap = oracle::integrate(sp, [&](int k, const std::array<double, 3>&, const Vec2&) {
        return tau_k(k) * oracle::grad_p1(sp, psi(j), k).dot(oracle::grad_p1(sp, psi(i), k));
      });
      CHECK(std::abs(ops.pres_stiffness(i, j) - ap) <= 1e-10 * std::abs(ap));
    }
    for (int j = 0; j < 4; ++j) {
      const double tp = oracle::integrate(sp, [&](int k, const std::array<double, 3>& l, const Vec2&) {
        return tau_k(k) * oracle::eval_p2(sp, phi(j), k, l).u.dot(oracle::grad_p1(sp, psi(i), k));
      });
      const double lp = oracle::integrate(sp, [&](int k, const std::array<double, 3>&, const Vec2&) {
        return tau_k(k) * laplacian_p2(sp, phi(j), k).dot(oracle::grad_p1(sp, psi(i), k));
      });
      const double tscale = ops.pres_time.cwiseAbs().maxCoeff();
      CHECK(std::abs(ops.pres_time(i, j) - tp) <= 1e-11 * tscale);
      CHECK(std::abs(ops.pres_laplacian(i, j) - lp) <= 1e-10 * ops.pres_laplacian.cwiseAbs().maxCoeff());
    }
  }
}

TEST_CASE("pressure recovery reproduces a gradient forcing") {
  const Setup s(4, 3, 3, 5, false);
  const TaylorHoodSpace& sp = *s.space;
  const Vec psi0 = s.pb.modes.col(0);
  ROMConfig rc;
  rc.forcing = [&](const Vec2& x, double) {
    std::array<double, 3> l{};
    const int k = oracle::locate(sp.mesh(), x, l);
    return oracle::grad_p1(sp, psi0, k);
  };
  const ReducedOperators ops = s.build(rc, Vec::Zero(sp.n_vel_dofs()));
  const Vec a = Vec::Zero(3);
  const PressureRecovery pr = recover_pressure(a, a, ops, 0.1, 0.1);
  CHECK_FALSE(pr.near_singular);
  Vec e1 = Vec::Zero(3);
  e1[0] = 1.0;
  CHECK((pr.b - e1).norm() <= 1e-9);
}

TEST_CASE("recovery right side matches the full-space residual") {
  const Setup s(3, 4, 2, 9, true);
  const TaylorHoodSpace& sp = *s.space;
  ROMConfig rc;
  rc.nu = 0.05;
  rc.forcing = [](const Vec2& x, double t) { return Vec2(x.y() * t, 1.0 - x.x() * x.x()); };
  const ReducedOperators ops = s.build(rc, s.vb.offset);
  std::mt19937_64 rng(3);
  const Vec an = oracle::random_vec(rng, 4), an1 = oracle::random_vec(rng, 4);
  const double dt = 0.2, t = 0.6;
  const Vec u_n = reconstruct_field(s.vb, an), u = reconstruct_field(s.vb, an1);
  const Vec rhs = pressure_recovery_rhs(an1, an, ops, dt, t);
  for (int i = 0; i < 2; ++i) {
    const Vec psi = s.pb.modes.col(i);
    const double full = -oracle::integrate(sp, [&](int k, const std::array<double, 3>& l, const Vec2& x) {
      const auto pu = oracle::eval_p2(sp, u, k, l), pn = oracle::eval_p2(sp, u_n, k, l);
      const Vec2 res = (pu.u - pn.u) / dt + pu.grad * pu.u - rc.nu * laplacian_p2(sp, u, k) - rc.forcing(x, t);
      return s.tau.values[static_cast<std::size_t>(k)] * res.dot(oracle::grad_p1(sp, psi, k));
    });
    CHECK(std::abs(rhs[i] - full) <= 1e-10 * std::max(1.0, std::abs(full)));
  }
}

TEST_CASE("restriction equals building at the smaller rank") {
  Setup s(3, 5, 4, 13, true);
  ROMConfig rc;
  rc.forcing = [](const Vec2& x, double t) { return Vec2(std::cos(t) * x.x(), 0.5); };
  const ReducedOperators big = s.build(rc, s.vb.offset + s.vb.modes.col(1));
  const ReducedOperators small = restrict_operators(big, 3);
  PODBasis vb3 = truncate(s.vb, 3);
  vb3.offset = s.vb.offset;
  const ReducedOperators direct =
      build_reduced_operators(vb3, truncate(s.pb, 3), *s.space, rc, s.tau, s.vb.offset + s.vb.modes.col(1));
  CHECK(small.rp == 3);
  CHECK((small.stiffness - direct.stiffness).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((small.pres_time - direct.pres_time).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((small.pres_lift_advecting - direct.pres_lift_advecting).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((small.a0 - direct.a0).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((small.force(0.3) - direct.force(0.3)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((small.pres_force(0.3) - direct.pres_force(0.3)).cwiseAbs().maxCoeff() <= 1e-12);
  for (int i = 0; i < 3; ++i) {
    CHECK((small.convection[static_cast<std::size_t>(i)] - direct.convection[static_cast<std::size_t>(i)])
              .cwiseAbs()
              .maxCoeff() <= 1e-12);
  }
  CHECK(restrict_operators(big, 5, 2).rp == 2);
  CHECK_THROWS_AS(restrict_operators(big, 6), Error);
  CHECK_THROWS_AS(restrict_operators(big, 2, 3), Error);
}

TEST_CASE("unforced zero-lift model dissipates energy") {
  const Setup s(3, 5, 3, 17, false);
  ROMConfig rc;
  rc.nu = 0.01;
  std::mt19937_64 rng(8);
  const Vec init = reconstruct(s.vb, oracle::random_vec(rng, 5));
  const ReducedOperators ops = s.build(rc, init);
  for (TimeScheme scheme : {TimeScheme::implicit, TimeScheme::semi_implicit}) {
    Vec a = ops.a0;
    for (int n = 1; n <= 20; ++n) {
      const Vec next = step_rom_velocity(a, ops, 0.05, 0.05 * n, scheme);
      CHECK(next.squaredNorm() <= a.squaredNorm() * (1.0 + 1e-12));
      a = next;
    }
  }
}

TEST_CASE("zero state is a fixed point") {
  const Setup s(3, 3, 2, 19, false);
  const ReducedOperators ops = s.build(ROMConfig{}, Vec::Zero(s.space->n_vel_dofs()));
  const ROMTrajectory traj = run_rom(ops, 0.1, 6, TimeScheme::implicit, 2);
  CHECK(traj.a.rows() == 3);
  CHECK(traj.b.cols() == 2);
  CHECK(traj.a.cwiseAbs().maxCoeff() == 0.0);
  CHECK(traj.b.cwiseAbs().maxCoeff() == 0.0);
  CHECK(traj.times[2] == doctest::Approx(0.6));
}

TEST_CASE("implicit step satisfies the reduced equations") {
  const Setup s(3, 4, 2, 23, true);
  ROMConfig rc;
  rc.nu = 0.03;
  rc.mu_graddiv = 0.2;
  const ReducedOperators ops = s.build(rc, s.vb.offset + 0.5 * s.vb.modes.col(0));
  const double dt = 0.1;
  const Vec a1 = step_rom_velocity(ops.a0, ops, dt, dt, TimeScheme::implicit);
  const Vec r = (a1 - ops.a0) / dt + rc.nu * (ops.stiffness * a1 + ops.lift_stiffness) +
                rc.mu_graddiv * (ops.graddiv * a1 + ops.lift_graddiv) + ops.lift_convection +
                ops.lift_advected * a1 + ops.lift_advecting * a1 + contract(ops.convection, a1, a1);
  CHECK(r.norm() <= 1e-9 * std::max(1.0, a1.norm()));
}

TEST_CASE("tau construction") {
  const TriMesh mesh = generate_structured_square(4);
  const TauCoefficients t = make_tau(mesh, 2.0);
  CHECK(tau_bounds_hold(mesh, t));
  CHECK(t.c1 == doctest::Approx(2.0));
  CHECK(t.c2 == doctest::Approx(2.0));
  CHECK_THROWS_AS(make_tau(mesh, 0.0), Error);
  CHECK(parse_tau_mode("uniform") == TauMode::uniform);
  CHECK_THROWS_AS(parse_tau_mode("none"), Error);
}

TEST_CASE("more pressure than velocity modes is rejected") {
  const Setup s(3, 2, 3, 29, false);
  CHECK_THROWS_AS(s.build(ROMConfig{}, Vec::Zero(s.space->n_vel_dofs())), Error);
}
