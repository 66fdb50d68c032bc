#include "oracles.hpp"
#include "smrom/fom.hpp"

#include <doctest.h>

#include <numbers>

using namespace smrom;

namespace {

std::shared_ptr<const TaylorHoodSpace> square_space(int n) {
  return std::make_shared<const TaylorHoodSpace>(std::make_shared<const TriMesh>(generate_structured_square(n)));
}

FlowProblem no_slip_box(VelocityFunction forcing) {
  FlowProblem p;
  p.name = "box";
  for (int tag = 1; tag <= 4; ++tag) {
    p.conditions.push_back({tag, 0, {true, true}, [](const Vec2&, double) { return Vec2(0.0, 0.0); }, false});
  }
  p.forcing = std::move(forcing);
  p.initial_velocity = [](const Vec2&) { return Vec2(0.0, 0.0); };
  return p;
}

}  // namespace

TEST_CASE("zero data gives the zero solution") {
  const auto s = square_space(4);
  FOMConfig c;
  c.dt = 0.1;
  c.t_end = 0.3;
  for (TimeScheme scheme : {TimeScheme::implicit, TimeScheme::semi_implicit}) {
    c.scheme = scheme;
    const SnapshotSet snaps = run_fom(s, no_slip_box({}), c);
    CHECK(snaps.velocity.cwiseAbs().maxCoeff() == 0.0);
    CHECK(snaps.pressure.cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("implicit step energy inequality") {
  const auto s = square_space(6);
  const auto f = [](const Vec2& x, double t) {
    return Vec2(std::sin(std::numbers::pi * x.y()) * (1.0 + t), x.x() * x.x() - 0.3);
  };
  FOMConfig c;
  c.nu = 0.02;
  c.mu_graddiv = 0.1;
  c.dt = 0.05;
  c.t_end = 0.5;
  c.scheme = TimeScheme::implicit;
  FOMSolver solver(s, no_slip_box(f), c);
  const FlowOperators& ops = solver.operators();
  Vec u = Vec::Zero(s->n_vel_dofs());
  for (int n = 1; n <= 10; ++n) {
    const double t = n * c.dt;
    const StepResult r = solver.step(u, t);
    const Vec& v = r.velocity;
    const Vec d = v - u;
    const double lhs = 0.5 * v.dot(ops.mass * v) - 0.5 * u.dot(ops.mass * u) + 0.5 * d.dot(ops.mass * d) +
                       c.nu * c.dt * v.dot(ops.stiffness * v) + c.mu_graddiv * c.dt * v.dot(ops.graddiv * v);
    const double rhs = c.dt * solver.load(t).dot(v);
    CHECK(lhs <= rhs + 1e-10);
    CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)));
    u = v;
  }
  CHECK(u.norm() > 0.0);
}

TEST_CASE("Taylor-Green manufactured solution") {
  const double nu = 0.01;
  const ManufacturedSolution ms = manufactured_taylor_green(nu);
  const auto s = square_space(8);
  const double e0 = oracle::integrate(*s, [&](int, const std::array<double, 3>&, const Vec2& x) {
    return ms.velocity(x, 0.0).squaredNorm();
  }, 8);
  CHECK(std::abs(e0 - 0.5) <= 1e-10);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const Vec2 x(u01(rng), u01(rng));
    const double t = u01(rng);
    CHECK(ms.forcing(x, t).norm() <= 1e-12);
    CHECK(std::abs(ms.velocity_gradient(x, t).trace()) <= 1e-14);
  }
  double prev = 0.0;
  for (int n : {4, 8, 16}) {
    const auto sp = square_space(n);
    const Vec ui = sp->interpolate_velocity([&](const Vec2& x) { return ms.velocity(x, 0.0); });
    const double d2 = oracle::integrate(*sp, [&](int k, const std::array<double, 3>& l, const Vec2&) {
      const double d = oracle::eval_p2(*sp, ui, k, l).grad.trace();
      return d * d;
    });
    if (prev > 0.0) CHECK(std::log2(prev / d2) > 3.5);
    prev = d2;
  }
}

TEST_CASE("one step from exact Taylor-Green data solves the discrete system") {
  const double nu = 0.01;
  const auto s = square_space(6);
  const ManufacturedSolution ms = manufactured_taylor_green(nu);
  FOMConfig c;
  c.nu = nu;
  c.dt = 0.01;
  c.t_end = 0.01;
  c.scheme = TimeScheme::implicit;
  FOMSolver solver(s, taylor_green_problem(nu), c);
  const Vec u0 = s->interpolate_velocity([&](const Vec2& x) { return ms.velocity(x, 0.0); });
  const StepResult r = solver.step(u0, c.dt);
  const Vec res = solver.residual(u0, r.velocity, r.pressure, c.dt, r.velocity);
  const Vec rhs = (1.0 / c.dt) * (solver.operators().mass * u0) + solver.load(c.dt);
  CHECK(res.norm() <= c.picard_tol * rhs.norm());
}

TEST_CASE("semi-implicit and implicit steps agree to second order") {
  const double nu = 0.01;
  const auto s = square_space(6);
  const ManufacturedSolution ms = manufactured_taylor_green(nu);
  Vec u0 = s->interpolate_velocity([&](const Vec2& x) { return ms.velocity(x, 0.0); });
  {
    // start past the initial layer of the discrete flow
    FOMConfig c;
    c.nu = nu;
    c.dt = 1e-3;
    c.t_end = 1e-3;
    FOMSolver warm(s, taylor_green_problem(nu), c);
    for (int n = 0; n < 200; ++n) u0 = warm.step(u0, 0.0).velocity;
  }
  std::vector<double> gaps;
  for (double dt : {0.004, 0.002, 0.001}) {
    FOMConfig c;
    c.nu = nu;
    c.dt = dt;
    c.t_end = dt;
    c.picard_tol = 1e-13;
    c.scheme = TimeScheme::implicit;
    FOMSolver impl(s, taylor_green_problem(nu), c);
    c.scheme = TimeScheme::semi_implicit;
    FOMSolver semi(s, taylor_green_problem(nu), c);
    const Vec d = impl.step(u0, dt).velocity - semi.step(u0, dt).velocity;
    gaps.push_back(std::sqrt(d.dot(impl.operators().mass * d)));
  }
  for (std::size_t i = 1; i < gaps.size(); ++i) {
    const double ratio = gaps[i - 1] / gaps[i];
    CHECK(ratio >= 3.0);
    CHECK(ratio <= 5.0);
  }
}

TEST_CASE("snapshot counting and invariants") {
  const auto s = square_space(6);
  FOMConfig c;
  c.dt = 0.01;
  c.t_end = 0.01;
  CHECK(run_fom(s, cavity_problem(1.0), c).size() == 1);
  c.t_end = 0.12;
  c.snapshot_stride = 3;
  const SnapshotSet snaps = run_fom(s, cavity_problem(1.0), c);
  REQUIRE(snaps.size() == 4);
  CHECK(snaps.times[0] == doctest::Approx(0.03));
  CHECK(snaps.dt == doctest::Approx(0.03));
  CHECK(check_snapshot_invariants(snaps, FlowOperators::assemble(*s)).empty());
}

TEST_CASE("cavity run keeps the snapshot invariants") {
  const auto s = square_space(12);
  FOMConfig c;
  c.nu = 0.01;
  c.dt = 0.01;
  c.t_end = 0.4;
  const SnapshotSet snaps = run_fom(s, cavity_problem(1.0), c);
  CHECK(snaps.size() == 40);
  CHECK(check_snapshot_invariants(snaps, FlowOperators::assemble(*s)).empty());
}

TEST_CASE("lid owns the top corners") {
  const auto s = square_space(4);
  const DirichletData bc(*s, cavity_problem(2.0).conditions);
  const Vec g = bc.values(0.0);
  for (int i = 0; i < s->n_nodes(); ++i) {
    const Vec2& x = s->node(i);
    if (x.y() == 1.0) {
      CHECK(g[s->vel_dof(0, i)] == 2.0);
      CHECK(g[s->vel_dof(1, i)] == 0.0);
    }
  }
}

TEST_CASE("cylinder flow runs and stays divergence free") {
  const auto mesh = std::make_shared<const TriMesh>(generate_cylinder_channel(1));
  const auto s = std::make_shared<const TaylorHoodSpace>(mesh);
  FOMConfig c;
  c.nu = 0.05;
  c.dt = 0.05;
  c.t_end = 0.2;
  const SnapshotSet snaps = run_fom(s, cylinder_problem(1.0), c);
  CHECK(snaps.size() == 4);
  CHECK(snaps.velocity.allFinite());
  CHECK(check_snapshot_invariants(snaps, FlowOperators::assemble(*s)).empty());
}

TEST_CASE("configuration errors") {
  FOMConfig c;
  c.dt = 0.1;
  c.t_end = 0.05;
  CHECK_THROWS_AS(c.validate(), Error);
  c.t_end = 0.25;
  CHECK_THROWS_AS(c.validate(), Error);
  CHECK_THROWS_AS(manufactured_taylor_green(0.0), Error);
  CHECK_THROWS_AS(parse_time_scheme("explicit"), Error);
}
