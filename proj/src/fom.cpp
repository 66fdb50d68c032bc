#include "smrom/fom.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace smrom {

const char* to_string(TimeScheme s) { return s == TimeScheme::implicit ? "implicit" : "semi_implicit"; }

TimeScheme parse_time_scheme(const std::string& s) {
  if (s == "implicit") return TimeScheme::implicit;
  if (s == "semi_implicit" || s == "semi-implicit") return TimeScheme::semi_implicit;
  throw Error(ErrorCode::config, "unknown scheme '" + s + "'");
}

FlowProblem cavity_problem(double lid_speed) {
  FlowProblem p;
  p.name = "cavity";
  const auto zero = [](const Vec2&, double) { return Vec2(0.0, 0.0); };
  for (int tag : {square_tag::bottom, square_tag::left, square_tag::right}) {
    p.conditions.push_back({tag, 0, {true, true}, zero, false});
  }
  // the lid owns both top corners
  p.conditions.push_back({square_tag::top, 1, {true, true},
                          [lid_speed](const Vec2&, double) { return Vec2(lid_speed, 0.0); }, false});
  p.enclosed = true;
  return p;
}

FlowProblem cylinder_problem(double inflow_speed) {
  FlowProblem p;
  p.name = "cylinder";
  const auto zero = [](const Vec2&, double) { return Vec2(0.0, 0.0); };
  p.conditions.push_back({channel_tag::inlet, 2, {true, true},
                          [inflow_speed](const Vec2&, double) { return Vec2(inflow_speed, 0.0); }, false});
  p.conditions.push_back({channel_tag::cylinder, 1, {true, true}, zero, false});
  p.conditions.push_back({channel_tag::walls, 0, {false, true}, zero, false});
  p.enclosed = false;
  return p;
}

ManufacturedSolution manufactured_taylor_green(double nu) {
  if (!(nu > 0.0)) throw Error(ErrorCode::invalid_argument, "nu must be positive");
  constexpr double pi = std::numbers::pi;
  ManufacturedSolution s;
  s.velocity = [nu](const Vec2& x, double t) {
    const double e = std::exp(-2.0 * nu * pi * pi * t);
    return Vec2(e * std::sin(pi * x.x()) * std::cos(pi * x.y()), -e * std::cos(pi * x.x()) * std::sin(pi * x.y()));
  };
  s.velocity_gradient = [nu](const Vec2& x, double t) {
    const double e = std::exp(-2.0 * nu * pi * pi * t);
    const double sx = std::sin(pi * x.x()), cx = std::cos(pi * x.x());
    const double sy = std::sin(pi * x.y()), cy = std::cos(pi * x.y());
    Mat2 g;
    g << e * pi * cx * cy, -e * pi * sx * sy, e * pi * sx * sy, -e * pi * cx * cy;
    return g;
  };
  s.pressure = [nu](const Vec2& x, double t) {
    return 0.25 * std::exp(-4.0 * nu * pi * pi * t) * (std::cos(2.0 * pi * x.x()) + std::cos(2.0 * pi * x.y()));
  };
  // f = u_t + (u . grad) u - nu lap u + grad p, term by term
  s.forcing = [nu](const Vec2& x, double t) {
    const double e = std::exp(-2.0 * nu * pi * pi * t);
    const double sx = std::sin(pi * x.x()), cx = std::cos(pi * x.x());
    const double sy = std::sin(pi * x.y()), cy = std::cos(pi * x.y());
    const Vec2 u(e * sx * cy, -e * cx * sy);
    const Vec2 u_t = -2.0 * nu * pi * pi * u;
    const Vec2 lap = -2.0 * pi * pi * u;
    Mat2 g;
    g << e * pi * cx * cy, -e * pi * sx * sy, e * pi * sx * sy, -e * pi * cx * cy;
    const Vec2 conv = g * u;
    const double ep = std::exp(-4.0 * nu * pi * pi * t);
    const Vec2 grad_p(-0.5 * pi * ep * std::sin(2.0 * pi * x.x()), -0.5 * pi * ep * std::sin(2.0 * pi * x.y()));
    return Vec2(u_t + conv - nu * lap + grad_p);
  };
  return s;
}

FlowProblem taylor_green_problem(double nu) {
  const ManufacturedSolution s = manufactured_taylor_green(nu);
  FlowProblem p;
  p.name = "taylor_green";
  for (int tag : {square_tag::bottom, square_tag::right, square_tag::top, square_tag::left}) {
    p.conditions.push_back({tag, 0, {true, true}, s.velocity, true});
  }
  p.forcing = s.forcing;
  p.enclosed = true;
  p.initial_velocity = [v = s.velocity](const Vec2& x) { return v(x, 0.0); };
  return p;
}

int FOMConfig::n_steps() const { return static_cast<int>(std::llround(t_end / dt)); }

void FOMConfig::validate() const {
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw Error(ErrorCode::invalid_argument, msg);
  };
  require(nu > 0.0, "nu must be positive");
  require(mu_graddiv >= 0.0, "mu_graddiv must be nonnegative");
  require(dt > 0.0, "dt must be positive");
  require(t_end >= dt, "t_end must be at least dt");
  require(picard_tol > 0.0, "picard_tol must be positive");
  require(picard_max_iters >= 1, "picard_max_iters must be at least 1");
  require(snapshot_stride >= 1, "snapshot_stride must be at least 1");
  require(spinup_steps >= 0, "spinup_steps must be nonnegative");
  require(std::abs(n_steps() * dt - t_end) <= 1e-9 * t_end, "t_end must be a multiple of dt");
}

FlowOperators FlowOperators::assemble(const TaylorHoodSpace& space, Exec exec) {
  FlowOperators o;
  o.mass = assemble_mass_velocity(space, exec);
  o.stiffness = assemble_stiffness_velocity(space, exec);
  o.graddiv = assemble_graddiv(space, exec);
  o.divergence = assemble_divergence(space, exec);
  o.pressure_mass = assemble_mass_pressure(space, exec);
  o.pressure_mean = pressure_mean_weights(space);
  return o;
}

FOMSolver::FOMSolver(std::shared_ptr<const TaylorHoodSpace> space, FlowProblem problem, FOMConfig config, Exec exec)
    : space_(std::move(space)), problem_(std::move(problem)), config_(config), exec_(exec) {
  config_.validate();
  ops_ = FlowOperators::assemble(*space_, exec_);
  bc_ = DirichletData(*space_, problem_.conditions);
  free_index_.assign(static_cast<std::size_t>(space_->n_vel_dofs()), -1);
  for (int i = 0; i < space_->n_vel_dofs(); ++i) {
    if (!bc_.is_dirichlet(i)) free_index_[static_cast<std::size_t>(i)] = n_free_++;
  }
}

Vec FOMSolver::load(double t) const {
  if (!problem_.forcing) return Vec::Zero(space_->n_vel_dofs());
  return assemble_load(*space_, problem_.forcing, t, exec_);
}

void FOMSolver::normalize_pressure(Vec& p) const {
  const double area = ops_.pressure_mean.sum();
  p.array() -= ops_.pressure_mean.dot(p) / area;
}

StepResult FOMSolver::solve_linear(const SparseMatrix& k, const Vec& rhs_full, double t) {
  const int np = space_->n_pres_dofs();
  const int nm = problem_.enclosed ? 1 : 0;
  const int n = n_free_ + np + nm;
  const Vec g = bc_.values(t);

  Vec rhs = Vec::Zero(n);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(k.nonZeros() + 2 * ops_.divergence.nonZeros() + 2 * np));
  for (int i = 0; i < k.outerSize(); ++i) {
    const int fi = free_index_[static_cast<std::size_t>(i)];
    if (fi < 0) continue;
    double r = rhs_full[i];
    for (SparseMatrix::InnerIterator it(k, i); it; ++it) {
      const int fj = free_index_[static_cast<std::size_t>(it.col())];
      if (fj >= 0) {
        trips.emplace_back(fi, fj, it.value());
      } else {
        r -= it.value() * g[it.col()];
      }
    }
    rhs[fi] = r;
  }
  const SparseMatrix& b = ops_.divergence;
  for (int q = 0; q < b.outerSize(); ++q) {
    double r = 0.0;
    for (SparseMatrix::InnerIterator it(b, q); it; ++it) {
      const int fj = free_index_[static_cast<std::size_t>(it.col())];
      if (fj >= 0) {
        trips.emplace_back(n_free_ + q, fj, -it.value());
        trips.emplace_back(fj, n_free_ + q, -it.value());
      } else {
        r += it.value() * g[it.col()];
      }
    }
    rhs[n_free_ + q] = r;
  }
  if (nm == 1) {
    for (int q = 0; q < np; ++q) {
      trips.emplace_back(n_free_ + np, n_free_ + q, ops_.pressure_mean[q]);
      trips.emplace_back(n_free_ + q, n_free_ + np, ops_.pressure_mean[q]);
    }
  }
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(trips.begin(), trips.end());
  a.makeCompressed();
  if (!analyzed_) {
    lu_.analyzePattern(a);
    analyzed_ = true;
  }
  lu_.factorize(a);
  if (lu_.info() != Eigen::Success) throw Error(ErrorCode::singular_system, "saddle-point factorisation failed");
  const Vec x = lu_.solve(rhs);
  if (lu_.info() != Eigen::Success || !x.allFinite()) {
    throw Error(ErrorCode::singular_system, "saddle-point solve failed");
  }

  StepResult out;
  out.velocity = g;
  for (int i = 0; i < space_->n_vel_dofs(); ++i) {
    const int fi = free_index_[static_cast<std::size_t>(i)];
    if (fi >= 0) out.velocity[i] = x[fi];
  }
  out.pressure = x.segment(n_free_, np);
  normalize_pressure(out.pressure);
  return out;
}

StepResult FOMSolver::solve_stokes(double t) {
  const SparseMatrix k = config_.nu * ops_.stiffness + config_.mu_graddiv * ops_.graddiv;
  StepResult r = solve_linear(k, load(t), t);
  r.iterations = 1;
  return r;
}

Vec FOMSolver::residual(const Vec& u_n, const Vec& u, const Vec& p, double t_next, const Vec& advecting) const {
  const double dt = config_.dt;
  const SparseMatrix k = (1.0 / dt) * ops_.mass + config_.nu * ops_.stiffness + config_.mu_graddiv * ops_.graddiv +
                         assemble_convection(*space_, advecting, exec_);
  const Vec full = k * u - ops_.divergence.transpose() * p - (1.0 / dt) * (ops_.mass * u_n) - load(t_next);
  Vec out(n_free_ + space_->n_pres_dofs());
  for (int i = 0; i < space_->n_vel_dofs(); ++i) {
    const int fi = free_index_[static_cast<std::size_t>(i)];
    if (fi >= 0) out[fi] = full[i];
  }
  out.tail(space_->n_pres_dofs()) = ops_.divergence * u;
  return out;
}

StepResult FOMSolver::step(const Vec& u_n, double t_next) {
  const double dt = config_.dt;
  const SparseMatrix base =
      (1.0 / dt) * ops_.mass + config_.nu * ops_.stiffness + config_.mu_graddiv * ops_.graddiv;
  const Vec rhs_full = (1.0 / dt) * (ops_.mass * u_n) + load(t_next);

  if (config_.scheme == TimeScheme::semi_implicit) {
    const SparseMatrix k = base + assemble_convection(*space_, u_n, exec_);
    StepResult r = solve_linear(k, rhs_full, t_next);
    r.iterations = 1;
    return r;
  }

  // Picard on the advecting field, starting from u_n with the new boundary data
  Vec w = u_n;
  bc_.apply(w, t_next);
  SparseMatrix k = base + assemble_convection(*space_, w, exec_);
  StepResult r;
  for (int it = 1; it <= config_.picard_max_iters; ++it) {
    r = solve_linear(k, rhs_full, t_next);
    r.iterations = it;
    k = base + assemble_convection(*space_, r.velocity, exec_);
    const Vec res_full = k * r.velocity - ops_.divergence.transpose() * r.pressure - rhs_full;
    double num = 0.0, den = 0.0;
    for (int i = 0; i < space_->n_vel_dofs(); ++i) {
      if (free_index_[static_cast<std::size_t>(i)] < 0) continue;
      num += res_full[i] * res_full[i];
      den += rhs_full[i] * rhs_full[i];
    }
    r.residual = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
    if (r.residual <= config_.picard_tol) return r;
  }
  std::ostringstream msg;
  msg << "Picard did not converge at t=" << t_next << " (residual " << r.residual << ")";
  throw Error(ErrorCode::picard_divergence, msg.str());
}

SnapshotSet run_fom(std::shared_ptr<const TaylorHoodSpace> space, const FlowProblem& problem, const FOMConfig& config,
                    const RunObserver& observer, Exec exec) {
  FOMSolver solver(space, problem, config, exec);
  const DirichletData& bc = solver.dirichlet();
  if (config.spinup_steps > 0 && (problem.forcing || bc.time_dependent())) {
    throw Error(ErrorCode::invalid_argument, "spinup requires autonomous data");
  }

  Vec u;
  Vec p;
  if (problem.initial_velocity) {
    u = space->interpolate_velocity(problem.initial_velocity);
    bc.apply(u, 0.0);
    p = Vec::Zero(space->n_pres_dofs());
  } else {
    StepResult s = solver.solve_stokes(0.0);
    u = std::move(s.velocity);
    p = std::move(s.pressure);
  }
  for (int n = 1; n <= config.spinup_steps; ++n) {
    StepResult s = solver.step(u, n * config.dt);
    u = std::move(s.velocity);
    p = std::move(s.pressure);
  }

  SnapshotSet out;
  out.space = space;
  out.dt = config.dt * config.snapshot_stride;
  out.initial_velocity = u;
  out.initial_pressure = p;
  const int n_steps = config.n_steps();
  const int n_snap = n_steps / config.snapshot_stride;
  out.velocity.resize(space->n_vel_dofs(), n_snap);
  out.pressure.resize(space->n_pres_dofs(), n_snap);
  out.times.reserve(static_cast<std::size_t>(n_snap));

  int col = 0;
  for (int n = 1; n <= n_steps; ++n) {
    const double t = n * config.dt;
    StepResult s;
    try {
      s = solver.step(u, t);
    } catch (const Error& e) {
      throw Error(e.code(), "step " + std::to_string(n) + ": " + e.what());
    }
    if (observer.on_step) observer.on_step(n, t, u, s);
    u = std::move(s.velocity);
    if (n % config.snapshot_stride == 0 && col < n_snap) {
      out.velocity.col(col) = u;
      out.pressure.col(col) = s.pressure;
      out.times.push_back(t);
      ++col;
    }
  }
  return out;
}

std::string check_snapshot_invariants(const SnapshotSet& s, const FlowOperators& ops, double div_tol) {
  std::ostringstream msg;
  if (s.velocity.cols() != s.size() || s.pressure.cols() != s.size()) return "column count differs from times";
  for (int n = 1; n < s.size(); ++n) {
    const double step = s.times[static_cast<std::size_t>(n)] - s.times[static_cast<std::size_t>(n - 1)];
    if (std::abs(step - s.dt) > 1e-9 * s.dt) {
      msg << "non-uniform time grid at snapshot " << n;
      return msg.str();
    }
  }
  const double area = ops.pressure_mean.sum();
  for (int n = 0; n < s.size(); ++n) {
    const double div = (ops.divergence * s.velocity.col(n)).cwiseAbs().maxCoeff();
    if (div > div_tol) {
      msg << "snapshot " << n << " divergence " << div << " > " << div_tol;
      return msg.str();
    }
    const double mean = ops.pressure_mean.dot(s.pressure.col(n)) / area;
    if (std::abs(mean) > 1e-10) {
      msg << "snapshot " << n << " pressure mean " << mean;
      return msg.str();
    }
  }
  return {};
}

}  // namespace smrom
