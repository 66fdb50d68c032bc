#pragma once

#include "smrom/assembly.hpp"
#include "smrom/common.hpp"
#include "smrom/space.hpp"

#include <Eigen/SparseLU>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace smrom {

enum class TimeScheme { implicit, semi_implicit };

const char* to_string(TimeScheme s);
TimeScheme parse_time_scheme(const std::string& s);

/// Boundary data, forcing and initial state of one benchmark flow.
struct FlowProblem {
  std::string name;
  std::vector<BoundaryCondition> conditions;
  VelocityFunction forcing;  ///< empty means f = 0
  /// True when every boundary carries velocity data, so the pressure is fixed
  /// only up to a constant and a zero-mean multiplier is added.
  bool enclosed = true;
  /// Explicit initial velocity; when empty the steady Stokes solution for the
  /// t = 0 boundary data is used.
  std::function<Vec2(const Vec2&)> initial_velocity;
};

FlowProblem cavity_problem(double lid_speed);
/// Uniform inflow, free-slip channel walls, no slip on the cylinder and a
/// do-nothing outlet.
FlowProblem cylinder_problem(double inflow_speed);

struct ManufacturedSolution {
  std::function<Vec2(const Vec2&, double)> velocity;
  std::function<Mat2(const Vec2&, double)> velocity_gradient;
  std::function<double(const Vec2&, double)> pressure;
  VelocityFunction forcing;
};

/// Decaying Taylor-Green vortex on the unit square with the forcing that makes
/// it an exact Navier-Stokes solution for viscosity nu.
ManufacturedSolution manufactured_taylor_green(double nu);
FlowProblem taylor_green_problem(double nu);

struct FOMConfig {
  double nu = 0.01;
  double mu_graddiv = 0.05;
  double dt = 1e-2;
  double t_end = 1.0;
  TimeScheme scheme = TimeScheme::semi_implicit;
  double picard_tol = 1e-10;
  int picard_max_iters = 50;
  int snapshot_stride = 1;
  /// Steps run (and discarded) before t = 0 of the recorded trajectory.
  int spinup_steps = 0;

  int n_steps() const;
  /// Throws InvalidArgument on inconsistent values.
  void validate() const;
};

/// Operators that do not change during a run.
struct FlowOperators {
  SparseMatrix mass;
  SparseMatrix stiffness;
  SparseMatrix graddiv;
  SparseMatrix divergence;
  SparseMatrix pressure_mass;
  Vec pressure_mean;

  static FlowOperators assemble(const TaylorHoodSpace& space, Exec exec = default_exec);
};

struct StepResult {
  Vec velocity;
  Vec pressure;
  int iterations = 0;
  double residual = 0.0;
};

/// Backward-Euler grad-div Taylor-Hood solver. Dirichlet dofs are eliminated;
/// the saddle-point system is factorised with SparseLU, reusing the symbolic
/// analysis across steps.
class FOMSolver {
 public:
  FOMSolver(std::shared_ptr<const TaylorHoodSpace> space, FlowProblem problem, FOMConfig config,
            Exec exec = default_exec);

  const TaylorHoodSpace& space() const { return *space_; }
  const FlowOperators& operators() const { return ops_; }
  const DirichletData& dirichlet() const { return bc_; }
  const FOMConfig& config() const { return config_; }
  const FlowProblem& problem() const { return problem_; }

  /// Steady Stokes solution (no convection, no time derivative) for the
  /// boundary data and forcing at time t.
  StepResult solve_stokes(double t);

  /// One time step from u_n to t_next.
  StepResult step(const Vec& u_n, double t_next);

  /// Momentum residual of (u, p) for the step from u_n, restricted to free
  /// dofs, and the divergence residual; used by tests.
  Vec residual(const Vec& u_n, const Vec& u, const Vec& p, double t_next, const Vec& advecting) const;

  Vec load(double t) const;
  /// Shift p to zero mass-weighted mean.
  void normalize_pressure(Vec& p) const;

 private:
  StepResult solve_linear(const SparseMatrix& velocity_block, const Vec& rhs_full, double t);

  std::shared_ptr<const TaylorHoodSpace> space_;
  FlowProblem problem_;
  FOMConfig config_;
  Exec exec_;
  FlowOperators ops_;
  DirichletData bc_;
  std::vector<int> free_index_;  ///< velocity dof -> free index or -1
  int n_free_ = 0;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  bool analyzed_ = false;
};

/// Time-stamped FOM trajectory; column n holds the state at times[n].
struct SnapshotSet {
  std::shared_ptr<const TaylorHoodSpace> space;
  std::vector<double> times;
  Mat velocity;
  Mat pressure;
  double dt = 0.0;
  Vec initial_velocity;
  Vec initial_pressure;

  int size() const { return static_cast<int>(times.size()); }
};

struct RunObserver {
  /// Called after every step with the step index (1-based) and the result.
  std::function<void(int, double, const Vec& u_prev, const StepResult&)> on_step;
};

SnapshotSet run_fom(std::shared_ptr<const TaylorHoodSpace> space, const FlowProblem& problem,
                    const FOMConfig& config, const RunObserver& observer = {}, Exec exec = default_exec);

/// Returns an empty string when the snapshot invariants hold (uniform time
/// grid, discrete divergence constraint, zero-mean pressure).
std::string check_snapshot_invariants(const SnapshotSet& s, const FlowOperators& ops, double div_tol = 1e-8);

}  // namespace smrom
