#pragma once

#include "smrom/assembly.hpp"
#include "smrom/common.hpp"
#include "smrom/fom.hpp"
#include "smrom/pod.hpp"
#include "smrom/space.hpp"

#include <functional>
#include <vector>

namespace smrom {

enum class TauMode { per_element, uniform };

TauMode parse_tau_mode(const std::string& s);
const char* to_string(TauMode m);

/// Per-element stabilisation weights tau_K with c1 h_K^2 <= tau_K <= c2 h_K^2.
struct TauCoefficients {
  std::vector<double> values;
  double c1 = 0.0;
  double c2 = 0.0;
};

TauCoefficients make_tau(const TriMesh& mesh, double c, TauMode mode = TauMode::per_element);
bool tau_bounds_hold(const TriMesh& mesh, const TauCoefficients& tau);

/// r x r x r tensor stored as r slices: slice(i)(j, k).
using Tensor3 = std::vector<Mat>;

/// (x; y) -> v_i = sum_{j,k} T[i](j,k) x_j y_k.
Vec contract(const Tensor3& t, const Vec& x, const Vec& y);

/// Everything the online stage needs. The velocity approximation is
/// u_r = lift + sum_i a_i phi_i; terms carrying the lift are kept separately
/// so that a zero lift reduces to the plain Galerkin system.
struct ReducedOperators {
  int r = 0;
  int rp = 0;  ///< pressure modes; below r only when the pressure rank is smaller
  double nu = 0.0;
  double mu = 0.0;

  Mat stiffness;   ///< (grad phi_j, grad phi_i)
  Mat graddiv;     ///< (div phi_j, div phi_i)
  Tensor3 convection;  ///< C[i](j,k) = b(phi_j, phi_k, phi_i)
  Vec lift_stiffness;  ///< (grad lift, grad phi_i)
  Vec lift_graddiv;    ///< (div lift, div phi_i)
  Vec lift_convection; ///< b(lift, lift, phi_i)
  Mat lift_advected;   ///< (i,k): b(lift, phi_k, phi_i)
  Mat lift_advecting;  ///< (i,j): b(phi_j, lift, phi_i)

  Mat pres_stiffness;   ///< A_p(i,j) = (grad psi_j, grad psi_i)_tau
  Mat pres_time;        ///< rp x r, T_p(i,j) = (phi_j, grad psi_i)_tau
  Tensor3 pres_convection;  ///< C_p[i](j,k) = (phi_j . grad phi_k, grad psi_i)_tau
  Mat pres_laplacian;   ///< L_p(i,j) = (lap phi_j, grad psi_i)_tau
  Vec pres_lift_convection;  ///< (lift . grad lift, grad psi_i)_tau
  Vec pres_lift_laplacian;   ///< (lap lift, grad psi_i)_tau
  Mat pres_lift_advected;    ///< (i,k): (lift . grad phi_k, grad psi_i)_tau
  Mat pres_lift_advecting;   ///< (i,j): (phi_j . grad lift, grad psi_i)_tau

  /// Reduced forces at time t; empty means zero forcing.
  std::function<Vec(double)> force;
  std::function<Vec(double)> pres_force;

  Vec a0;
  std::vector<double> tau;
  bool time_separable_force = false;
};

struct ROMConfig {
  double nu = 0.01;
  double mu_graddiv = 0.05;
  VelocityFunction forcing;
};

/// Offline Galerkin projections. Both bases must live on `space`; the
/// pressure basis may not have more modes than the velocity basis. `initial_velocity` defines a0 = (u0 - lift, phi_i).
ReducedOperators build_reduced_operators(const PODBasis& velocity, const PODBasis& pressure,
                                         const TaylorHoodSpace& space, const ROMConfig& config,
                                         const TauCoefficients& tau, const Vec& initial_velocity,
                                         Exec exec = default_exec);

/// Leading r-dimensional block of operators built for a larger basis (the
/// modes are nested, so this equals building at rank r directly).
/// rp < 0 selects min(r, ops.rp) pressure modes.
ReducedOperators restrict_operators(const ReducedOperators& ops, int r, int rp = -1);

struct ROMStepOptions {
  double picard_tol = 1e-12;
  int picard_max_iters = 100;
};

/// One backward-Euler step of the velocity ROM.
Vec step_rom_velocity(const Vec& a_n, const ReducedOperators& ops, double dt, double t_next, TimeScheme scheme,
                      const ROMStepOptions& opts = {}, int* iterations = nullptr);

struct PressureRecovery {
  Vec b;
  bool near_singular = false;
};

/// Residual-based pressure recovery: A_p b = -(tau-weighted residual tested
/// against grad psi_i).
PressureRecovery recover_pressure(const Vec& a_next, const Vec& a_n, const ReducedOperators& ops, double dt,
                                  double t_next);

/// Right-hand side of the recovery system (exposed for consistency tests).
Vec pressure_recovery_rhs(const Vec& a_next, const Vec& a_n, const ReducedOperators& ops, double dt, double t_next);

struct ROMTrajectory {
  std::vector<double> times;
  Mat a;  ///< N x r velocity coordinates
  Mat b;  ///< N x rp pressure coordinates
  double dt = 0.0;
  int near_singular_steps = 0;
};

/// Marches n_steps from a0 and records every `stride`-th state; pressure is
/// recovered at every recorded step.
ROMTrajectory run_rom(const ReducedOperators& ops, double dt, int n_steps, TimeScheme scheme, int stride = 1,
                      const ROMStepOptions& opts = {});

/// Velocity fields offset + Phi a^n as columns.
Mat reconstruct_velocity(const PODBasis& basis, const ROMTrajectory& traj);
/// Pressure fields Phi b^n shifted to zero mass-weighted mean.
Mat reconstruct_pressure(const PODBasis& basis, const ROMTrajectory& traj, const Vec& mean_weights);

}  // namespace smrom
