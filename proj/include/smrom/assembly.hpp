#pragma once

#include "smrom/common.hpp"
#include "smrom/parallel.hpp"
#include "smrom/space.hpp"

#include <functional>
#include <vector>

namespace smrom {

// Finite-element assembly on the Taylor-Hood space. Every routine uses the
// 7-point degree-5 rule, which is exact for all polynomial integrands of the
// scheme. Element kernels run in parallel; the scatter into CSR is serial, so
// the result does not depend on the backend or thread count.
//
// All velocity operators share one sparsity pattern (full 12x12 element
// blocks), which keeps sums of operators pattern-stable for factorisation reuse.

using VelocityFunction = std::function<Vec2(const Vec2&, double)>;

SparseMatrix assemble_mass_velocity(const TaylorHoodSpace& space, Exec exec = default_exec);
SparseMatrix assemble_stiffness_velocity(const TaylorHoodSpace& space, Exec exec = default_exec);
SparseMatrix assemble_graddiv(const TaylorHoodSpace& space, Exec exec = default_exec);

/// B[q, v] = (div phi_v, psi_q): rows are pressure dofs, columns velocity dofs.
SparseMatrix assemble_divergence(const TaylorHoodSpace& space, Exec exec = default_exec);

/// Skew convection matrix: w^T N(u) v = b(u, v, w).
SparseMatrix assemble_convection(const TaylorHoodSpace& space, const Vec& u, Exec exec = default_exec);

/// P1 mass matrix (pressure L2 weight).
SparseMatrix assemble_mass_pressure(const TaylorHoodSpace& space, Exec exec = default_exec);

/// sum_K tau_K (grad p, grad q)_K on P1.
SparseMatrix assemble_pressure_tau_stiffness(const TaylorHoodSpace& space, const std::vector<double>& tau,
                                             Exec exec = default_exec);

/// Integrals of the pressure basis functions; m^T p is the mean times |Omega|.
Vec pressure_mean_weights(const TaylorHoodSpace& space);

/// (f(t), phi_i) for every velocity dof.
Vec assemble_load(const TaylorHoodSpace& space, const VelocityFunction& f, double t, Exec exec = default_exec);

/// b(u,v,w) = 1/2 [(u . grad v, w) - (u . grad w, v)], evaluated by quadrature.
double trilinear_b(const TaylorHoodSpace& space, const Vec& u, const Vec& v, const Vec& w);

/// Exact Laplacian of a P2 velocity field, one constant 2-vector per element.
std::vector<Vec2> elementwise_laplacian(const TaylorHoodSpace& space, const Vec& u);

/// (a, b)_tau = sum_K tau_K (a, b)_K for two P2 velocity fields.
double tau_inner_product(const TaylorHoodSpace& space, const std::vector<double>& tau, const Vec& a, const Vec& b);

/// Same product for per-element constant vector fields.
double tau_inner_product(const TaylorHoodSpace& space, const std::vector<double>& tau, const std::vector<Vec2>& a,
                         const std::vector<Vec2>& b);

/// Elementwise gradient of a P1 pressure field.
std::vector<Vec2> pressure_gradients(const TaylorHoodSpace& space, const Vec& p);

}  // namespace smrom
