#pragma once

#include "smrom/common.hpp"
#include "smrom/fom.hpp"
#include "smrom/pod.hpp"
#include "smrom/rom.hpp"
#include "smrom/space.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace smrom {

// ---- error metrics -------------------------------------------------------

/// dt * sum_n |rom_n - fom_n|^2 in the mass-matrix norm. Columns are time
/// levels; throws TimeGridMismatch when the counts differ.
double error_velocity(const Mat& rom, const Mat& fom, const SparseMatrix& mass, double dt);

/// dt * sum_n |grad(p_rom - p_fom)|_tau^2 for P1 pressures.
double error_pressure_tau(const TaylorHoodSpace& space, const std::vector<double>& tau, const Mat& rom,
                          const Mat& fom, double dt);

/// |u(t) - u_h|_{L2} against an analytic field, by 7-point quadrature.
double velocity_error_exact(const TaylorHoodSpace& space, const Vec& u_h,
                            const std::function<Vec2(const Vec2&, double)>& exact, double t);

// ---- estimators ----------------------------------------------------------

/// C * (sum_{i>r} lambda_i (1 + |grad phi_i|^2) + h^(2l) + dt^2).
double estimator_velocity(const Vec& lambda, const Vec& grad_norms_sq, int r, double h, int l, double dt,
                          double c = 1.0);

enum class PressurePenalty { standard, alt_h3 };

struct PressureEstimatorInput {
  Vec lambda;          ///< velocity eigenvalues
  Vec grad_phi_sq;     ///< |grad phi_i|^2, same length as lambda
  Vec gamma;           ///< pressure eigenvalues
  Vec grad_psi_sq;     ///< |grad psi_i|^2, same length as gamma
  double stiffness_norm = 0.0;  ///< spectral norm of the r x r reduced stiffness
  double h = 0.0;
  int l = 2;
  double dt = 0.0;
  double nu = 1.0;
  int dim = 2;
  double c = 1.0;
  PressurePenalty penalty = PressurePenalty::standard;
};

/// C * E*; the leading penalty (h^2, or h^3/nu for alt_h3) is present only for
/// dim = 3.
double estimator_pressure(const PressureEstimatorInput& in, int r);

struct SpectralNorm {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Largest |eigenvalue| of a symmetric matrix by power iteration from the
/// all-ones vector.
SpectralNorm spectral_norm(const Mat& s, double tol = 1e-10, int max_iters = 10000);

// ---- discrete Gronwall lemma --------------------------------------------

struct GronwallInput {
  double alpha0 = 0.0;
  std::vector<double> gamma;  ///< gamma_1 .. gamma_n
  double sigma = 0.0;
  double tau = 0.0;
  double delta = 1.0;
  double dt = 1.0;
};

struct GronwallBounds {
  double alpha_bound = 0.0;     ///< bound on alpha_n
  double beta_sum_bound = 0.0;  ///< bound on beta_1 + ... + beta_n
  double rho = 0.0;
};

/// Throws HypothesisViolated unless sigma*dt <= 1 - delta and delta in (0,1].
GronwallBounds gronwall_bounds(const GronwallInput& in, int n);

// ---- stability report ----------------------------------------------------

struct StabilityInput {
  Mat a;          ///< N x r coordinates at t_1..t_N (fluctuation about the lift)
  Vec a0;
  Mat forcing;    ///< N x r effective forcing g^n in reduced coordinates
  Mat stiffness;
  Mat graddiv;
  double nu = 0.0;
  double mu = 0.0;
  double dt = 0.0;
  double delta = 0.5;
  double h = 0.0;
  double c_s = 1.0;   ///< assumed constant in h <= C_S dt
  double c_2 = 1.0;   ///< upper tau constant
  double c_inv = 1.0; ///< inverse-inequality constant of cond2
  Vec pressure_tau_sq;  ///< optional |grad p_r^n|_tau^2 per step
};

struct StabilityStep {
  double energy_identity_residual = 0.0;  ///< dt g.a - LHS (zero up to solver tolerance)
  double energy_margin = 0.0;             ///< chain RHS - LHS
  double estvel1_lhs = 0.0;
  double estvel1_rhs = 0.0;
  double estvel2_lhs = 0.0;
  double estvel2_rhs = 0.0;
};

struct StabilityReport {
  std::vector<StabilityStep> steps;
  double min_energy_margin = 0.0;
  double min_estvel1_margin = 0.0;
  double min_estvel2_margin = 0.0;
  bool dt_hypothesis = false;        ///< dt <= 1 - delta
  bool mesh_hypothesis = false;      ///< h <= C_S dt
  bool pressure_dt_hypothesis = false;  ///< dt <= (1 - delta) / (s + 1/5)
  bool cond2 = false;
  double estpress1_lhs = 0.0;
  double estpress1_rhs = 0.0;
  bool has_pressure = false;
};

StabilityReport stability_check(const StabilityInput& in);

/// Effective forcing of the fluctuation equation for the implicit scheme:
/// f_r - nu s0 - mu g0 - b(u^{n+1}, lift, phi_i).
Vec fluctuation_forcing(const ReducedOperators& ops, const Vec& a_next, double t);

// ---- regression ----------------------------------------------------------

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;  ///< log10 intercept
  int points_used = 0;
};

/// Number of leading points before the series stagnates (two consecutive
/// |delta log10 y| below threshold).
int stagnation_cutoff(const std::vector<double>& y, double threshold = 0.05);

/// Least squares on (log10 x, log10 y) over the first `count` points
/// (count <= 0: detect with stagnation_cutoff). Throws DegenerateFit.
SlopeFit slope_regression(const std::vector<double>& x, const std::vector<double>& y, double threshold = 0.05,
                          int count = 0);

/// Scales `series` so its first point equals reference[0]; returns the factor.
double normalize_to_first(std::vector<double>& series, const std::vector<double>& reference);

// ---- drag and lift -------------------------------------------------------

struct ForceCoefficients {
  Vec2 force = Vec2::Zero();
  double drag = 0.0;
  double lift = 0.0;
};

/// F = closed-curve integral of (mu (grad u + grad u^T) - p I) n with n the
/// outward normal of the region enclosed by the tagged curve; coefficients
/// are 2F/(rho U^2 D). A negative tag selects the whole boundary.
ForceCoefficients drag_lift(const TaylorHoodSpace& space, const Vec& u, const Vec& p, int tag, double dynamic_viscosity,
                            double density, double speed, double diameter);

// ---- sweep ---------------------------------------------------------------

struct SweepConfig {
  std::vector<int> r_list;
  double nu = 0.01;
  double mu_graddiv = 0.05;
  double fom_dt = 0.0;  ///< time step of the FOM run
  int stride = 1;
  TimeScheme scheme = TimeScheme::semi_implicit;
  double tau_constant = 1.0;
  TauMode tau_mode = TauMode::per_element;
  Centering centering = Centering::initial;
  double estimator_c = 1.0;
  double stagnation_threshold = 0.05;
  double eigen_gap = 1e-6;
  PressurePenalty penalty = PressurePenalty::standard;
  VelocityFunction forcing;
};

struct SweepRow {
  int r = 0;
  double ratio = 0.0;
  double err_vel = 0.0;
  double err_vel_sqrt = 0.0;
  double err_pres = 0.0;
  double err_pres_sqrt = 0.0;
  double est_vel = 0.0;   ///< raw value, C = 1
  double est_pres = 0.0;
  double est_vel_norm = 0.0;  ///< first-point normalised
  double est_pres_norm = 0.0;
  double fom_vel_norm_sq = 0.0;  ///< dt sum |u_h|^2 for relative scaling
  double fom_pres_tau_sq = 0.0;
  double max_rel_vel_error = 0.0;  ///< max_n |u_r - u_h| / |u_h|
  int near_singular_steps = 0;
};

struct ErrorReport {
  std::vector<SweepRow> rows;
  SlopeFit fit_err_vel;
  SlopeFit fit_err_pres;
  SlopeFit fit_est_vel;
  SlopeFit fit_est_pres;
  double norm_vel = 1.0;
  double norm_pres = 1.0;
  int velocity_rank = 0;
  int pressure_rank = 0;
};

ErrorReport sweep(const SnapshotSet& snapshots, const SweepConfig& config, Exec exec = default_exec);

/// Deterministic CSV: data rows then a '#' footer with the fits.
void write_report_csv(std::ostream& os, const ErrorReport& report);
/// Plot script stub for gnuplot referring to `csv_name`.
void write_plot_script(std::ostream& os, const std::string& csv_name);

/// Formats with 17 significant digits.
std::string format_double(double v);

}  // namespace smrom
