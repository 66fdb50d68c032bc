#include "smrom/analysis.hpp"

#include "smrom/fe.hpp"
#include "smrom/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>

namespace smrom {

double error_velocity(const Mat& rom, const Mat& fom, const SparseMatrix& mass, double dt) {
  if (rom.cols() != fom.cols()) throw Error(ErrorCode::time_grid_mismatch, "different number of time levels");
  if (rom.rows() != fom.rows() || mass.rows() != rom.rows()) throw Error(ErrorCode::dimension_mismatch, "field size");
  double sum = 0.0;
  for (Eigen::Index n = 0; n < rom.cols(); ++n) {
    const Vec e = rom.col(n) - fom.col(n);
    sum += e.dot(mass * e);
  }
  return dt * sum;
}

double error_pressure_tau(const TaylorHoodSpace& space, const std::vector<double>& tau, const Mat& rom,
                          const Mat& fom, double dt) {
  if (rom.cols() != fom.cols()) throw Error(ErrorCode::time_grid_mismatch, "different number of time levels");
  double sum = 0.0;
  for (Eigen::Index n = 0; n < rom.cols(); ++n) {
    const Vec e = rom.col(n) - fom.col(n);
    const auto g = pressure_gradients(space, e);
    sum += tau_inner_product(space, tau, g, g);
  }
  return dt * sum;
}

double velocity_error_exact(const TaylorHoodSpace& space, const Vec& u_h,
                            const std::function<Vec2(const Vec2&, double)>& exact, double t) {
  const auto& rule = gauss7();
  double sum = 0.0;
  for (int k = 0; k < space.mesh().n_elements(); ++k) {
    const ElementBasis basis(space.mesh(), k);
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const Vec2 e = space.eval_velocity(u_h, k, rule.points[q]) - exact(basis.point(rule.points[q]), t);
      sum += rule.weights[q] * basis.area() * e.squaredNorm();
    }
  }
  return std::sqrt(sum);
}

double estimator_velocity(const Vec& lambda, const Vec& grad_norms_sq, int r, double h, int l, double dt, double c) {
  if (r < 0 || r > lambda.size()) throw Error(ErrorCode::invalid_argument, "r out of range");
  double tail = 0.0;
  for (Eigen::Index i = r; i < lambda.size(); ++i) {
    const double g = i < grad_norms_sq.size() ? grad_norms_sq[i] : 0.0;
    tail += lambda[i] * (1.0 + g);
  }
  return c * (tail + std::pow(h, 2 * l) + dt * dt);
}

double estimator_pressure(const PressureEstimatorInput& in, int r) {
  if (in.dim != 2 && in.dim != 3) throw Error(ErrorCode::invalid_argument, "dim must be 2 or 3");
  const double h = in.h;
  const double s = in.stiffness_norm;
  double e = 0.0;
  if (in.dim == 3) e += in.penalty == PressurePenalty::standard ? h * h : h * h * h / in.nu;
  e += (std::pow(h, 2 * in.l) + in.dt * in.dt) * (1.0 + 1.0 / in.nu + s + 1.0 / h);
  for (Eigen::Index i = r; i < in.lambda.size(); ++i) {
    const double g = i < in.grad_phi_sq.size() ? in.grad_phi_sq[i] : 0.0;
    e += in.lambda[i] * (1.0 + (1.0 + s) * g);
  }
  for (Eigen::Index i = r; i < in.gamma.size(); ++i) {
    const double g = i < in.grad_psi_sq.size() ? in.grad_psi_sq[i] : 0.0;
    e += h * h * in.gamma[i] * g;
  }
  return in.c * e;
}

SpectralNorm spectral_norm(const Mat& s, double tol, int max_iters) {
  SpectralNorm out;
  if (s.rows() != s.cols()) throw Error(ErrorCode::dimension_mismatch, "matrix must be square");
  if (s.rows() == 0) {
    out.converged = true;
    return out;
  }
  Vec x = Vec::Ones(s.rows()) / std::sqrt(static_cast<double>(s.rows()));
  double prev = 0.0;
  for (int it = 1; it <= max_iters; ++it) {
    const Vec y = s * x;
    const double nrm = y.norm();
    out.iterations = it;
    if (nrm == 0.0) {
      out.value = 0.0;
      out.converged = true;
      return out;
    }
    out.value = nrm;
    x = y / nrm;
    if (it > 1 && std::abs(nrm - prev) <= tol * nrm) {
      out.converged = true;
      return out;
    }
    prev = nrm;
  }
  return out;
}

GronwallBounds gronwall_bounds(const GronwallInput& in, int n) {
  if (!(in.delta > 0.0 && in.delta <= 1.0)) throw Error(ErrorCode::hypothesis_violated, "delta must lie in (0,1]");
  if (in.sigma < 0.0 || in.tau < 0.0 || !(in.dt > 0.0)) throw Error(ErrorCode::invalid_argument, "sigma, tau, dt");
  if (in.sigma * in.dt > 1.0 - in.delta) throw Error(ErrorCode::hypothesis_violated, "sigma*dt > 1 - delta");
  if (n < 0 || n > static_cast<int>(in.gamma.size())) throw Error(ErrorCode::invalid_argument, "n out of range");
  GronwallBounds b;
  b.rho = (in.sigma + in.tau) / in.delta;
  const double tn = n * in.dt;
  double sum_weighted = 0.0;
  double sum_gamma = 0.0;
  for (int l = 1; l <= n; ++l) {
    const double g = in.gamma[static_cast<std::size_t>(l - 1)];
    if (g > 0.0) sum_weighted += std::exp(b.rho * (tn - l * in.dt)) * g;
    sum_gamma += g;
  }
  b.alpha_bound = (in.alpha0 > 0.0 ? std::exp(b.rho * tn) * in.alpha0 : 0.0) + sum_weighted / in.delta;
  if (n == 0) {
    b.beta_sum_bound = 0.0;
    return b;
  }
  const double tm = (n - 1) * in.dt;
  const double growth = tm > 0.0 && in.sigma + in.tau > 0.0 ? (in.sigma + in.tau) * std::exp(b.rho * tm) * tm : 0.0;
  double ratio = 0.0;
  if (in.tau > 0.0) ratio = in.sigma > 0.0 ? in.tau / in.sigma : std::numeric_limits<double>::infinity();
  const double alpha_coef = 1.0 + ratio + growth;
  b.beta_sum_bound = (in.alpha0 > 0.0 ? alpha_coef * in.alpha0 : 0.0) + (sum_gamma > 0.0 ? (1.0 + growth) * sum_gamma / in.delta : 0.0);
  return b;
}

Vec fluctuation_forcing(const ReducedOperators& ops, const Vec& a_next, double t) {
  Vec g = ops.force ? ops.force(t) : Vec::Zero(ops.r);
  g -= ops.nu * ops.lift_stiffness + ops.mu * ops.lift_graddiv + ops.lift_convection + ops.lift_advecting * a_next;
  return g;
}

StabilityReport stability_check(const StabilityInput& in) {
  StabilityReport rep;
  const Eigen::Index n = in.a.rows();
  const double dt = in.dt;
  const double rho = 1.0 / in.delta;
  const double u0 = in.a0.squaredNorm();
  rep.dt_hypothesis = dt <= 1.0 - in.delta;
  rep.mesh_hypothesis = in.h <= in.c_s * dt;
  const double s = 5.0 * in.c_2 * in.c_s * in.c_s;
  rep.pressure_dt_hypothesis = dt <= (1.0 - in.delta) / (s + 0.2);

  Vec prev = in.a0;
  double f_sum = 0.0;     // dt sum |g|^2
  double diss_sum = 0.0;  // dt sum (nu aSa + mu aGa)
  rep.min_energy_margin = std::numeric_limits<double>::infinity();
  rep.min_estvel1_margin = std::numeric_limits<double>::infinity();
  rep.min_estvel2_margin = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Vec a = in.a.row(k).transpose();
    const Vec g = in.forcing.row(k).transpose();
    const double tk = static_cast<double>(k + 1) * dt;
    const double diss = in.nu * a.dot(in.stiffness * a) + in.mu * a.dot(in.graddiv * a);
    const double lhs = 0.5 * a.squaredNorm() - 0.5 * prev.squaredNorm() + 0.5 * (a - prev).squaredNorm() + dt * diss;
    StabilityStep st;
    st.energy_identity_residual = dt * g.dot(a) - lhs;
    st.energy_margin = 0.5 * dt * g.squaredNorm() + 0.5 * dt * a.squaredNorm() - lhs;
    f_sum += dt * g.squaredNorm();
    diss_sum += dt * diss;
    const double e = std::exp(rho * tk);
    st.estvel1_lhs = a.squaredNorm();
    st.estvel1_rhs = e * u0 + e * f_sum / in.delta;
    st.estvel2_lhs = diss_sum;
    st.estvel2_rhs = 0.5 * (1.0 + tk * e) * u0 + 0.5 / in.delta * (1.0 + tk * e) * f_sum;
    rep.min_energy_margin = std::min(rep.min_energy_margin, st.energy_margin);
    rep.min_estvel1_margin = std::min(rep.min_estvel1_margin, st.estvel1_rhs - st.estvel1_lhs);
    rep.min_estvel2_margin = std::min(rep.min_estvel2_margin, st.estvel2_rhs - st.estvel2_lhs);
    rep.steps.push_back(st);
    prev = a;
  }
  const double t_end = static_cast<double>(n) * dt;
  const double big_a = std::exp(rho * t_end) * u0 + std::exp(rho * t_end) * f_sum / in.delta;
  rep.cond2 = big_a == 0.0 || in.c_2 <= std::sqrt(in.nu / 10.0) / (big_a * in.c_inv);
  if (in.pressure_tau_sq.size() == n && n > 0) {
    rep.has_pressure = true;
    rep.estpress1_lhs = dt * in.pressure_tau_sq.sum();
    const double rho_p = (2.0 * s + 0.2) / in.delta;
    const double grow = (2.0 * s + 0.2) * std::exp(rho_p * t_end) * t_end;
    rep.estpress1_rhs = (2.0 + grow) * u0 + 5.0 / in.delta * (1.0 + grow) * (1.0 + in.c_2 * in.h * in.h) * f_sum;
  }
  if (n == 0) rep.min_energy_margin = rep.min_estvel1_margin = rep.min_estvel2_margin = 0.0;
  return rep;
}

int stagnation_cutoff(const std::vector<double>& y, double threshold) {
  const int n = static_cast<int>(y.size());
  for (int i = 1; i + 1 < n; ++i) {
    const double d1 = std::abs(std::log10(y[static_cast<std::size_t>(i)]) - std::log10(y[static_cast<std::size_t>(i - 1)]));
    const double d2 = std::abs(std::log10(y[static_cast<std::size_t>(i + 1)]) - std::log10(y[static_cast<std::size_t>(i)]));
    if (d1 < threshold && d2 < threshold) return std::max(i, 2);
  }
  return n;
}

SlopeFit slope_regression(const std::vector<double>& x, const std::vector<double>& y, double threshold, int count) {
  if (x.size() != y.size()) throw Error(ErrorCode::dimension_mismatch, "x and y lengths differ");
  if (x.size() < 2) throw Error(ErrorCode::degenerate_fit, "need at least two points");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw Error(ErrorCode::invalid_argument, "log-log fit needs positive data");
  }
  int m = count > 0 ? std::min<int>(count, static_cast<int>(x.size())) : stagnation_cutoff(y, threshold);
  m = std::max(m, 2);
  double sx = 0.0, sy = 0.0;
  for (int i = 0; i < m; ++i) {
    sx += std::log10(x[static_cast<std::size_t>(i)]);
    sy += std::log10(y[static_cast<std::size_t>(i)]);
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < m; ++i) {
    const double dx = std::log10(x[static_cast<std::size_t>(i)]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log10(y[static_cast<std::size_t>(i)]) - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::degenerate_fit, "all x values are equal");
  SlopeFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.points_used = m;
  return f;
}

double normalize_to_first(std::vector<double>& series, const std::vector<double>& reference) {
  if (series.empty() || reference.empty() || series[0] == 0.0) return 1.0;
  const double c = reference[0] / series[0];
  for (double& v : series) v *= c;
  return c;
}

ForceCoefficients drag_lift(const TaylorHoodSpace& space, const Vec& u, const Vec& p, int tag, double dynamic_viscosity,
                            double density, double speed, double diameter) {
  const TriMesh& mesh = space.mesh();
  std::map<std::pair<int, int>, int> owner;
  for (int k = 0; k < mesh.n_elements(); ++k) {
    const auto& t = mesh.triangles[static_cast<std::size_t>(k)];
    for (int e = 0; e < 3; ++e) {
      const int a = t[e], b = t[(e + 1) % 3];
      owner[{std::min(a, b), std::max(a, b)}] = k;
    }
  }
  const LineRule line = gauss_legendre(3);
  Vec2 force_fluid_normal = Vec2::Zero();
  double orientation = 0.0;
  bool found = false;
  for (const auto& f : mesh.boundary_facets) {
    if (tag >= 0 && f.tag != tag) continue;
    found = true;
    const Vec2& x0 = mesh.vertices[f.v[0]];
    const Vec2& x1 = mesh.vertices[f.v[1]];
    const Vec2 d = x1 - x0;
    const double len = d.norm();
    Vec2 n_fluid(d.y() / len, -d.x() / len);
    const int k = owner.at({std::min(f.v[0], f.v[1]), std::max(f.v[0], f.v[1])});
    const ElementBasis basis(mesh, k);
    const auto& tri = mesh.triangles[static_cast<std::size_t>(k)];
    for (int a = 0; a < 3; ++a) {
      if (tri[a] != f.v[0] && tri[a] != f.v[1] && (mesh.vertices[tri[a]] - x0).dot(n_fluid) > 0.0) n_fluid = -n_fluid;
    }
    const auto& nodes = space.element_nodes(k);
    const auto& pd = space.element_pres_dofs(k);
    int i0 = 0, i1 = 0;
    for (int a = 0; a < 3; ++a) {
      if (tri[a] == f.v[0]) i0 = a;
      if (tri[a] == f.v[1]) i1 = a;
    }
    for (std::size_t q = 0; q < line.points.size(); ++q) {
      const double s = line.points[q];
      Bary l{0.0, 0.0, 0.0};
      l[i0] = 1.0 - s;
      l[i1] = s;
      const auto g = basis.p2_gradients(l);
      Mat2 grad = Mat2::Zero();
      for (int a = 0; a < 6; ++a) {
        grad.row(0) += u[space.vel_dof(0, nodes[a])] * g[a].transpose();
        grad.row(1) += u[space.vel_dof(1, nodes[a])] * g[a].transpose();
      }
      const double pq = l[0] * p[pd[0]] + l[1] * p[pd[1]] + l[2] * p[pd[2]];
      const Mat2 sigma = dynamic_viscosity * (grad + grad.transpose()) - pq * Mat2::Identity();
      const double w = line.weights[q] * len;
      force_fluid_normal += w * (sigma * n_fluid);
      orientation += w * basis.point(l).dot(n_fluid);
    }
  }
  if (!found) throw Error(ErrorCode::unknown_tag, "no facet carries tag " + std::to_string(tag));
  ForceCoefficients out;
  // positive flux of x means the fluid normal already points out of the enclosed region
  out.force = orientation > 0.0 ? force_fluid_normal : Vec2(-force_fluid_normal);
  const double scale = 0.5 * density * speed * speed * diameter;
  out.drag = out.force.x() / scale;
  out.lift = out.force.y() / scale;
  return out;
}

ErrorReport sweep(const SnapshotSet& snapshots, const SweepConfig& config, Exec exec) {
  if (config.r_list.empty()) throw Error(ErrorCode::invalid_argument, "empty r list");
  if (!std::is_sorted(config.r_list.begin(), config.r_list.end())) {
    throw Error(ErrorCode::invalid_argument, "r list must be ascending");
  }
  const TaylorHoodSpace& space = *snapshots.space;
  const FlowOperators fops = FlowOperators::assemble(space, exec);
  auto mass = std::make_shared<const SparseMatrix>(fops.mass);
  auto pmass = std::make_shared<const SparseMatrix>(fops.pressure_mass);

  Vec offset;
  const Mat centered = center_snapshots(snapshots.velocity, config.centering, snapshots.initial_velocity, offset);
  PODBasis vb = compute_pod(centered, mass, snapshots.dt, -1, exec);
  vb.centering = config.centering;
  vb.offset = offset;
  PODBasis pb = compute_pod(snapshots.pressure, pmass, snapshots.dt, -1, exec);
  pb.field = FieldKind::pressure;

  ErrorReport rep;
  rep.velocity_rank = vb.rank;
  rep.pressure_rank = pb.rank;
  const int cap = vb.rank;
  std::vector<int> rs;
  for (int r : config.r_list) {
    if (r < 1) throw Error(ErrorCode::invalid_argument, "r must be positive");
    int snapped = snap_to_eigenspace(vb.eigenvalues, std::min(r, cap), cap, config.eigen_gap);
    if (rs.empty() || snapped > rs.back()) rs.push_back(snapped);
  }
  const int r_max = rs.back();

  const TauCoefficients tau = make_tau(space.mesh(), config.tau_constant, config.tau_mode);
  ROMConfig rc;
  rc.nu = config.nu;
  rc.mu_graddiv = config.mu_graddiv;
  rc.forcing = config.forcing;
  const ReducedOperators full = build_reduced_operators(truncate(vb, r_max), truncate(pb, std::min(r_max, pb.r())), space, rc, tau,
                                                        snapshots.initial_velocity, exec);

  Vec grad_phi(vb.r()), grad_psi(pb.r());
  const Mat s_full = vb.modes.transpose() * (fops.stiffness * vb.modes);
  for (int i = 0; i < vb.r(); ++i) grad_phi[i] = s_full(i, i);
  const SparseMatrix p_stiff = assemble_pressure_tau_stiffness(
      space, std::vector<double>(static_cast<std::size_t>(space.mesh().n_elements()), 1.0), exec);
  for (int i = 0; i < pb.r(); ++i) grad_psi[i] = pb.modes.col(i).dot(p_stiff * pb.modes.col(i));
  // eigenvalues beyond the numerical rank carry no usable modes
  const Vec lambda = vb.eigenvalues.head(vb.rank);
  const Vec gamma = pb.eigenvalues.head(pb.rank);

  double fom_vel_sq = 0.0, fom_vel_max = 0.0, fom_pres_sq = 0.0;
  for (int n = 0; n < snapshots.size(); ++n) {
    const double v = snapshots.velocity.col(n).dot(fops.mass * snapshots.velocity.col(n));
    fom_vel_sq += snapshots.dt * v;
    fom_vel_max = std::max(fom_vel_max, std::sqrt(v));
    const auto g = pressure_gradients(space, snapshots.pressure.col(n));
    fom_pres_sq += snapshots.dt * tau_inner_product(space, tau.values, g, g);
  }

  const double h = space.mesh().h_global;
  const int n_steps = snapshots.size() * config.stride;
  for (int r : rs) {
    const ReducedOperators ops = restrict_operators(full, r);
    const ROMTrajectory traj = run_rom(ops, config.fom_dt, n_steps, config.scheme, config.stride);
    const Mat u_r = reconstruct_velocity(truncate(vb, r), traj);
    const Mat p_r = reconstruct_pressure(truncate(pb, ops.rp), traj, fops.pressure_mean);
    SweepRow row;
    row.r = r;
    row.ratio = contribution_ratio(vb.eigenvalues, r);
    row.err_vel = error_velocity(u_r, snapshots.velocity, fops.mass, snapshots.dt);
    row.err_vel_sqrt = std::sqrt(row.err_vel);
    row.err_pres = error_pressure_tau(space, tau.values, p_r, snapshots.pressure, snapshots.dt);
    row.err_pres_sqrt = std::sqrt(row.err_pres);
    row.est_vel = estimator_velocity(lambda, grad_phi, r, h, 2, config.fom_dt, config.estimator_c);
    PressureEstimatorInput pin;
    pin.lambda = lambda;
    pin.grad_phi_sq = grad_phi.head(vb.rank);
    pin.gamma = gamma;
    pin.grad_psi_sq = grad_psi.head(pb.rank);
    pin.stiffness_norm = spectral_norm(ops.stiffness).value;
    pin.h = h;
    pin.dt = config.fom_dt;
    pin.nu = config.nu;
    pin.c = config.estimator_c;
    pin.penalty = config.penalty;
    row.est_pres = estimator_pressure(pin, r);
    row.fom_vel_norm_sq = fom_vel_sq;
    row.fom_pres_tau_sq = fom_pres_sq;
    double max_err = 0.0;
    for (Eigen::Index n = 0; n < u_r.cols(); ++n) {
      const Vec e = u_r.col(n) - snapshots.velocity.col(n);
      max_err = std::max(max_err, std::sqrt(e.dot(fops.mass * e)));
    }
    row.max_rel_vel_error = fom_vel_max > 0.0 ? max_err / fom_vel_max : max_err;
    row.near_singular_steps = traj.near_singular_steps;
    rep.rows.push_back(row);
  }

  std::vector<double> x, ev, ep, sv, sp;
  for (const auto& row : rep.rows) {
    x.push_back(row.ratio);
    ev.push_back(row.err_vel);
    ep.push_back(row.err_pres);
    sv.push_back(row.est_vel);
    sp.push_back(row.est_pres);
  }
  rep.norm_vel = normalize_to_first(sv, ev);
  rep.norm_pres = normalize_to_first(sp, ep);
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    rep.rows[i].est_vel_norm = sv[i];
    rep.rows[i].est_pres_norm = sp[i];
  }
  // the fit needs positive ratios; the full-rank row (ratio 0) is excluded
  std::size_t usable = 0;
  while (usable < x.size() && x[usable] > 0.0 && ev[usable] > 0.0 && ep[usable] > 0.0) ++usable;
  if (usable >= 2) {
    auto head = [usable](const std::vector<double>& v) { return std::vector<double>(v.begin(), v.begin() + static_cast<long>(usable)); };
    const auto xs = head(x);
    rep.fit_err_vel = slope_regression(xs, head(ev), config.stagnation_threshold);
    rep.fit_err_pres = slope_regression(xs, head(ep), config.stagnation_threshold);
    rep.fit_est_vel = slope_regression(xs, head(sv), config.stagnation_threshold, rep.fit_err_vel.points_used);
    rep.fit_est_pres = slope_regression(xs, head(sp), config.stagnation_threshold, rep.fit_err_pres.points_used);
  }
  return rep;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_report_csv(std::ostream& os, const ErrorReport& report) {
  os << "r,R_u,err_vel,err_pres_tau,est_vel,est_pres\n";
  for (const auto& row : report.rows) {
    os << row.r << ',' << format_double(row.ratio) << ',' << format_double(row.err_vel) << ','
       << format_double(row.err_pres) << ',' << format_double(row.est_vel_norm) << ','
       << format_double(row.est_pres_norm) << '\n';
  }
  auto fit = [&os](const char* name, const SlopeFit& f) {
    os << "# fit," << name << ',' << format_double(f.slope) << ',' << format_double(f.intercept) << ','
       << f.points_used << '\n';
  };
  os << "# fit,series,slope,log10_intercept,points\n";
  fit("err_vel", report.fit_err_vel);
  fit("err_pres_tau", report.fit_err_pres);
  fit("est_vel", report.fit_est_vel);
  fit("est_pres", report.fit_est_pres);
  os << "# normalization,est_vel," << format_double(report.norm_vel) << '\n';
  os << "# normalization,est_pres," << format_double(report.norm_pres) << '\n';
  os << "# rank,velocity," << report.velocity_rank << '\n';
  os << "# rank,pressure," << report.pressure_rank << '\n';
}

void write_plot_script(std::ostream& os, const std::string& csv_name) {
  os << "set datafile separator ','\n"
     << "set logscale xy\n"
     << "set xlabel 'R_u'\n"
     << "set key left top\n"
     << "plot '" << csv_name << "' every ::1 using 2:3 with linespoints title 'velocity error', \\\n"
     << "     '' every ::1 using 2:5 with lines title 'velocity estimator', \\\n"
     << "     '' every ::1 using 2:4 with linespoints title 'pressure error', \\\n"
     << "     '' every ::1 using 2:6 with lines title 'pressure estimator'\n";
}

}  // namespace smrom
