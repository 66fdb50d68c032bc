#include "smrom/rom.hpp"

#include "smrom/fe.hpp"
#include "smrom/quadrature.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace smrom {

TauMode parse_tau_mode(const std::string& s) {
  if (s == "per_element") return TauMode::per_element;
  if (s == "uniform") return TauMode::uniform;
  throw Error(ErrorCode::config, "unknown tau_mode '" + s + "'");
}

const char* to_string(TauMode m) { return m == TauMode::per_element ? "per_element" : "uniform"; }

TauCoefficients make_tau(const TriMesh& mesh, double c, TauMode mode) {
  if (!(c > 0.0)) throw Error(ErrorCode::invalid_argument, "tau constant must be positive");
  TauCoefficients t;
  t.values.resize(static_cast<std::size_t>(mesh.n_elements()));
  double lo = 0.0, hi = 0.0;
  for (int k = 0; k < mesh.n_elements(); ++k) {
    const double hk = mesh.h_per_element[static_cast<std::size_t>(k)];
    const double v = mode == TauMode::per_element ? c * hk * hk : c * mesh.h_global * mesh.h_global;
    t.values[static_cast<std::size_t>(k)] = v;
    const double ratio = v / (hk * hk);
    if (k == 0 || ratio < lo) lo = ratio;
    if (k == 0 || ratio > hi) hi = ratio;
  }
  t.c1 = lo;
  t.c2 = hi;
  return t;
}

bool tau_bounds_hold(const TriMesh& mesh, const TauCoefficients& tau) {
  if (static_cast<int>(tau.values.size()) != mesh.n_elements() || !(tau.c1 > 0.0)) return false;
  for (int k = 0; k < mesh.n_elements(); ++k) {
    const double h2 = mesh.h_per_element[static_cast<std::size_t>(k)] * mesh.h_per_element[static_cast<std::size_t>(k)];
    const double v = tau.values[static_cast<std::size_t>(k)];
    if (v < tau.c1 * h2 * (1.0 - 1e-14) || v > tau.c2 * h2 * (1.0 + 1e-14)) return false;
  }
  return true;
}

Vec contract(const Tensor3& t, const Vec& x, const Vec& y) {
  Vec out(static_cast<Eigen::Index>(t.size()));
  for (std::size_t i = 0; i < t.size(); ++i) out[static_cast<Eigen::Index>(i)] = x.dot(t[i] * y);
  return out;
}

namespace {

/// Values and gradients of a set of P2 velocity fields at every quadrature
/// point (rows ordered element-major), plus the point data.
struct QuadratureFields {
  Mat value[2];    // value[c](q, j)
  Mat grad[2][2];  // grad[c][d](q, j) = d u_c / d x_d
  Vec weight;      // w_q |K|
  Vec tau_weight;  // w_q |K| tau_K
  std::vector<Vec2> points;
  std::vector<int> element;
};

QuadratureFields sample_fields(const TaylorHoodSpace& space, const Mat& fields, const std::vector<double>& tau,
                               Exec exec) {
  const auto& rule = gauss7();
  const int nq = static_cast<int>(rule.weights.size());
  const int ne = space.mesh().n_elements();
  const Eigen::Index q_total = static_cast<Eigen::Index>(ne) * nq;
  const Eigen::Index m = fields.cols();
  QuadratureFields f;
  for (int c = 0; c < 2; ++c) {
    f.value[c].resize(q_total, m);
    for (int d = 0; d < 2; ++d) f.grad[c][d].resize(q_total, m);
  }
  f.weight.resize(q_total);
  f.tau_weight.resize(q_total);
  f.points.resize(static_cast<std::size_t>(q_total));
  f.element.resize(static_cast<std::size_t>(q_total));
  for_each_index(exec, static_cast<std::size_t>(ne), [&](std::size_t kk) {
    const int k = static_cast<int>(kk);
    const ElementBasis basis(space.mesh(), k);
    const auto& nodes = space.element_nodes(k);
    Eigen::Matrix<double, 7, 6> nv;
    Eigen::Matrix<double, 7, 6> gx;
    Eigen::Matrix<double, 7, 6> gy;
    for (int q = 0; q < nq; ++q) {
      const auto n = basis.p2_values(rule.points[static_cast<std::size_t>(q)]);
      const auto g = basis.p2_gradients(rule.points[static_cast<std::size_t>(q)]);
      for (int a = 0; a < 6; ++a) {
        nv(q, a) = n[a];
        gx(q, a) = g[a].x();
        gy(q, a) = g[a].y();
      }
      const Eigen::Index row = static_cast<Eigen::Index>(k) * nq + q;
      f.weight[row] = rule.weights[static_cast<std::size_t>(q)] * basis.area();
      f.tau_weight[row] = f.weight[row] * tau[kk];
      f.points[static_cast<std::size_t>(row)] = basis.point(rule.points[static_cast<std::size_t>(q)]);
      f.element[static_cast<std::size_t>(row)] = k;
    }
    Mat local(6, m);
    for (int c = 0; c < 2; ++c) {
      for (int a = 0; a < 6; ++a) local.row(a) = fields.row(space.vel_dof(c, nodes[a]));
      const Eigen::Index row0 = static_cast<Eigen::Index>(k) * nq;
      f.value[c].middleRows(row0, nq).noalias() = nv * local;
      f.grad[c][0].middleRows(row0, nq).noalias() = gx * local;
      f.grad[c][1].middleRows(row0, nq).noalias() = gy * local;
    }
  });
  return f;
}

/// Gradients of P1 pressure fields per element: out[d](k, i).
void pressure_gradient_table(const TaylorHoodSpace& space, const Mat& fields, Mat out[2]) {
  const int ne = space.mesh().n_elements();
  out[0].resize(ne, fields.cols());
  out[1].resize(ne, fields.cols());
  for (int k = 0; k < ne; ++k) {
    const ElementBasis basis(space.mesh(), k);
    const auto& g = basis.p1_gradients();
    const auto& d = space.element_pres_dofs(k);
    for (Eigen::Index i = 0; i < fields.cols(); ++i) {
      const Vec2 v = fields(d[0], i) * g[0] + fields(d[1], i) * g[1] + fields(d[2], i) * g[2];
      out[0](k, i) = v.x();
      out[1](k, i) = v.y();
    }
  }
}

}  // namespace

ReducedOperators build_reduced_operators(const PODBasis& velocity, const PODBasis& pressure,
                                         const TaylorHoodSpace& space, const ROMConfig& config,
                                         const TauCoefficients& tau, const Vec& initial_velocity, Exec exec) {
  const int r = velocity.r();
  const int rp = pressure.r();
  if (rp > r) throw Error(ErrorCode::dimension_mismatch, "more pressure modes than velocity modes");
  if (velocity.modes.rows() != space.n_vel_dofs() || pressure.modes.rows() != space.n_pres_dofs()) {
    throw Error(ErrorCode::dimension_mismatch, "bases do not match the space");
  }
  if (static_cast<int>(tau.values.size()) != space.mesh().n_elements()) {
    throw Error(ErrorCode::dimension_mismatch, "tau length");
  }
  const int m = r + 1;  // index 0 is the lift
  Mat aug(space.n_vel_dofs(), m);
  aug.col(0) = velocity.offset.size() == aug.rows() ? velocity.offset : Vec::Zero(aug.rows());
  aug.rightCols(r) = velocity.modes;

  ReducedOperators ops;
  ops.r = r;
  ops.rp = rp;
  ops.nu = config.nu;
  ops.mu = config.mu_graddiv;
  ops.tau = tau.values;

  const SparseMatrix s = assemble_stiffness_velocity(space, exec);
  const SparseMatrix g = assemble_graddiv(space, exec);
  const Mat s_aug = aug.transpose() * (s * aug);
  const Mat g_aug = aug.transpose() * (g * aug);
  ops.stiffness = s_aug.bottomRightCorner(r, r);
  ops.graddiv = g_aug.bottomRightCorner(r, r);
  ops.stiffness = 0.5 * (ops.stiffness + ops.stiffness.transpose()).eval();
  ops.graddiv = 0.5 * (ops.graddiv + ops.graddiv.transpose()).eval();
  ops.lift_stiffness = s_aug.col(0).tail(r);
  ops.lift_graddiv = g_aug.col(0).tail(r);

  const QuadratureFields qf = sample_fields(space, aug, tau.values, exec);
  Mat pgrad_el[2];
  pressure_gradient_table(space, pressure.modes, pgrad_el);
  const Eigen::Index q_total = qf.weight.size();

  // test-function tables: w * phi_i^d and w * tau * dpsi_i/dx_d
  Mat xv[2], xp[2];
  for (int d = 0; d < 2; ++d) {
    xv[d] = qf.value[d].array().colwise() * qf.weight.array();
    xp[d].resize(q_total, rp);
    for (Eigen::Index q = 0; q < q_total; ++q) {
      xp[d].row(q) = qf.tau_weight[q] * pgrad_el[d].row(qf.element[static_cast<std::size_t>(q)]);
    }
  }

  // D_k(i, j) = ((phi_j . grad) phi_k, phi_i); E_k(i, j) = ((phi_j . grad) phi_k, tau grad psi_i)
  std::vector<Mat> dk(static_cast<std::size_t>(m));
  std::vector<Mat> ek(static_cast<std::size_t>(m));
  for_each_index(exec, static_cast<std::size_t>(m), [&](std::size_t kk) {
    const auto k = static_cast<Eigen::Index>(kk);
    Mat dsum = Mat::Zero(m, m);
    Mat esum = Mat::Zero(rp, m);
    for (int d = 0; d < 2; ++d) {
      const Mat y = (qf.value[0].array().colwise() * qf.grad[d][0].col(k).array() +
                     qf.value[1].array().colwise() * qf.grad[d][1].col(k).array())
                        .matrix();
      dsum.noalias() += xv[d].transpose() * y;
      esum.noalias() += xp[d].transpose() * y;
    }
    dk[kk] = std::move(dsum);
    ek[kk] = std::move(esum);
  });
  auto dval = [&](int i, int j, int k) { return dk[static_cast<std::size_t>(k)](i, j); };
  auto bval = [&](int i, int j, int k) { return 0.5 * (dval(i, j, k) - dval(k, j, i)); };

  ops.convection.assign(static_cast<std::size_t>(r), Mat(r, r));
  for (int i = 0; i < r; ++i) {
    Mat& c = ops.convection[static_cast<std::size_t>(i)];
    for (int j = 0; j < r; ++j) {
      for (int k = 0; k < r; ++k) c(j, k) = bval(i + 1, j + 1, k + 1);
    }
  }
  ops.lift_convection.resize(r);
  ops.lift_advected.resize(r, r);
  ops.lift_advecting.resize(r, r);
  for (int i = 0; i < r; ++i) {
    ops.lift_convection[i] = bval(i + 1, 0, 0);
    for (int k = 0; k < r; ++k) {
      ops.lift_advected(i, k) = bval(i + 1, 0, k + 1);
      ops.lift_advecting(i, k) = bval(i + 1, k + 1, 0);
    }
  }

  ops.pres_convection.assign(static_cast<std::size_t>(rp), Mat(r, r));
  ops.pres_lift_convection.resize(rp);
  ops.pres_lift_advected.resize(rp, r);
  ops.pres_lift_advecting.resize(rp, r);
  for (int i = 0; i < rp; ++i) {
    Mat& c = ops.pres_convection[static_cast<std::size_t>(i)];
    for (int k = 0; k < r; ++k) {
      const Mat& e = ek[static_cast<std::size_t>(k + 1)];
      for (int j = 0; j < r; ++j) c(j, k) = e(i, j + 1);
      ops.pres_lift_advected(i, k) = ek[static_cast<std::size_t>(k + 1)](i, 0);
      ops.pres_lift_advecting(i, k) = ek[0](i, k + 1);
    }
    ops.pres_lift_convection[i] = ek[0](i, 0);
  }

  // elementwise Laplacians and tau |K| grad psi tables
  const int ne = space.mesh().n_elements();
  Mat lap[2] = {Mat(ne, m), Mat(ne, m)};
  for (int j = 0; j < m; ++j) {
    const auto l = elementwise_laplacian(space, aug.col(j));
    for (int k = 0; k < ne; ++k) {
      lap[0](k, j) = l[static_cast<std::size_t>(k)].x();
      lap[1](k, j) = l[static_cast<std::size_t>(k)].y();
    }
  }
  Vec tau_area(ne);
  for (int k = 0; k < ne; ++k) tau_area[k] = tau.values[static_cast<std::size_t>(k)] * std::abs(space.mesh().signed_area(k));
  ops.pres_stiffness = Mat::Zero(rp, rp);
  Mat lp = Mat::Zero(rp, m);
  ops.pres_time = Mat::Zero(rp, r);
  for (int d = 0; d < 2; ++d) {
    const Mat tg = pgrad_el[d].array().colwise() * tau_area.array();
    ops.pres_stiffness.noalias() += tg.transpose() * pgrad_el[d];
    lp.noalias() += tg.transpose() * lap[d];
    ops.pres_time.noalias() += xp[d].transpose() * qf.value[d].rightCols(r);
  }
  ops.pres_stiffness = 0.5 * (ops.pres_stiffness + ops.pres_stiffness.transpose()).eval();
  ops.pres_laplacian = lp.rightCols(r);
  ops.pres_lift_laplacian = lp.col(0);

  ops.a0 = project(velocity, initial_velocity - aug.col(0));

  if (config.forcing) {
    const auto space_ptr = &space;
    const Mat phi = velocity.modes;
    const VelocityFunction f = config.forcing;
    ops.force = [space_ptr, phi, f](double t) -> Vec { return phi.transpose() * assemble_load(*space_ptr, f, t, Exec::serial); };
    const std::vector<Vec2> pts = qf.points;
    const Mat xp0 = xp[0], xp1 = xp[1];
    ops.pres_force = [pts, xp0, xp1, f](double t) -> Vec {
      Vec fx(static_cast<Eigen::Index>(pts.size())), fy(static_cast<Eigen::Index>(pts.size()));
      for (std::size_t q = 0; q < pts.size(); ++q) {
        const Vec2 v = f(pts[q], t);
        fx[static_cast<Eigen::Index>(q)] = v.x();
        fy[static_cast<Eigen::Index>(q)] = v.y();
      }
      return xp0.transpose() * fx + xp1.transpose() * fy;
    };
  }
  return ops;
}

ReducedOperators restrict_operators(const ReducedOperators& ops, int r, int rp) {
  if (r < 0 || r > ops.r) throw Error(ErrorCode::dimension_mismatch, "cannot restrict to a larger rank");
  if (rp < 0) rp = std::min(r, ops.rp);
  if (rp > ops.rp || rp > r) throw Error(ErrorCode::dimension_mismatch, "pressure dimension out of range");
  ReducedOperators o;
  o.r = r;
  o.rp = rp;
  o.nu = ops.nu;
  o.mu = ops.mu;
  o.tau = ops.tau;
  o.time_separable_force = ops.time_separable_force;
  auto block = [r](const Mat& x) { return Mat(x.topLeftCorner(r, r)); };
  auto slice = [r](const Tensor3& t, int rows) {
    Tensor3 out;
    for (int i = 0; i < rows; ++i) out.push_back(t[static_cast<std::size_t>(i)].topLeftCorner(r, r));
    return out;
  };
  o.stiffness = block(ops.stiffness);
  o.graddiv = block(ops.graddiv);
  o.convection = slice(ops.convection, r);
  o.lift_stiffness = ops.lift_stiffness.head(r);
  o.lift_graddiv = ops.lift_graddiv.head(r);
  o.lift_convection = ops.lift_convection.head(r);
  o.lift_advected = block(ops.lift_advected);
  o.lift_advecting = block(ops.lift_advecting);
  o.pres_stiffness = ops.pres_stiffness.topLeftCorner(rp, rp);
  o.pres_time = ops.pres_time.topLeftCorner(rp, r);
  o.pres_convection = slice(ops.pres_convection, rp);
  o.pres_laplacian = ops.pres_laplacian.topLeftCorner(rp, r);
  o.pres_lift_convection = ops.pres_lift_convection.head(rp);
  o.pres_lift_laplacian = ops.pres_lift_laplacian.head(rp);
  o.pres_lift_advected = ops.pres_lift_advected.topLeftCorner(rp, r);
  o.pres_lift_advecting = ops.pres_lift_advecting.topLeftCorner(rp, r);
  o.a0 = ops.a0.head(r);
  if (ops.force) o.force = [f = ops.force, r](double t) -> Vec { return f(t).head(r); };
  if (ops.pres_force) o.pres_force = [f = ops.pres_force, rp](double t) -> Vec { return f(t).head(rp); };
  return o;
}

namespace {

/// Matrix of b(w, phi_k, phi_i) for w = lift + sum_j a_j phi_j.
Mat advection_matrix(const ReducedOperators& ops, const Vec& w) {
  Mat a = ops.lift_advected;
  for (int j = 0; j < ops.r; ++j) {
    for (int i = 0; i < ops.r; ++i) a.row(i) += w[j] * ops.convection[static_cast<std::size_t>(i)].row(j);
  }
  return a;
}

Vec solve_step(const Vec& a_n, const Vec& w, const ReducedOperators& ops, double dt, const Vec& f) {
  const int r = ops.r;
  const Mat k = Mat::Identity(r, r) / dt + ops.nu * ops.stiffness + ops.mu * ops.graddiv + advection_matrix(ops, w);
  const Vec rhs = a_n / dt + f - ops.nu * ops.lift_stiffness - ops.mu * ops.lift_graddiv - ops.lift_convection -
                  ops.lift_advecting * w;
  return k.partialPivLu().solve(rhs);
}

}  // namespace

Vec step_rom_velocity(const Vec& a_n, const ReducedOperators& ops, double dt, double t_next, TimeScheme scheme,
                      const ROMStepOptions& opts, int* iterations) {
  if (a_n.size() != ops.r) throw Error(ErrorCode::dimension_mismatch, "coordinate length");
  if (ops.r == 0) return a_n;
  const Vec f = ops.force ? ops.force(t_next) : Vec::Zero(ops.r);
  if (scheme == TimeScheme::semi_implicit) {
    if (iterations) *iterations = 1;
    return solve_step(a_n, a_n, ops, dt, f);
  }
  Vec w = a_n;
  for (int it = 1; it <= opts.picard_max_iters; ++it) {
    const Vec next = solve_step(a_n, w, ops, dt, f);
    const double diff = (next - w).norm();
    const double scale = std::max(next.norm(), a_n.norm());
    w = next;
    if (diff <= opts.picard_tol * scale || diff == 0.0) {
      if (iterations) *iterations = it;
      return w;
    }
  }
  throw Error(ErrorCode::picard_divergence, "reduced Picard iteration did not converge");
}

Vec pressure_recovery_rhs(const Vec& a_next, const Vec& a_n, const ReducedOperators& ops, double dt,
                          double t_next) {
  Vec res = ops.pres_time * ((a_next - a_n) / dt);
  res += ops.pres_lift_convection + ops.pres_lift_advected * a_next + ops.pres_lift_advecting * a_next +
         contract(ops.pres_convection, a_next, a_next);
  res -= ops.nu * (ops.pres_lift_laplacian + ops.pres_laplacian * a_next);
  if (ops.pres_force) res -= ops.pres_force(t_next);
  return -res;
}

PressureRecovery recover_pressure(const Vec& a_next, const Vec& a_n, const ReducedOperators& ops, double dt,
                                  double t_next) {
  PressureRecovery out;
  if (ops.rp == 0) {
    out.b = Vec();
    return out;
  }
  const Vec rhs = pressure_recovery_rhs(a_next, a_n, ops, dt, t_next);
  Eigen::SelfAdjointEigenSolver<Mat> eig(ops.pres_stiffness);
  const Vec ev = eig.eigenvalues();
  const double top = ev.cwiseAbs().maxCoeff();
  if (ev.minCoeff() < 1e-12 * top) {
    out.near_singular = true;
    const Mat& v = eig.eigenvectors();
    Vec c = v.transpose() * rhs;
    for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = ev[i] > 1e-12 * top ? c[i] / ev[i] : 0.0;
    out.b = v * c;
  } else {
    out.b = ops.pres_stiffness.ldlt().solve(rhs);
  }
  return out;
}

ROMTrajectory run_rom(const ReducedOperators& ops, double dt, int n_steps, TimeScheme scheme, int stride,
                      const ROMStepOptions& opts) {
  if (stride < 1 || n_steps < 0) throw Error(ErrorCode::invalid_argument, "stride and step count");
  ROMTrajectory traj;
  traj.dt = dt * stride;
  const int n_rec = n_steps / stride;
  traj.a.resize(n_rec, ops.r);
  traj.b.resize(n_rec, ops.rp);
  Vec a = ops.a0;
  int row = 0;
  for (int n = 1; n <= n_steps; ++n) {
    const double t = n * dt;
    Vec next;
    try {
      next = step_rom_velocity(a, ops, dt, t, scheme, opts);
    } catch (const Error& e) {
      throw Error(e.code(), "step " + std::to_string(n) + ": " + e.what());
    }
    if (n % stride == 0 && row < n_rec) {
      const PressureRecovery p = recover_pressure(next, a, ops, dt, t);
      if (p.near_singular) ++traj.near_singular_steps;
      traj.a.row(row) = next.transpose();
      traj.b.row(row) = p.b.transpose();
      traj.times.push_back(t);
      ++row;
    }
    a = std::move(next);
  }
  return traj;
}

Mat reconstruct_velocity(const PODBasis& basis, const ROMTrajectory& traj) {
  Mat u = basis.modes.leftCols(traj.a.cols()) * traj.a.transpose();
  if (basis.offset.size() == u.rows()) u.colwise() += basis.offset;
  return u;
}

Mat reconstruct_pressure(const PODBasis& basis, const ROMTrajectory& traj, const Vec& mean_weights) {
  Mat p = basis.modes.leftCols(traj.b.cols()) * traj.b.transpose();
  if (basis.offset.size() == p.rows()) p.colwise() += basis.offset;
  const double area = mean_weights.sum();
  for (Eigen::Index n = 0; n < p.cols(); ++n) p.col(n).array() -= mean_weights.dot(p.col(n)) / area;
  return p;
}

}  // namespace smrom
