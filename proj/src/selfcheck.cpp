#include "smrom/selfcheck.hpp"

#include "smrom/analysis.hpp"
#include "smrom/quadrature.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

namespace smrom {

CheckScope parse_check_scope(const std::string& s) {
  if (s == "fem") return CheckScope::fem;
  if (s == "pod") return CheckScope::pod;
  if (s == "rom") return CheckScope::rom;
  if (s == "gronwall") return CheckScope::gronwall;
  if (s == "all") return CheckScope::all;
  throw Error(ErrorCode::config, "unknown check scope '" + s + "'");
}

namespace {

struct Tally {
  std::ostream& os;
  bool ok = true;

  /// value <= limit passes; the margin printed is limit - value.
  void report(const std::string& name, double value, double limit) {
    const bool pass = value <= limit && std::isfinite(value);
    ok = ok && pass;
    char buf[200];
    std::snprintf(buf, sizeof buf, "%-4s %-44s value=%.3e limit=%.3e margin=%.3e\n", pass ? "PASS" : "FAIL",
                  name.c_str(), value, limit, limit - value);
    os << buf;
  }
};

Vec random_vec(std::mt19937_64& rng, Eigen::Index n) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

double factorial(int n) { return std::tgamma(n + 1.0); }

void check_fem(Tally& t, std::mt19937_64& rng) {
  const auto& rule = gauss7();
  double worst = 0.0;
  for (int a = 0; a <= 5; ++a) {
    for (int b = 0; a + b <= 5; ++b) {
      double q = 0.0;
      for (std::size_t i = 0; i < rule.weights.size(); ++i) {
        q += 0.5 * rule.weights[i] * std::pow(rule.points[i][1], a) * std::pow(rule.points[i][2], b);
      }
      const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
      worst = std::max(worst, std::abs(q - exact) / exact);
    }
  }
  t.report("quadrature exact to degree 5 (rel)", worst, 1e-13);

  for (int n : {2, 4, 8}) {
    auto mesh = std::make_shared<const TriMesh>(generate_structured_square(n));
    const TaylorHoodSpace space(mesh);
    const SparseMatrix m = assemble_mass_velocity(space, Exec::serial);
    double skew = 0.0;
    for (int s = 0; s < 20; ++s) {
      const Vec u = random_vec(rng, space.n_vel_dofs());
      const Vec v = random_vec(rng, space.n_vel_dofs());
      const double nu = std::sqrt(u.dot(m * u));
      const double nv = v.dot(m * v);
      skew = std::max(skew, std::abs(trilinear_b(space, u, v, v)) / (nu * nv));
    }
    t.report("trilinear skew |b(u,v,v)|/(|u||v|^2), n=" + std::to_string(n), skew, 1e-12);
    const double area = m.sum() / 2.0;
    t.report("velocity mass integrates 1, n=" + std::to_string(n), std::abs(area - 1.0), 1e-12);
  }
}

void check_pod(Tally& t, std::mt19937_64& rng) {
  auto mesh = std::make_shared<const TriMesh>(generate_structured_square(4));
  const TaylorHoodSpace space(mesh);
  auto w = std::make_shared<const SparseMatrix>(assemble_mass_velocity(space, Exec::serial));
  std::uniform_int_distribution<int> count(1, 20);
  double worst_tail = 0.0, worst_orth = 0.0;
  for (int s = 0; s < 10; ++s) {
    const int n = count(rng);
    Mat snaps(space.n_vel_dofs(), n);
    for (int j = 0; j < n; ++j) snaps.col(j) = random_vec(rng, snaps.rows());
    const PODBasis b = compute_pod(snaps, w, 0.1, -1, Exec::serial);
    worst_orth = std::max(worst_orth, orthonormality_defect(b));
    const double total = b.eigenvalues.sum();
    for (int r = 0; r <= b.rank; ++r) {
      const double direct = projection_error(snaps, b, r);
      const double tail = b.eigenvalues.tail(b.eigenvalues.size() - r).sum();
      worst_tail = std::max(worst_tail, std::abs(direct - tail) / total);
    }
  }
  t.report("projection error equals eigenvalue tail", worst_tail, 1e-9);
  t.report("weighted orthonormality of modes", worst_orth, 1e-10);
}

void check_rom(Tally& t, std::mt19937_64& rng) {
  auto mesh = std::make_shared<const TriMesh>(generate_structured_square(4));
  const TaylorHoodSpace space(mesh);
  auto mv = std::make_shared<const SparseMatrix>(assemble_mass_velocity(space, Exec::serial));
  auto mp = std::make_shared<const SparseMatrix>(assemble_mass_pressure(space, Exec::serial));
  const int r = 4;
  Mat us(space.n_vel_dofs(), r), ps(space.n_pres_dofs(), r);
  for (int j = 0; j < r; ++j) {
    us.col(j) = random_vec(rng, us.rows());
    ps.col(j) = random_vec(rng, ps.rows());
  }
  PODBasis vb = compute_pod(us, mv, 1.0, -1, Exec::serial);
  vb.offset = random_vec(rng, us.rows());
  const PODBasis pb = compute_pod(ps, mp, 1.0, -1, Exec::serial);
  const TauCoefficients tau = make_tau(*mesh, 1.0);
  ROMConfig rc;
  const ReducedOperators ops = build_reduced_operators(vb, pb, space, rc, tau, vb.offset, Exec::serial);

  double skew = 0.0, scale = 0.0, oracle = 0.0;
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      for (int k = 0; k < r; ++k) {
        const double c = ops.convection[static_cast<std::size_t>(i)](j, k);
        scale = std::max(scale, std::abs(c));
        skew = std::max(skew, std::abs(c + ops.convection[static_cast<std::size_t>(k)](j, i)));
        const double full = trilinear_b(space, vb.modes.col(j), vb.modes.col(k), vb.modes.col(i));
        oracle = std::max(oracle, std::abs(c - full));
      }
    }
  }
  t.report("convection tensor skew in (i,k) (rel)", skew / scale, 1e-12);
  t.report("convection tensor vs full-space trilinear (rel)", oracle / scale, 1e-12);
  const double sym_s = (ops.stiffness - ops.stiffness.transpose()).cwiseAbs().maxCoeff() / ops.stiffness.cwiseAbs().maxCoeff();
  const double sym_p =
      (ops.pres_stiffness - ops.pres_stiffness.transpose()).cwiseAbs().maxCoeff() / ops.pres_stiffness.cwiseAbs().maxCoeff();
  t.report("reduced stiffness symmetric", sym_s, 1e-12);
  t.report("pressure recovery matrix symmetric", sym_p, 1e-12);
  const TauCoefficients tu = make_tau(*mesh, 2.0, TauMode::uniform);
  t.report("tau bounds hold (per-element, uniform)", (tau_bounds_hold(*mesh, tau) && tau_bounds_hold(*mesh, tu)) ? 0.0 : 1.0,
           0.0);
}

void check_gronwall(Tally& t, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double worst_alpha = -1.0, worst_beta = -1.0;
  for (int s = 0; s < 1000; ++s) {
    GronwallInput in;
    in.delta = 0.05 + 0.95 * u01(rng);
    in.dt = 0.001 + 0.2 * u01(rng);
    in.sigma = u01(rng) * (1.0 - in.delta) / in.dt;
    in.tau = u01(rng) < 0.2 ? 0.0 : 3.0 * u01(rng);
    in.alpha0 = u01(rng) < 0.1 ? 0.0 : 5.0 * u01(rng);
    const int n = 1 + static_cast<int>(30 * u01(rng));
    in.gamma.resize(static_cast<std::size_t>(n));
    for (auto& g : in.gamma) g = u01(rng) < 0.2 ? 0.0 : u01(rng);
    // sequence satisfying the recursion: split the admissible right side
    double alpha = in.alpha0, beta_sum = 0.0;
    for (int l = 1; l <= n; ++l) {
      const double rhs = (1.0 + in.tau * in.dt) * alpha + in.gamma[static_cast<std::size_t>(l - 1)];
      const double used = rhs * u01(rng);
      const double theta = u01(rng);
      const double beta = (1.0 - theta) * used;
      alpha = theta * used / (1.0 - in.sigma * in.dt);
      beta_sum += beta;
      const GronwallBounds b = gronwall_bounds(in, l);
      const double sa = std::max(b.alpha_bound, 1e-300);
      const double sb = std::max(b.beta_sum_bound, 1e-300);
      worst_alpha = std::max(worst_alpha, (alpha - b.alpha_bound) / sa);
      worst_beta = std::max(worst_beta, (beta_sum - b.beta_sum_bound) / sb);
    }
  }
  t.report("alpha_n below its bound (rel excess)", worst_alpha, 1e-12);
  t.report("sum beta below its bound (rel excess)", worst_beta, 1e-12);
}

}  // namespace

bool run_selfcheck(CheckScope scope, std::uint64_t seed, std::ostream& os) {
  Tally t{os};
  std::mt19937_64 rng(seed);
  const bool all = scope == CheckScope::all;
  if (all || scope == CheckScope::fem) check_fem(t, rng);
  if (all || scope == CheckScope::pod) check_pod(t, rng);
  if (all || scope == CheckScope::rom) check_rom(t, rng);
  if (all || scope == CheckScope::gronwall) check_gronwall(t, rng);
  os << (t.ok ? "all checks passed\n" : "some checks FAILED\n");
  return t.ok;
}

}  // namespace smrom
