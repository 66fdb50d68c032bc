#include "smrom/analysis.hpp"
#include "smrom/config.hpp"
#include "smrom/io.hpp"
#include "smrom/selfcheck.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace smrom;

namespace {

struct Options {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string snapshots;
  std::string field = "velocity";
  int r = -1;
  double tol = -1.0;
  std::string centering = "none";
  std::string velocity_basis;
  std::string pressure_basis;
  std::string scope = "all";
};

RunConfig config_from(const Options& o) {
  RunConfig c = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (!o.out.empty()) c.output_dir = o.out;
  if (o.seed_given) c.seed = o.seed;
  return c;
}

std::string prepare_out(const RunConfig& c) {
  fs::create_directories(c.output_dir);
  return c.output_dir;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SnapshotSet load_snapshots(const std::string& path) {
  Metadata meta;
  SnapshotSet s = read_snapshot_bundle(path, meta);
  s.space = space_from_metadata(meta);
  if (s.velocity.rows() != s.space->n_vel_dofs() || s.pressure.rows() != s.space->n_pres_dofs()) {
    throw Error(ErrorCode::io, path + ": snapshot length does not match the recorded mesh");
  }
  return s;
}

int cmd_fom(const Options& o) {
  const RunConfig c = config_from(o);
  const RunSetup setup = make_setup(c);
  if (c.scheme == TimeScheme::implicit && c.dt > 1.0 - c.delta) {
    std::cerr << "warning: dt > 1 - delta; the stability estimates do not apply\n";
  }
  const auto t0 = std::chrono::steady_clock::now();
  const SnapshotSet s = run_fom(setup.space, setup.problem, setup.fom);
  const double wall = seconds_since(t0);
  const std::string dir = prepare_out(c);
  const std::string path = (fs::path(dir) / "snapshots.smrom").string();
  write_snapshot_bundle(path, s, run_metadata(c, *setup.mesh));
  std::printf("benchmark %s, %s\n", to_string(c.benchmark), setup.mesh->descriptor.c_str());
  std::printf("velocity dofs %d, pressure dofs %d\n", setup.space->n_vel_dofs(), setup.space->n_pres_dofs());
  std::printf("steps %d, snapshots %d, wall time %.2f s\n", setup.fom.n_steps(), s.size(), wall);
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int cmd_pod(const Options& o) {
  if (o.snapshots.empty()) throw Error(ErrorCode::config, "--snapshots is required");
  const RunConfig c = config_from(o);
  const SnapshotSet s = load_snapshots(o.snapshots);
  const FieldKind field = parse_field_kind(o.field);
  const FlowOperators fops = FlowOperators::assemble(*s.space);
  std::shared_ptr<const SparseMatrix> weight;
  Mat data;
  Vec offset;
  Centering cen = Centering::none;
  if (field == FieldKind::velocity) {
    weight = std::make_shared<const SparseMatrix>(fops.mass);
    cen = parse_centering(o.centering);
    data = center_snapshots(s.velocity, cen, s.initial_velocity, offset);
  } else {
    weight = std::make_shared<const SparseMatrix>(fops.pressure_mass);
    data = s.pressure;
    offset = Vec::Zero(data.rows());
  }
  PODBasis b = compute_pod(data, weight, s.dt);
  b.field = field;
  b.centering = cen;
  b.offset = offset;
  int r = b.rank;
  if (o.r >= 0) r = std::min(o.r, b.rank);
  else if (o.tol >= 0.0) r = o.tol == 0.0 ? b.rank : rank_for_ratio(b, o.tol);
  b = truncate(b, r);

  const std::string dir = prepare_out(c);
  const std::string path = (fs::path(dir) / (std::string(to_string(field)) + ".pod")).string();
  write_basis(path, b);
  const PODBasis back = read_basis(path, weight);
  const double defect = orthonormality_defect(back);
  if (defect > 1e-10) throw Error(ErrorCode::non_convergence, "reloaded basis is not orthonormal: " + format_double(defect));

  std::printf("i,lambda,R\n");
  for (Eigen::Index i = 0; i < b.eigenvalues.size(); ++i) {
    std::printf("%ld,%s,%s\n", static_cast<long>(i + 1), format_double(b.eigenvalues[i]).c_str(),
                format_double(contribution_ratio(b.eigenvalues, static_cast<int>(i + 1))).c_str());
  }
  std::printf("# rank %d, modes kept %d, orthonormality defect on reload %.3e\n", b.rank, b.r(), defect);
  std::printf("# wrote %s\n", path.c_str());
  return 0;
}

int cmd_rom(const Options& o) {
  if (o.snapshots.empty()) throw Error(ErrorCode::config, "--snapshots is required");
  const RunConfig c = config_from(o);
  const SnapshotSet s = load_snapshots(o.snapshots);
  const FlowOperators fops = FlowOperators::assemble(*s.space);
  auto mv = std::make_shared<const SparseMatrix>(fops.mass);
  auto mp = std::make_shared<const SparseMatrix>(fops.pressure_mass);
  PODBasis vb, pb;
  if (!o.velocity_basis.empty()) {
    vb = read_basis(o.velocity_basis, mv);
  } else {
    Vec off;
    vb = compute_pod(center_snapshots(s.velocity, c.centering, s.initial_velocity, off), mv, s.dt);
    vb.centering = c.centering;
    vb.offset = off;
  }
  if (!o.pressure_basis.empty()) {
    pb = read_basis(o.pressure_basis, mp);
  } else {
    pb = compute_pod(s.pressure, mp, s.dt);
    pb.field = FieldKind::pressure;
  }
  const int r = o.r > 0 ? std::min(o.r, vb.r()) : vb.r();
  const int rp = std::min(r, pb.r());
  vb = truncate(vb, r);
  pb = truncate(pb, rp);
  ROMConfig rc;
  rc.nu = c.nu();
  rc.mu_graddiv = c.mu_graddiv;
  rc.forcing = sweep_config(c).forcing;
  const TauCoefficients tau = make_tau(s.space->mesh(), c.tau_constant, c.tau_mode);
  const auto t0 = std::chrono::steady_clock::now();
  const ReducedOperators ops = build_reduced_operators(vb, pb, *s.space, rc, tau, s.initial_velocity);
  const int stride = static_cast<int>(std::lround(s.dt / c.dt));
  const ROMTrajectory traj = run_rom(ops, c.dt, s.size() * stride, c.scheme, stride);
  const double wall = seconds_since(t0);
  const std::string dir = prepare_out(c);
  const std::string path = (fs::path(dir) / "trajectory.smrom").string();
  write_trajectory(path, traj);
  const Mat u = reconstruct_velocity(vb, traj);
  const Mat p = reconstruct_pressure(pb, traj, fops.pressure_mean);
  std::printf("r %d (pressure %d), steps %d, wall time %.2f s\n", r, rp, s.size() * stride, wall);
  std::printf("velocity error %s\n", format_double(error_velocity(u, s.velocity, fops.mass, s.dt)).c_str());
  std::printf("pressure tau error %s\n", format_double(error_pressure_tau(*s.space, tau.values, p, s.pressure, s.dt)).c_str());
  std::printf("near-singular recoveries %d\n", traj.near_singular_steps);
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int cmd_sweep(const Options& o) {
  const RunConfig c = config_from(o);
  SweepConfig sc = sweep_config(c);
  SnapshotSet s;
  if (!o.snapshots.empty()) {
    s = load_snapshots(o.snapshots);
  } else {
    const RunSetup setup = make_setup(c);
    s = run_fom(setup.space, setup.problem, setup.fom);
  }
  if (sc.r_list.empty() && !c.energy_tolerances.empty()) {
    const FlowOperators fops = FlowOperators::assemble(*s.space);
    Vec off;
    const PODBasis vb = compute_pod(center_snapshots(s.velocity, c.centering, s.initial_velocity, off),
                                    std::make_shared<const SparseMatrix>(fops.mass), s.dt);
    for (double tol : c.energy_tolerances) sc.r_list.push_back(std::max(1, rank_for_ratio(vb, tol)));
    std::sort(sc.r_list.begin(), sc.r_list.end());
    sc.r_list.erase(std::unique(sc.r_list.begin(), sc.r_list.end()), sc.r_list.end());
  }
  if (sc.r_list.empty()) throw Error(ErrorCode::config, "key 'r_list': required for a sweep");
  const ErrorReport rep = sweep(s, sc);
  const std::string dir = prepare_out(c);
  const fs::path csv = fs::path(dir) / "report.csv";
  {
    std::ofstream os(csv, std::ios::binary | std::ios::trunc);
    write_report_csv(os, rep);
  }
  {
    std::ofstream os(fs::path(dir) / "plot.gp", std::ios::binary | std::ios::trunc);
    write_plot_script(os, "report.csv");
  }
  {
    std::ofstream os(fs::path(dir) / "summary.txt", std::ios::binary | std::ios::trunc);
    os << "rows " << rep.rows.size() << "\n";
    os << "velocity rank " << rep.velocity_rank << ", pressure rank " << rep.pressure_rank << "\n";
    os << "velocity error slope " << format_double(rep.fit_err_vel.slope) << " (" << rep.fit_err_vel.points_used
       << " points)\n";
    os << "velocity estimator slope " << format_double(rep.fit_est_vel.slope) << "\n";
    os << "pressure error slope " << format_double(rep.fit_err_pres.slope) << " (" << rep.fit_err_pres.points_used
       << " points)\n";
    os << "pressure estimator slope " << format_double(rep.fit_est_pres.slope) << "\n";
  }
  write_report_csv(std::cout, rep);
  return 0;
}

int cmd_check(const Options& o) {
  const RunConfig c = config_from(o);
  return run_selfcheck(parse_check_scope(o.scope), c.seed, std::cout) ? 0 : 2;
}

int cmd_report(const Options& o) {
  if (o.snapshots.empty()) throw Error(ErrorCode::config, "--snapshots is required");
  Metadata meta;
  SnapshotSet s = read_snapshot_bundle(o.snapshots, meta);
  s.space = space_from_metadata(meta);
  const FlowOperators fops = FlowOperators::assemble(*s.space);
  const bool cylinder = meta["benchmark"] == "cylinder";
  const double nu = std::stod(meta["nu"]);
  std::printf("t,kinetic_energy,max_abs_div%s\n", cylinder ? ",drag,lift" : "");
  for (int n = 0; n < s.size(); ++n) {
    const Vec u = s.velocity.col(n);
    const double ke = 0.5 * u.dot(fops.mass * u);
    const double div = (fops.divergence * u).cwiseAbs().maxCoeff();
    std::printf("%s,%s,%s", format_double(s.times[static_cast<std::size_t>(n)]).c_str(), format_double(ke).c_str(),
                format_double(div).c_str());
    if (cylinder) {
      const ForceCoefficients f = drag_lift(*s.space, u, s.pressure.col(n), channel_tag::cylinder, nu, 1.0, 1.0, 1.0);
      std::printf(",%s,%s", format_double(f.drag).c_str(), format_double(f.lift).c_str());
    }
    std::printf("\n");
  }
  const std::string inv = check_snapshot_invariants(s, fops);
  std::printf("# snapshot invariants: %s\n", inv.empty() ? "ok" : inv.c_str());
  return inv.empty() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reduced-order Navier-Stokes pipeline: FOM snapshots, POD, Galerkin ROM with SM pressure recovery"};
  app.require_subcommand(1);
  Options o;
  auto common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config, "run configuration file (key = value)");
    sub->add_option("--out", o.out, "output directory (overrides output_dir)");
    sub->add_option("--seed", o.seed, "random seed (overrides seed)")->each([&o](const std::string&) { o.seed_given = true; });
  };
  auto* fom = app.add_subcommand("fom", "run the full-order model and write snapshots");
  common(fom);
  auto* pod = app.add_subcommand("pod", "build a POD basis from a snapshot file");
  common(pod);
  pod->add_option("--snapshots", o.snapshots, "snapshot file")->required();
  pod->add_option("--field", o.field, "velocity or pressure");
  auto* pod_r = pod->add_option("--r", o.r, "number of modes");
  pod->add_option("--tol", o.tol, "target contribution ratio (0 keeps all modes)")->excludes(pod_r);
  pod->add_option("--centering", o.centering, "none, initial or mean (velocity only)");
  auto* rom = app.add_subcommand("rom", "run the ROM and recover the pressure");
  common(rom);
  rom->add_option("--snapshots", o.snapshots, "snapshot file")->required();
  rom->add_option("--r", o.r, "number of modes (default: all)");
  rom->add_option("--velocity-basis", o.velocity_basis, "velocity basis file");
  rom->add_option("--pressure-basis", o.pressure_basis, "pressure basis file");
  auto* sw = app.add_subcommand("sweep", "error and estimator sweep over r");
  common(sw);
  sw->add_option("--snapshots", o.snapshots, "snapshot file (default: run the FOM from the config)");
  auto* check = app.add_subcommand("check", "run the invariant self-test suites");
  common(check);
  check->add_option("--scope", o.scope, "fem, pod, rom, gronwall or all");
  auto* report = app.add_subcommand("report", "per-snapshot diagnostics (energy, divergence, drag/lift)");
  common(report);
  report->add_option("--snapshots", o.snapshots, "snapshot file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  try {
    if (*fom) return cmd_fom(o);
    if (*pod) return cmd_pod(o);
    if (*rom) return cmd_rom(o);
    if (*sw) return cmd_sweep(o);
    if (*check) return cmd_check(o);
    if (*report) return cmd_report(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::config:
      case ErrorCode::io:
      case ErrorCode::invalid_argument:
      case ErrorCode::unknown_tag:
        return 1;
      default:
        return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
