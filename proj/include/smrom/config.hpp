#pragma once

#include "smrom/analysis.hpp"
#include "smrom/io.hpp"

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

namespace smrom {

enum class Benchmark { cavity, cylinder, taylor_green };

Benchmark parse_benchmark(const std::string& s);
const char* to_string(Benchmark b);

/// Run parameters read from a flat key = value file. U = D = 1, so nu = 1/re.
struct RunConfig {
  Benchmark benchmark = Benchmark::cavity;
  int mesh_n = 16;
  int refinement = 0;
  double re = 100.0;
  double dt = 1e-2;
  double t_end = 0.5;
  TimeScheme scheme = TimeScheme::semi_implicit;
  double mu_graddiv = 0.05;
  double picard_tol = 1e-10;
  int picard_max_iters = 50;
  int snapshot_stride = 1;
  int spinup_steps = 0;
  double tau_constant = 1.0;
  TauMode tau_mode = TauMode::per_element;
  Centering centering = Centering::initial;
  std::vector<int> r_list;
  std::vector<double> energy_tolerances;  ///< alternative to r_list: target R_u values
  double estimator_c = 1.0;
  double stagnation_threshold = 0.05;
  double eigen_gap = 1e-6;
  PressurePenalty penalty = PressurePenalty::standard;
  double delta = 0.5;
  std::string output_dir = "out";
  std::uint64_t seed = 12345;

  double nu() const { return 1.0 / re; }
  void validate() const;
};

/// Throws Error(config) naming the line and key of the first problem.
RunConfig parse_config(std::istream& is, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

/// Everything needed to rebuild a run: mesh, space, problem and FOM settings.
struct RunSetup {
  std::shared_ptr<const TriMesh> mesh;
  std::shared_ptr<const TaylorHoodSpace> space;
  FlowProblem problem;
  FOMConfig fom;
};

RunSetup make_setup(const RunConfig& c);

Metadata run_metadata(const RunConfig& c, const TriMesh& mesh);
/// Rebuilds the mesh and space recorded in snapshot metadata.
std::shared_ptr<const TaylorHoodSpace> space_from_metadata(const Metadata& m);

SweepConfig sweep_config(const RunConfig& c);

}  // namespace smrom
