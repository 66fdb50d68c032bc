#include "smrom/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace smrom {

Benchmark parse_benchmark(const std::string& s) {
  if (s == "cavity") return Benchmark::cavity;
  if (s == "cylinder") return Benchmark::cylinder;
  if (s == "taylor_green") return Benchmark::taylor_green;
  throw Error(ErrorCode::config, "unknown benchmark '" + s + "'");
}

const char* to_string(Benchmark b) {
  switch (b) {
    case Benchmark::cavity: return "cavity";
    case Benchmark::cylinder: return "cylinder";
    case Benchmark::taylor_green: return "taylor_green";
  }
  return "cavity";
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& v) {
  double x = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) throw Error(ErrorCode::config, "expected a number, got '" + v + "'");
  return x;
}

long long to_integer(const std::string& v) {
  long long x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) throw Error(ErrorCode::config, "expected an integer, got '" + v + "'");
  return x;
}

int to_int(const std::string& v) {
  const long long x = to_integer(v);
  if (x < -2147483647LL || x > 2147483647LL) throw Error(ErrorCode::config, "integer out of range: " + v);
  return static_cast<int>(x);
}

template <class T, class F>
std::vector<T> to_list(const std::string& v, F convert) {
  std::vector<T> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw Error(ErrorCode::config, "empty list entry in '" + v + "'");
    out.push_back(convert(item));
  }
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"benchmark", [](RunConfig& c, const std::string& v) { c.benchmark = parse_benchmark(v); }},
      {"mesh_n", [](RunConfig& c, const std::string& v) { c.mesh_n = to_int(v); }},
      {"refinement", [](RunConfig& c, const std::string& v) { c.refinement = to_int(v); }},
      {"re", [](RunConfig& c, const std::string& v) { c.re = to_double(v); }},
      {"dt", [](RunConfig& c, const std::string& v) { c.dt = to_double(v); }},
      {"t_end", [](RunConfig& c, const std::string& v) { c.t_end = to_double(v); }},
      {"scheme", [](RunConfig& c, const std::string& v) { c.scheme = parse_time_scheme(v); }},
      {"mu_graddiv", [](RunConfig& c, const std::string& v) { c.mu_graddiv = to_double(v); }},
      {"picard_tol", [](RunConfig& c, const std::string& v) { c.picard_tol = to_double(v); }},
      {"picard_max_iters", [](RunConfig& c, const std::string& v) { c.picard_max_iters = to_int(v); }},
      {"snapshot_stride", [](RunConfig& c, const std::string& v) { c.snapshot_stride = to_int(v); }},
      {"spinup_steps", [](RunConfig& c, const std::string& v) { c.spinup_steps = to_int(v); }},
      {"tau_constant", [](RunConfig& c, const std::string& v) { c.tau_constant = to_double(v); }},
      {"tau_mode", [](RunConfig& c, const std::string& v) { c.tau_mode = parse_tau_mode(v); }},
      {"centering", [](RunConfig& c, const std::string& v) { c.centering = parse_centering(v); }},
      {"r_list", [](RunConfig& c, const std::string& v) { c.r_list = to_list<int>(v, to_int); }},
      {"energy_tolerances",
       [](RunConfig& c, const std::string& v) { c.energy_tolerances = to_list<double>(v, to_double); }},
      {"estimator_c", [](RunConfig& c, const std::string& v) { c.estimator_c = to_double(v); }},
      {"stagnation_threshold", [](RunConfig& c, const std::string& v) { c.stagnation_threshold = to_double(v); }},
      {"eigen_gap", [](RunConfig& c, const std::string& v) { c.eigen_gap = to_double(v); }},
      {"pressure_penalty",
       [](RunConfig& c, const std::string& v) {
         if (v == "standard") c.penalty = PressurePenalty::standard;
         else if (v == "alt_h3") c.penalty = PressurePenalty::alt_h3;
         else throw Error(ErrorCode::config, "unknown pressure_penalty '" + v + "'");
       }},
      {"delta", [](RunConfig& c, const std::string& v) { c.delta = to_double(v); }},
      {"output_dir", [](RunConfig& c, const std::string& v) { c.output_dir = v; }},
      {"seed",
       [](RunConfig& c, const std::string& v) {
         const long long s = to_integer(v);
         if (s < 0) throw Error(ErrorCode::config, "seed must be nonnegative");
         c.seed = static_cast<std::uint64_t>(s);
       }},
  };
  return table;
}

}  // namespace

void RunConfig::validate() const {
  auto need = [](bool ok, const std::string& key, const std::string& what) {
    if (!ok) throw Error(ErrorCode::config, "key '" + key + "': " + what);
  };
  need(mesh_n >= 1, "mesh_n", "must be >= 1");
  need(refinement >= 0, "refinement", "must be >= 0");
  need(re > 0.0, "re", "must be positive");
  need(dt > 0.0, "dt", "must be positive");
  need(t_end >= dt, "t_end", "must be >= dt");
  need(mu_graddiv >= 0.0, "mu_graddiv", "must be nonnegative");
  need(picard_tol > 0.0, "picard_tol", "must be positive");
  need(picard_max_iters >= 1, "picard_max_iters", "must be >= 1");
  need(snapshot_stride >= 1, "snapshot_stride", "must be >= 1");
  need(spinup_steps >= 0, "spinup_steps", "must be >= 0");
  need(tau_constant > 0.0, "tau_constant", "must be positive");
  for (int r : r_list) need(r >= 1, "r_list", "entries must be >= 1");
  for (double t : energy_tolerances) need(t > 0.0 && t < 1.0, "energy_tolerances", "entries must lie in (0,1)");
  need(estimator_c > 0.0, "estimator_c", "must be positive");
  need(stagnation_threshold > 0.0, "stagnation_threshold", "must be positive");
  need(eigen_gap >= 0.0, "eigen_gap", "must be nonnegative");
  need(delta > 0.0 && delta <= 1.0, "delta", "must lie in (0,1]");
}

RunConfig parse_config(std::istream& is, const std::string& source) {
  RunConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::config, where + "expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw Error(ErrorCode::config, where + "unknown key '" + key + "'");
    if (value.empty()) throw Error(ErrorCode::config, where + "key '" + key + "' has no value");
    try {
      it->second(c, value);
    } catch (const Error& e) {
      throw Error(ErrorCode::config, where + "key '" + key + "': " + e.what());
    }
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::config, "cannot open config " + path);
  return parse_config(is, path);
}

RunSetup make_setup(const RunConfig& c) {
  RunSetup s;
  switch (c.benchmark) {
    case Benchmark::cavity:
      s.mesh = std::make_shared<const TriMesh>(generate_structured_square(c.mesh_n));
      s.problem = cavity_problem(1.0);
      break;
    case Benchmark::cylinder:
      s.mesh = std::make_shared<const TriMesh>(generate_cylinder_channel(c.refinement));
      s.problem = cylinder_problem(1.0);
      break;
    case Benchmark::taylor_green:
      s.mesh = std::make_shared<const TriMesh>(generate_structured_square(c.mesh_n));
      s.problem = taylor_green_problem(c.nu());
      break;
  }
  s.space = std::make_shared<const TaylorHoodSpace>(s.mesh);
  s.fom.nu = c.nu();
  s.fom.mu_graddiv = c.mu_graddiv;
  s.fom.dt = c.dt;
  s.fom.t_end = c.t_end;
  s.fom.scheme = c.scheme;
  s.fom.picard_tol = c.picard_tol;
  s.fom.picard_max_iters = c.picard_max_iters;
  s.fom.snapshot_stride = c.snapshot_stride;
  s.fom.spinup_steps = c.spinup_steps;
  return s;
}

Metadata run_metadata(const RunConfig& c, const TriMesh& mesh) {
  Metadata m;
  m["benchmark"] = to_string(c.benchmark);
  m["mesh"] = mesh.descriptor;
  m["mesh_n"] = std::to_string(c.mesh_n);
  m["refinement"] = std::to_string(c.refinement);
  m["nu"] = format_double(c.nu());
  m["mu"] = format_double(c.mu_graddiv);
  m["dt"] = format_double(c.dt);
  m["scheme"] = to_string(c.scheme);
  m["stride"] = std::to_string(c.snapshot_stride);
  m["spinup_steps"] = std::to_string(c.spinup_steps);
  return m;
}

std::shared_ptr<const TaylorHoodSpace> space_from_metadata(const Metadata& m) {
  auto get = [&m](const char* k) {
    const auto it = m.find(k);
    if (it == m.end()) throw Error(ErrorCode::io, std::string("snapshot metadata lacks '") + k + "'");
    return it->second;
  };
  const Benchmark b = parse_benchmark(get("benchmark"));
  std::shared_ptr<const TriMesh> mesh;
  if (b == Benchmark::cylinder) {
    mesh = std::make_shared<const TriMesh>(generate_cylinder_channel(to_int(get("refinement"))));
  } else {
    mesh = std::make_shared<const TriMesh>(generate_structured_square(to_int(get("mesh_n"))));
  }
  if (mesh->descriptor != get("mesh")) throw Error(ErrorCode::io, "mesh descriptor mismatch: " + get("mesh"));
  return std::make_shared<const TaylorHoodSpace>(mesh);
}

SweepConfig sweep_config(const RunConfig& c) {
  SweepConfig s;
  s.r_list = c.r_list;
  s.nu = c.nu();
  s.mu_graddiv = c.mu_graddiv;
  s.fom_dt = c.dt;
  s.stride = c.snapshot_stride;
  s.scheme = c.scheme;
  s.tau_constant = c.tau_constant;
  s.tau_mode = c.tau_mode;
  s.centering = c.centering;
  s.estimator_c = c.estimator_c;
  s.stagnation_threshold = c.stagnation_threshold;
  s.eigen_gap = c.eigen_gap;
  s.penalty = c.penalty;
  if (c.benchmark == Benchmark::taylor_green) s.forcing = taylor_green_problem(c.nu()).forcing;
  return s;
}

}  // namespace smrom
