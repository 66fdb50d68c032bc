// Serial reference vs OpenMP backend on the data-parallel kernels.

#include "smrom/assembly.hpp"
#include "smrom/pod.hpp"
#include "smrom/rom.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace smrom;

namespace {

std::shared_ptr<const TaylorHoodSpace> square(int n) {
  return std::make_shared<const TaylorHoodSpace>(std::make_shared<const TriMesh>(generate_structured_square(n)));
}

Vec random_vec(std::mt19937_64& rng, Eigen::Index n) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

Exec exec_of(const benchmark::State& st) { return st.range(1) == 0 ? Exec::serial : Exec::parallel; }

void label(benchmark::State& st) { st.SetLabel(st.range(1) == 0 ? "serial" : "openmp"); }

void BM_StiffnessAssembly(benchmark::State& st) {
  const auto s = square(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(assemble_stiffness_velocity(*s, exec_of(st)));
  label(st);
}

void BM_ConvectionAssembly(benchmark::State& st) {
  const auto s = square(static_cast<int>(st.range(0)));
  std::mt19937_64 rng(1);
  const Vec u = random_vec(rng, s->n_vel_dofs());
  for (auto _ : st) benchmark::DoNotOptimize(assemble_convection(*s, u, exec_of(st)));
  label(st);
}

void BM_LoadVector(benchmark::State& st) {
  const auto s = square(static_cast<int>(st.range(0)));
  const VelocityFunction f = [](const Vec2& x, double t) { return Vec2(std::sin(x.x() + t), std::cos(x.y())); };
  for (auto _ : st) benchmark::DoNotOptimize(assemble_load(*s, f, 0.5, exec_of(st)));
  label(st);
}

void BM_PODSnapshots(benchmark::State& st) {
  const auto s = square(static_cast<int>(st.range(0)));
  auto w = std::make_shared<const SparseMatrix>(assemble_mass_velocity(*s));
  std::mt19937_64 rng(2);
  Mat snaps(s->n_vel_dofs(), 100);
  for (int j = 0; j < 100; ++j) snaps.col(j) = random_vec(rng, snaps.rows());
  for (auto _ : st) benchmark::DoNotOptimize(compute_pod(snaps, w, 1e-2, -1, exec_of(st)));
  label(st);
}

void BM_ReducedOperators(benchmark::State& st) {
  const auto s = square(static_cast<int>(st.range(0)));
  auto mv = std::make_shared<const SparseMatrix>(assemble_mass_velocity(*s));
  auto mp = std::make_shared<const SparseMatrix>(assemble_mass_pressure(*s));
  std::mt19937_64 rng(3);
  const int r = 12;
  Mat us(s->n_vel_dofs(), r), ps(s->n_pres_dofs(), r);
  for (int j = 0; j < r; ++j) {
    us.col(j) = random_vec(rng, us.rows());
    ps.col(j) = random_vec(rng, ps.rows());
  }
  PODBasis vb = compute_pod(us, mv, 1.0);
  vb.offset = random_vec(rng, us.rows());
  const PODBasis pb = compute_pod(ps, mp, 1.0);
  const TauCoefficients tau = make_tau(s->mesh(), 1.0);
  for (auto _ : st) {
    benchmark::DoNotOptimize(build_reduced_operators(vb, pb, *s, ROMConfig{}, tau, vb.offset, exec_of(st)));
  }
  label(st);
}

}  // namespace

BENCHMARK(BM_StiffnessAssembly)->ArgsProduct({{32, 64}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvectionAssembly)->ArgsProduct({{32, 64}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LoadVector)->ArgsProduct({{32, 64}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PODSnapshots)->ArgsProduct({{32}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReducedOperators)->ArgsProduct({{32}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
