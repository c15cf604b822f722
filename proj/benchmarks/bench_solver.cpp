// Solve-time scaling: array size sweep at fixed N, snapshot sweep at fixed
// P, and the constrained variants for contrast.

#include <benchmark/benchmark.h>

#include "cmbeam/array_sim.hpp"
#include "cmbeam/baselines.hpp"
#include "cmbeam/constraints.hpp"
#include "cmbeam/solver.hpp"

namespace {

using namespace cmbeam;

ScenarioConfig scenario(std::size_t elements, std::size_t num_snapshots) {
  ScenarioConfig cfg;
  cfg.geometry = ArrayGeometry::ula(elements);
  cfg.sources.push_back({20.0, SourceKind::ConstantModulusQpsk, 1.0});
  cfg.sources.push_back({-45.0, SourceKind::GaussianInterferer, 1.0});
  cfg.sources.push_back({-15.0, SourceKind::GaussianInterferer, 1.0});
  cfg.noise_variance = 0.1;
  cfg.num_snapshots = num_snapshots;
  cfg.seed = 1;
  return cfg;
}

void BM_SolveVsElements(benchmark::State& state) {
  const auto p = static_cast<std::size_t>(state.range(0));
  const SnapshotSet set = generate_snapshots(scenario(p, 200));
  std::size_t iterations = 0;
  for (auto _ : state) {
    const LiftedSolution sol = solve_cma(set.snapshots);
    iterations = sol.iterations;
    benchmark::DoNotOptimize(sol.objective);
  }
  state.counters["pg_steps"] = static_cast<double>(iterations);
}
BENCHMARK(BM_SolveVsElements)
    ->Arg(8)
    ->Arg(16)
    ->Arg(24)
    ->Arg(32)
    ->Unit(benchmark::kMillisecond);

void BM_SolveVsSnapshots(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SnapshotSet set = generate_snapshots(scenario(16, n));
  for (auto _ : state) {
    const LiftedSolution sol = solve_cma(set.snapshots);
    benchmark::DoNotOptimize(sol.objective);
  }
}
BENCHMARK(BM_SolveVsSnapshots)
    ->Arg(50)
    ->Arg(100)
    ->Arg(200)
    ->Arg(400)
    ->Unit(benchmark::kMillisecond);

void BM_SolveWithNulls(benchmark::State& state) {
  const ScenarioConfig cfg = scenario(16, 200);
  const SnapshotSet set = generate_snapshots(cfg);
  const auto lifted =
      lift_constraints({null_direction(cfg.geometry, -30.0),
                        null_direction(cfg.geometry, -60.0)});
  for (auto _ : state) {
    const LiftedSolution sol = solve_lccma(set.snapshots, lifted);
    benchmark::DoNotOptimize(sol.objective);
  }
}
BENCHMARK(BM_SolveWithNulls)->Unit(benchmark::kMillisecond);

void BM_SolveWithSubspace(benchmark::State& state) {
  const SnapshotSet set = generate_snapshots(scenario(32, 30));
  const auto lifted = lift_constraints(
      signal_subspace_constraints(sample_covariance(set.snapshots), 3));
  for (auto _ : state) {
    const LiftedSolution sol = solve_lccma(set.snapshots, lifted);
    benchmark::DoNotOptimize(sol.objective);
  }
}
BENCHMARK(BM_SolveWithSubspace)->Unit(benchmark::kMillisecond);

void BM_RlsCma(benchmark::State& state) {
  const SnapshotSet set = generate_snapshots(scenario(16, 200));
  for (auto _ : state) {
    const AdaptiveTrajectory traj = rls_cma(set.snapshots);
    benchmark::DoNotOptimize(traj.final);
  }
}
BENCHMARK(BM_RlsCma)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
