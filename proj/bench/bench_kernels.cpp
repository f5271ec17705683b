// Serial reference loops against the OpenMP kernels on the same inputs.
// Run: ./bench_kernels --benchmark_counters_tabular=true

#include <benchmark/benchmark.h>

#include <cmath>

#include "bohmlab/classical/action.hpp"
#include "bohmlab/classical/characteristics.hpp"
#include "bohmlab/kernels/characteristic_kernels.hpp"
#include "bohmlab/kernels/ensemble_kernels.hpp"
#include "bohmlab/kernels/guidance_kernels.hpp"
#include "bohmlab/schrodinger/propagator.hpp"
#include "bohmlab/schrodinger/states.hpp"

using namespace bohmlab;

namespace {

const std::vector<WaveField>& snapshots() {
  static const auto s = [] {
    PropagatorConfig c;
    c.dt = 1e-3;
    c.steps = 1000;
    c.snapshotStride = 10;
    const auto g = SpatialGrid::line(1024, -32.0, 32.0);
    return propagate(gaussianPacket(g, {0.0, 0.0}, 1.0), Potential::free(), c).snapshots;
  }();
  return s;
}

const GuidanceField& guidance() {
  static const GuidanceField g(snapshots(), 1.0, 1.0);
  return g;
}

std::vector<Point> starts(std::size_t n) {
  std::vector<Point> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {-3.0 + 6.0 * static_cast<double>(i) / static_cast<double>(n), 0.0};
  return out;
}

Execution mode(const benchmark::State& state) { return state.range(1) == 0 ? Execution::Serial : Execution::Parallel; }

void label(benchmark::State& state) { state.SetLabel(state.range(1) == 0 ? "serial" : "omp"); }

void BM_BornDraws(benchmark::State& state) {
  const BornSampler sampler(snapshots().front());
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::bornDraws(sampler, n, 42, mode(state)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
  label(state);
}

void BM_IntegrateAll(benchmark::State& state) {
  const auto x0 = starts(static_cast<std::size_t>(state.range(0)));
  TrajectoryConfig cfg;
  cfg.dt = 0.01;
  for (auto _ : state) benchmark::DoNotOptimize(kernels::integrateAll(guidance(), x0, cfg, mode(state)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
  label(state);
}

void BM_VelocityFrames(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::velocityFrames(snapshots(), 1.0, 1.0, kDefaultNodeEps, mode(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(snapshots().size()));
  label(state);
}

void BM_SolveFeet(benchmark::State& state) {
  const auto g = SpatialGrid::line(static_cast<std::size_t>(state.range(0)), -16.0, 16.0);
  const auto action = ActionField::circular({0.0, 0.0}, 1.0);
  const auto pot = Potential::harmonic(1.0, 1.0);
  CharacteristicSetup setup;
  setup.action = &action;
  setup.potential = &pot;
  setup.t0 = 0.1;
  setup.dt = 0.01;
  std::vector<Foot> feet(g.size());
  for (auto _ : state) {
    for (std::size_t i = 0; i < feet.size(); ++i) feet[i].q0 = g.node(i);
    kernels::solveFeet(setup, g, 0.3, feet, mode(state));
    benchmark::DoNotOptimize(feet.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
  label(state);
}

}  // namespace

BENCHMARK(BM_BornDraws)->ArgsProduct({{10000, 100000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IntegrateAll)->ArgsProduct({{1000, 10000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VelocityFrames)->ArgsProduct({{0}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveFeet)->ArgsProduct({{1024, 4096}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
