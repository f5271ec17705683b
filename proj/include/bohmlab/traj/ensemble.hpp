#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bohmlab/kernels/execution.hpp"
#include "bohmlab/traj/sampling.hpp"
#include "bohmlab/traj/trajectory.hpp"

namespace bohmlab {

/// A set of trajectories plus how their starts were drawn.
///
/// A freshly sampled ensemble holds one-point trajectories at the start time.
struct Ensemble {
  std::vector<Trajectory> trajectories;
  std::uint64_t seed = 0;
  SamplerKind sampler = SamplerKind::Explicit;

  std::size_t size() const { return trajectories.size(); }
  bool empty() const { return trajectories.empty(); }
  std::vector<Point> starts() const;
  double haltedFraction() const;
  // Positions of the trajectories that carry time t (halted ones drop out after their halt).
  std::vector<Point> positionsAt(double t) const;
};

// N starts drawn from |psi0|^2 at psi0.time(); draw i uses streamFor(seed, i).
Ensemble bornEnsemble(const WaveField& psi0, std::size_t count, std::uint64_t seed,
                      Execution exec = Execution::Parallel);
Ensemble uniformEnsemble(const SpatialGrid& grid, std::size_t count, std::uint64_t seed, double t0 = 0.0);
Ensemble explicitEnsemble(std::span<const Point> points, int dim, double t0 = 0.0);

/// Integrates every trajectory of ensemble0 from its start; halts stay per-trajectory data.
Ensemble propagateEnsemble(const GuidanceField& guidance, const Ensemble& ensemble0, const TrajectoryConfig& cfg,
                           Execution exec = Execution::Parallel);

}  // namespace bohmlab
