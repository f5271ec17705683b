#include "bohmlab/traj/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bohmlab/kernels/ensemble_kernels.hpp"

namespace bohmlab {

namespace {

Ensemble fromPoints(std::span<const Point> points, int dim, double t0, std::uint64_t seed, SamplerKind kind) {
  Ensemble e;
  e.seed = seed;
  e.sampler = kind;
  e.trajectories.reserve(points.size());
  for (const auto& p : points) {
    Trajectory t;
    t.dim = dim;
    t.times = {t0};
    t.positions = {p};
    e.trajectories.push_back(std::move(t));
  }
  return e;
}

}  // namespace

std::vector<Point> Ensemble::starts() const {
  std::vector<Point> out;
  out.reserve(trajectories.size());
  for (const auto& t : trajectories) out.push_back(t.start());
  return out;
}

double Ensemble::haltedFraction() const {
  if (trajectories.empty()) return 0.0;
  const auto halted = std::count_if(trajectories.begin(), trajectories.end(), [](const auto& t) { return t.halted(); });
  return static_cast<double>(halted) / static_cast<double>(trajectories.size());
}

std::vector<Point> Ensemble::positionsAt(double t) const {
  std::vector<Point> out;
  out.reserve(trajectories.size());
  for (const auto& tr : trajectories) {
    const double tol = 1e-9 * std::max(1.0, std::abs(t));
    auto it = std::lower_bound(tr.times.begin(), tr.times.end(), t - tol);
    if (it == tr.times.end() || std::abs(*it - t) > tol) continue;
    out.push_back(tr.positions[static_cast<std::size_t>(it - tr.times.begin())]);
  }
  return out;
}

Ensemble bornEnsemble(const WaveField& psi0, std::size_t count, std::uint64_t seed, Execution exec) {
  if (count == 0) return fromPoints({}, psi0.grid().dim(), psi0.time(), seed, SamplerKind::Born);
  const BornSampler sampler(psi0);
  const auto pts = kernels::bornDraws(sampler, count, seed, exec);
  return fromPoints(pts, psi0.grid().dim(), psi0.time(), seed, SamplerKind::Born);
}

Ensemble uniformEnsemble(const SpatialGrid& grid, std::size_t count, std::uint64_t seed, double t0) {
  std::vector<Point> pts(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto rng = streamFor(seed, i);
    pts[i] = sampleUniform(grid, rng);
  }
  return fromPoints(pts, grid.dim(), t0, seed, SamplerKind::Uniform);
}

Ensemble explicitEnsemble(std::span<const Point> points, int dim, double t0) {
  for (const auto& p : points)
    for (int a = 0; a < dim; ++a)
      if (!std::isfinite(p[a])) throw std::invalid_argument("explicit start points must be finite");
  return fromPoints(points, dim, t0, 0, SamplerKind::Explicit);
}

Ensemble propagateEnsemble(const GuidanceField& guidance, const Ensemble& ensemble0, const TrajectoryConfig& cfg,
                           Execution exec) {
  Ensemble out;
  out.seed = ensemble0.seed;
  out.sampler = ensemble0.sampler;
  if (ensemble0.empty()) return out;
  for (const auto& t : ensemble0.trajectories)
    if (t.dim != guidance.dim()) throw std::invalid_argument("ensemble dimension does not match the guidance grid");
  const auto starts = ensemble0.starts();
  out.trajectories = kernels::integrateAll(guidance, starts, cfg, exec);
  return out;
}

}  // namespace bohmlab
