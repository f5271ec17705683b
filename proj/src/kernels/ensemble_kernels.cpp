#include "bohmlab/kernels/ensemble_kernels.hpp"

namespace bohmlab::kernels {

namespace serial {

std::vector<Point> bornDraws(const BornSampler& sampler, std::size_t count, std::uint64_t seed) {
  std::vector<Point> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto rng = streamFor(seed, i);
    out[i] = sampler.draw(rng);
  }
  return out;
}

std::vector<Trajectory> integrateAll(const GuidanceField& guidance, std::span<const Point> starts,
                                     const TrajectoryConfig& cfg) {
  std::vector<Trajectory> out;
  out.reserve(starts.size());
  for (const auto& p : starts) out.push_back(integrateTrajectory(guidance, p, cfg));
  return out;
}

}  // namespace serial

namespace omp {

std::vector<Point> bornDraws(const BornSampler& sampler, std::size_t count, std::uint64_t seed) {
  std::vector<Point> out(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    auto rng = streamFor(seed, static_cast<std::uint64_t>(i));
    out[i] = sampler.draw(rng);
  }
  return out;
}

std::vector<Trajectory> integrateAll(const GuidanceField& guidance, std::span<const Point> starts,
                                     const TrajectoryConfig& cfg) {
  // Validate once up front so no exception escapes the parallel region.
  validateTrajectoryConfig(guidance, cfg);
  std::vector<Trajectory> out(starts.size());
  const auto n = static_cast<std::ptrdiff_t>(starts.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = integrateTrajectory(guidance, starts[i], cfg);
  return out;
}

}  // namespace omp

std::vector<Point> bornDraws(const BornSampler& sampler, std::size_t count, std::uint64_t seed, Execution exec) {
  return exec == Execution::Parallel ? omp::bornDraws(sampler, count, seed) : serial::bornDraws(sampler, count, seed);
}

std::vector<Trajectory> integrateAll(const GuidanceField& guidance, std::span<const Point> starts,
                                     const TrajectoryConfig& cfg, Execution exec) {
  return exec == Execution::Parallel ? omp::integrateAll(guidance, starts, cfg)
                                     : serial::integrateAll(guidance, starts, cfg);
}

}  // namespace bohmlab::kernels
