#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bohmlab/kernels/execution.hpp"
#include "bohmlab/traj/sampling.hpp"
#include "bohmlab/traj/trajectory.hpp"

namespace bohmlab::kernels {

// Draw i of `count` uses its own stream, so both variants give identical points.
namespace serial {
std::vector<Point> bornDraws(const BornSampler& sampler, std::size_t count, std::uint64_t seed);
std::vector<Trajectory> integrateAll(const GuidanceField& guidance, std::span<const Point> starts,
                                     const TrajectoryConfig& cfg);
}  // namespace serial

namespace omp {
std::vector<Point> bornDraws(const BornSampler& sampler, std::size_t count, std::uint64_t seed);
std::vector<Trajectory> integrateAll(const GuidanceField& guidance, std::span<const Point> starts,
                                     const TrajectoryConfig& cfg);
}  // namespace omp

std::vector<Point> bornDraws(const BornSampler& sampler, std::size_t count, std::uint64_t seed, Execution exec);
std::vector<Trajectory> integrateAll(const GuidanceField& guidance, std::span<const Point> starts,
                                     const TrajectoryConfig& cfg, Execution exec);

}  // namespace bohmlab::kernels
