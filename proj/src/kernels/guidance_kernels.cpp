#include "bohmlab/kernels/guidance_kernels.hpp"

namespace bohmlab::kernels {

namespace serial {

std::vector<VelocityFrame> velocityFrames(std::span<const WaveField> snapshots, double mass, double hbar,
                                          double nodeEps) {
  std::vector<VelocityFrame> frames;
  frames.reserve(snapshots.size());
  for (const auto& psi : snapshots) frames.push_back(computeVelocityFrame(psi, mass, hbar, nodeEps));
  return frames;
}

}  // namespace serial

namespace omp {

std::vector<VelocityFrame> velocityFrames(std::span<const WaveField> snapshots, double mass, double hbar,
                                          double nodeEps) {
  std::vector<VelocityFrame> frames(snapshots.size());
  const auto count = static_cast<std::ptrdiff_t>(snapshots.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < count; ++i) frames[i] = computeVelocityFrame(snapshots[i], mass, hbar, nodeEps);
  return frames;
}

}  // namespace omp

std::vector<VelocityFrame> velocityFrames(std::span<const WaveField> snapshots, double mass, double hbar,
                                          double nodeEps, Execution exec) {
  return exec == Execution::Parallel ? omp::velocityFrames(snapshots, mass, hbar, nodeEps)
                                     : serial::velocityFrames(snapshots, mass, hbar, nodeEps);
}

}  // namespace bohmlab::kernels
