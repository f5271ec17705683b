#pragma once

#include <span>
#include <vector>

#include "bohmlab/kernels/execution.hpp"
#include "bohmlab/traj/guidance.hpp"

namespace bohmlab::kernels {

// One VelocityFrame per snapshot.
namespace serial {
std::vector<VelocityFrame> velocityFrames(std::span<const WaveField> snapshots, double mass, double hbar,
                                          double nodeEps);
}
namespace omp {
std::vector<VelocityFrame> velocityFrames(std::span<const WaveField> snapshots, double mass, double hbar,
                                          double nodeEps);
}

std::vector<VelocityFrame> velocityFrames(std::span<const WaveField> snapshots, double mass, double hbar,
                                          double nodeEps, Execution exec);

}  // namespace bohmlab::kernels
