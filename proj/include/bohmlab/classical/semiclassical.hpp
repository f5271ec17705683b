#pragma once

#include <vector>

#include "bohmlab/kernels/execution.hpp"
#include "bohmlab/traj/trajectory.hpp"

namespace bohmlab {

enum class SemiclassicalState { GaussianPacket, PlaneWave };

/// Shared preparation for every hbar: R fixed, S = P.q (so S_class = S_q at t = 0).
///
/// psi_hbar = R exp(i P.q / hbar). The Gaussian R has position std `sigma`;
/// the plane wave has R constant and needs P / hbar to be a box harmonic.
struct SemiclassicalConfig {
  SemiclassicalState state = SemiclassicalState::GaussianPacket;
  SpatialGrid grid = SpatialGrid::line(1024, -64.0, 64.0);
  double sigma = 8.0;
  Point center{0.0, 0.0};
  Point momentum{1.0, 0.0};
  double mass = 1.0;
  std::vector<double> hbars{1.0, 0.5, 0.25};
  double T = 2.0;
  double dt = 1e-3;
  std::size_t snapshotStride = 10;
  double trajectoryDt = 0.01;
  // Bohmian and classical paths start here.
  std::vector<Point> starts;
};

struct SemiclassicalRun {
  double hbar = 0.0;
  std::vector<double> times;
  // max over starts of |Q_bohm(t) - Q_class(t)|
  std::vector<double> error;
  double maxError = 0.0;
  std::size_t halted = 0;
};

struct SemiclassicalResult {
  std::vector<SemiclassicalRun> runs;

  // maxError strictly decreasing in the order of `hbars` (given decreasing).
  bool strictlyDecreasing() const;
};

/// Propagates the family and compares Bohmian with classical trajectories from the same starts.
SemiclassicalResult semiclassicalCompare(const SemiclassicalConfig& cfg, Execution exec = Execution::Parallel);

}  // namespace bohmlab
