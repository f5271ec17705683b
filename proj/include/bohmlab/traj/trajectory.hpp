#pragma once

#include <limits>
#include <vector>

#include "bohmlab/traj/guidance.hpp"

namespace bohmlab {

enum class TrajectoryStatus { Completed, HaltedAtNode };

/// A configuration path Q(t).
///
/// Positions are the continuous lift of the motion (not folded back into the
/// periodic box). A halted trajectory ends at the last position reached
/// before the node and records the halt time.
struct Trajectory {
  int dim = 1;
  std::vector<double> times;
  std::vector<Point> positions;
  TrajectoryStatus status = TrajectoryStatus::Completed;
  double haltTime = std::numeric_limits<double>::quiet_NaN();

  bool halted() const { return status == TrajectoryStatus::HaltedAtNode; }
  const Point& start() const { return positions.front(); }
  const Point& end() const { return positions.back(); }
};

struct TrajectoryConfig {
  // RK4 step upper bound; each interval between record times is split evenly.
  double dt = 0.0;
  // Times at which positions are stored. Empty: the guidance snapshot times.
  std::vector<double> recordTimes;
  // Also store every RK4 substep.
  bool recordSubsteps = false;
};

/// RK4 integration of dQ/dt = v(Q, t) through the guidance field.
///
/// On a node hit the step is retried at h/2 and h/4; if that still fails
/// the trajectory halts and the status records it (no exception).
Trajectory integrateTrajectory(const GuidanceField& guidance, const Point& x0, const TrajectoryConfig& cfg);

// Checks dt against the snapshot spacing and the record window; throws std::invalid_argument.
void validateTrajectoryConfig(const GuidanceField& guidance, const TrajectoryConfig& cfg);

// Record times actually used for cfg on this guidance.
std::vector<double> resolvedRecordTimes(const GuidanceField& guidance, const TrajectoryConfig& cfg);

}  // namespace bohmlab
