#pragma once

#include <vector>

#include "bohmlab/traj/trajectory.hpp"

namespace bohmlab {

inline constexpr double kPreparationTolerance = 1e-8;

struct DivergenceReport {
  std::vector<double> times;
  std::vector<double> separation;
  Trajectory a, b;
  // |grad S_A(Q0) - grad S_B(Q0)| as measured before integrating.
  double initialGradientGap = 0.0;
  double finalSeparation() const { return separation.empty() ? 0.0 : separation.back(); }
};

/// Runs the same start point through two guidance fields and records |Q_A(t) - Q_B(t)|.
///
/// Both fields must share mass and start time. Throws PreparationMismatchError
/// when the initial action gradients at q0 differ by kPreparationTolerance or more.
DivergenceReport divergenceExperiment(const GuidanceField& a, const GuidanceField& b, const Point& q0,
                                      const TrajectoryConfig& cfg);

}  // namespace bohmlab
