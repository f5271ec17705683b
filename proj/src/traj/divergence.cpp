#include "bohmlab/traj/divergence.hpp"

#include <cmath>
#include <stdexcept>

#include "bohmlab/errors.hpp"

namespace bohmlab {

DivergenceReport divergenceExperiment(const GuidanceField& a, const GuidanceField& b, const Point& q0,
                                      const TrajectoryConfig& cfg) {
  if (a.grid() != b.grid()) throw std::invalid_argument("preparations must share a grid");
  if (a.mass() != b.mass() || a.hbar() != b.hbar()) throw std::invalid_argument("preparations must share mass and hbar");
  if (a.startTime() != b.startTime()) throw std::invalid_argument("preparations must share the start time");

  const auto& psi_a = a.snapshots().front();
  const auto& psi_b = b.snapshots().front();
  const Point va = velocityAt(psi_a, q0, a.mass(), a.hbar(), a.nodeEps());
  const Point vb = velocityAt(psi_b, q0, b.mass(), b.hbar(), b.nodeEps());
  double gap2 = 0.0;
  for (int k = 0; k < a.dim(); ++k) gap2 += (a.mass() * (va[k] - vb[k])) * (a.mass() * (va[k] - vb[k]));

  DivergenceReport r;
  r.initialGradientGap = std::sqrt(gap2);
  if (!(r.initialGradientGap < kPreparationTolerance))
    throw PreparationMismatchError("initial action gradients differ by " + std::to_string(r.initialGradientGap));

  r.a = integrateTrajectory(a, q0, cfg);
  r.b = integrateTrajectory(b, q0, cfg);
  const std::size_t n = std::min(r.a.times.size(), r.b.times.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (r.a.times[i] != r.b.times[i]) break;
    double d2 = 0.0;
    for (int k = 0; k < a.dim(); ++k) d2 += (r.a.positions[i][k] - r.b.positions[i][k]) * (r.a.positions[i][k] - r.b.positions[i][k]);
    r.times.push_back(r.a.times[i]);
    r.separation.push_back(std::sqrt(d2));
  }
  return r;
}

}  // namespace bohmlab
