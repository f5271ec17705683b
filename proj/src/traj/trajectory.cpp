#include "bohmlab/traj/trajectory.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace bohmlab {

namespace {

Point axpy(const Point& x, double h, const Point& v) { return {x[0] + h * v[0], x[1] + h * v[1]}; }

// One classical RK4 step; empty if any stage lands near a node.
std::optional<Point> rk4Step(const GuidanceField& g, const Point& x, double t, double h) {
  const auto s1 = g.sample(x, t);
  if (s1.nearNode) return std::nullopt;
  const auto s2 = g.sample(axpy(x, 0.5 * h, s1.velocity), t + 0.5 * h);
  if (s2.nearNode) return std::nullopt;
  const auto s3 = g.sample(axpy(x, 0.5 * h, s2.velocity), t + 0.5 * h);
  if (s3.nearNode) return std::nullopt;
  const auto s4 = g.sample(axpy(x, h, s3.velocity), t + h);
  if (s4.nearNode) return std::nullopt;
  Point out = x;
  for (int a = 0; a < g.dim(); ++a)
    out[a] += h / 6.0 * (s1.velocity[a] + 2.0 * s2.velocity[a] + 2.0 * s3.velocity[a] + s4.velocity[a]);
  return out;
}

// Covers [t, t+h] in `pieces` equal steps.
std::optional<Point> advance(const GuidanceField& g, Point x, double t, double h, int pieces) {
  const double sub = h / pieces;
  for (int k = 0; k < pieces; ++k) {
    auto next = rk4Step(g, x, t + k * sub, sub);
    if (!next) return std::nullopt;
    x = *next;
  }
  return x;
}

}  // namespace

std::vector<double> resolvedRecordTimes(const GuidanceField& guidance, const TrajectoryConfig& cfg) {
  if (!cfg.recordTimes.empty()) return cfg.recordTimes;
  return {guidance.times().begin(), guidance.times().end()};
}

void validateTrajectoryConfig(const GuidanceField& guidance, const TrajectoryConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("trajectory dt must be positive");
  if (!guidance.stationary() && cfg.dt > guidance.minSpacing() * (1.0 + 1e-12))
    throw std::invalid_argument("trajectory dt must not exceed the snapshot spacing");
  const auto times = resolvedRecordTimes(guidance, cfg);
  if (times.empty()) throw std::invalid_argument("no record times");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw std::invalid_argument("record times must increase strictly");
  if (!guidance.stationary() && (times.front() < guidance.startTime() || times.back() > guidance.endTime()))
    throw std::invalid_argument("record times leave the snapshot window");
}

Trajectory integrateTrajectory(const GuidanceField& guidance, const Point& x0, const TrajectoryConfig& cfg) {
  validateTrajectoryConfig(guidance, cfg);
  for (int a = 0; a < guidance.dim(); ++a)
    if (!std::isfinite(x0[a])) throw std::invalid_argument("start point must be finite");

  const auto times = resolvedRecordTimes(guidance, cfg);
  Trajectory traj;
  traj.dim = guidance.dim();
  traj.times.push_back(times.front());
  traj.positions.push_back(x0);

  Point x = x0;
  for (std::size_t seg = 0; seg + 1 < times.size(); ++seg) {
    const double t_a = times[seg], t_b = times[seg + 1];
    const auto steps = static_cast<std::size_t>(std::ceil((t_b - t_a) / cfg.dt - 1e-9));
    const double h = (t_b - t_a) / static_cast<double>(std::max<std::size_t>(steps, 1));
    for (std::size_t k = 0; k < std::max<std::size_t>(steps, 1); ++k) {
      const double t = t_a + static_cast<double>(k) * h;
      std::optional<Point> next;
      for (int pieces : {1, 2, 4}) {
        next = advance(guidance, x, t, h, pieces);
        if (next) break;
      }
      if (!next) {
        traj.status = TrajectoryStatus::HaltedAtNode;
        traj.haltTime = t;
        if (traj.times.back() != t) {
          traj.times.push_back(t);
          traj.positions.push_back(x);
        }
        return traj;
      }
      x = *next;
      const bool last = k + 1 == std::max<std::size_t>(steps, 1);
      if (cfg.recordSubsteps && !last) {
        traj.times.push_back(t + h);
        traj.positions.push_back(x);
      }
    }
    traj.times.push_back(t_b);
    traj.positions.push_back(x);
  }
  return traj;
}

}  // namespace bohmlab
