#pragma once

#include <array>
#include <span>
#include <vector>

#include "bohmlab/field/fields.hpp"
#include "bohmlab/field/polar.hpp"
#include "bohmlab/kernels/execution.hpp"

namespace bohmlab {

/// Grid velocity v = (hbar/m) Im(grad psi / psi) of one snapshot, plus |psi|^2 for node tests.
struct VelocityFrame {
  std::array<std::vector<double>, kMaxDim> velocity;
  std::vector<double> density;
  // (nodeEps * max|psi|)^2
  double nodeThreshold2 = 0.0;
};

VelocityFrame computeVelocityFrame(const WaveField& psi, double mass, double hbar, double nodeEps);

/// Space-time interpolated guiding field built from psi snapshots.
///
/// Space: periodic cubic (tensor product in 2D). Time: cubic Hermite between
/// snapshots with central-difference slopes. This interpolation, not the
/// RK4 stepper, sets the trajectory accuracy. A single snapshot is treated
/// as a stationary field valid at all times.
class GuidanceField {
 public:
  GuidanceField(std::vector<WaveField> snapshots, double mass, double hbar, double nodeEps = kDefaultNodeEps,
                Execution exec = Execution::Parallel);

  struct Sample {
    Point velocity{0.0, 0.0};
    bool nearNode = false;
  };

  Sample sample(const Point& q, double t) const;

  const SpatialGrid& grid() const { return snapshots_.front().grid(); }
  int dim() const { return grid().dim(); }
  double mass() const { return mass_; }
  double hbar() const { return hbar_; }
  double nodeEps() const { return node_eps_; }
  bool stationary() const { return times_.size() == 1; }
  double startTime() const { return times_.front(); }
  double endTime() const { return times_.back(); }
  std::span<const double> times() const { return times_; }
  // Smallest gap between consecutive snapshots (infinity when stationary).
  double minSpacing() const;
  std::span<const WaveField> snapshots() const { return snapshots_; }

 private:
  Sample sampleFrame(std::size_t frame, const Point& q) const;

  std::vector<WaveField> snapshots_;
  std::vector<VelocityFrame> frames_;
  std::vector<double> times_;
  double mass_, hbar_, node_eps_;
};

/// Bohmian velocity (hbar/m) Im(grad psi / psi) at an off-grid point.
///
/// Throws NodeProximityError if the interpolated |psi| is below nodeEps * max|psi|.
Point velocityAt(const WaveField& psi, const Point& q, double mass, double hbar,
                 double nodeEps = kDefaultNodeEps);

/// Same velocity from the polar form, grad S / m (phase gradient cubic-interpolated).
Point velocityAt(const PolarField& polar, const Point& q, double mass);

}  // namespace bohmlab
