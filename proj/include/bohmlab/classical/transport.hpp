#pragma once

#include <optional>
#include <vector>

#include "bohmlab/classical/action.hpp"
#include "bohmlab/classical/characteristics.hpp"
#include "bohmlab/kernels/execution.hpp"

namespace bohmlab {

/// Classical probability density R_c^2 on a grid at one time.
struct ClassicalDensity {
  RealField density;
  double time = 0.0;

  double total() const { return density.integral(); }
};

struct TransportConfig {
  double endTime = 0.0;
  // RK4 step bound along characteristics.
  double dt = 0.0;
  // Record every `recordStride` steps of the (evenly split) window; the end is always recorded.
  std::size_t recordStride = 1;
  double causticThreshold = 1e-8;
  Potential potential = Potential::free();
  double mass = 1.0;
  Execution execution = Execution::Parallel;
};

struct TransportResult {
  std::vector<double> times;
  std::vector<ClassicalDensity> densities;
  // S on the grid at each recorded time.
  std::vector<RealField> actions;
  // grad S / m on the grid, one vector of components per recorded time.
  std::vector<std::vector<RealField>> velocities;
  // Smallest det J met over the feet of every recorded slice.
  double minJacobian = 1.0;
  bool caustic = false;
  double causticTime = 0.0;
  // Feet whose Newton solve did not converge; their slices are still stored.
  std::size_t unconvergedFeet = 0;
  double mass = 1.0;

  // Transported S as a grid action over the recorded window.
  ActionField action() const;
  double maxMassDrift() const;
};

/// Carries (R_c^2, S) from density0.time to cfg.endTime along the
/// characteristics of the classical HJ flow started from `action`.
///
/// Each recorded grid node is traced back to its foot q0 (Newton on the
/// characteristic map); then rho(q, t) = rho0(q0) / det J and
/// S(q, t) = S(q0, t0) + integral of L dt. rho0 is interpolated
/// periodically, S never is. A characteristic whose det J falls below
/// the threshold stops the transport: the result keeps every slice before
/// the caustic and sets `caustic` and `causticTime`.
TransportResult transportClassical(const ClassicalDensity& density0, const ActionField& action,
                                   const TransportConfig& cfg);

/// max over nodes of |d rho/dt + div(rho v)| at each interior recorded slice
/// (central difference in time, spectral divergence). Entry i belongs to slice i + 1.
std::vector<double> classicalContinuityResidual(const TransportResult& result);

}  // namespace bohmlab
