#pragma once

#include <vector>

#include "bohmlab/kernels/execution.hpp"
#include "bohmlab/schrodinger/potential.hpp"
#include "bohmlab/traj/trajectory.hpp"

namespace bohmlab {

/// A centre trajectory C plus 2k neighbours started at C(0) + j*delta,
/// j = -k..k, all integrated in the same guidance field (1D).
///
/// `amplitude0` holds R = |psi0| at every member's start: the only field
/// data the reconstruction may use besides the paths themselves.
struct Bundle {
  int k = 0;
  double delta = 0.0;
  // Ordered by offset; members[k] is C.
  std::vector<Trajectory> members;
  std::vector<double> amplitude0;

  const Trajectory& center() const { return members.at(static_cast<std::size_t>(k)); }
};

/// Integrates the 2k + 1 paths (OpenMP across members) and samples |psi0| at their starts.
Bundle makeBundle(const GuidanceField& guidance, double q0, int k, double delta, const TrajectoryConfig& cfg,
                  Execution exec = Execution::Parallel);

struct Reconstruction {
  std::vector<double> times;
  std::vector<double> S;
  std::vector<double> R;
  // Estimated along C: velocity, div v, quantum potential.
  std::vector<double> velocity;
  std::vector<double> divergence;
  std::vector<double> quantumPotential;
};

/// (S, R) along C from the along-C relations
///   dS/dt = m v^2/2 - V - U,   (1/R) dR/dt = -(1/2) div v
/// with transverse derivatives from second-order differences across the bundle.
///
/// Throws InsufficientBundleError for k < 2 (the one-trajectory case) and
/// BundleCrossingError if neighbour ordering breaks at any recorded time.
Reconstruction reconstructAlongC(const Bundle& bundle, const Potential& potential, double mass, double hbar,
                                 double S0);

/// Classical counterpart: S(t) = S(0) + integral of (m v^2/2 - V) dt along one path.
std::vector<double> classicalReconstructAlongC(const Trajectory& trajectory, const Potential& potential, double mass,
                                               double S0);

/// Solver values along a path: S (phase of the polar field, made continuous in time) and R.
struct AlongC {
  std::vector<double> times;
  std::vector<double> S;
  std::vector<double> R;
};
AlongC solverAlongC(const GuidanceField& guidance, const Trajectory& path);

/// Relative L2 error over the window divided by the oracle's range (its max |value| when the range vanishes).
double relativeWindowError(const std::vector<double>& estimate, const std::vector<double>& oracle);

struct ReconstructionScenario {
  const GuidanceField* guidance = nullptr;
  Potential potential = Potential::free();
  double q0 = 0.0;
  TrajectoryConfig trajectory;
};

struct ConvergenceRow {
  double delta = 0.0;
  int k = 0;
  double errS = 0.0;
  double errR = 0.0;
  // Least-squares slope of log errS against log delta over the whole table.
  double slope = 0.0;
};

/// One reconstruction per delta (strictly decreasing, each >= 2 dx) against the solver oracle.
std::vector<ConvergenceRow> bundleConvergence(const ReconstructionScenario& scenario, int k,
                                              const std::vector<double>& deltas,
                                              Execution exec = Execution::Parallel);

}  // namespace bohmlab
