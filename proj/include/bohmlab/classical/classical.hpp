#pragma once

#include <optional>

#include "bohmlab/classical/action.hpp"
#include "bohmlab/traj/divergence.hpp"
#include "bohmlab/traj/trajectory.hpp"

namespace bohmlab {

// |grad S(Q0, t0) - P0| allowed when both are given.
inline constexpr double kMomentumMatchTolerance = 1e-10;

/// Initial data of a classical particle: position plus momentum, the latter
/// either given directly or read off an action's gradient.
struct ClassicalState {
  int dim = 1;
  Point Q0{0.0, 0.0};
  double t0 = 0.0;
  std::optional<Point> P0;
  std::optional<ActionField> action;
};

/// RK4 on the classical guiding equation dQ/dt = grad S(Q, t) / m.
///
/// When the action's gradient is undefined at (Q0, t0) and P0 is given,
/// Hamilton's equations are integrated instead. Positions are stored at
/// every step; the step is (T - t0) split evenly into pieces <= dt.
/// Throws UndefinedGradientError (no usable momentum) or
/// PreparationMismatchError (P0 disagrees with grad S).
Trajectory classicalTrajectory(const ClassicalState& state, double T, double dt, double mass = 1.0,
                               const Potential& potential = Potential::free());

// Momentum the state starts with (P0, or grad S at the start).
Point initialMomentum(const ClassicalState& state);

struct HollandReport {
  Trajectory planeWave;  // under S1
  Trajectory circular;   // under S2, emitted from Q0 at t = 0
  double maxDeviation = 0.0;
  // Largest distance of either path from the line Q0 + P t / m.
  double maxLineDeviation = 0.0;
  ResidualSample residualPlaneWave;
  ResidualSample residualCircular;
};

/// Same initial condition on the line Q(t) = Q0 + P t / m, integrated
/// under the plane-wave and the circular action from t0 > 0 to T.
HollandReport hollandNonuniqueness(double P, double Q0, double mass, double t0, double T, double dt,
                                   std::size_t residualPoints = 1000, std::uint64_t seed = 1);

/// Classical analogue of divergenceExperiment: two actions with matching
/// gradient at q0 give the same path. Throws PreparationMismatchError when the
/// gradients differ by kPreparationTolerance or more.
DivergenceReport classicalDivergence(const ActionField& a, const ActionField& b, const Point& q0, double t0,
                                     double T, double dt, double mass = 1.0);

}  // namespace bohmlab
