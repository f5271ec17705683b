#pragma once

#include "bohmlab/classical/action.hpp"
#include "bohmlab/schrodinger/potential.hpp"

namespace bohmlab {

/// One characteristic of the classical Hamilton-Jacobi flow, with its
/// variational (Jacobian) part: X, P, J = dX/dq0, K = dP/dq0, and the
/// action S accumulated as the integral of the Lagrangian.
struct CharacteristicState {
  Point X{0.0, 0.0};
  Point P{0.0, 0.0};
  Matrix2 J{};
  Matrix2 K{};
  double S = 0.0;
};

struct CharacteristicSetup {
  const ActionField* action = nullptr;
  const Potential* potential = nullptr;
  double mass = 1.0;
  int dim = 1;
  double t0 = 0.0;
  // RK4 step bound.
  double dt = 0.0;
  // det J below this stops the characteristic.
  double causticThreshold = 1e-8;
};

struct CharacteristicRun {
  CharacteristicState state;
  bool caustic = false;
  double causticTime = 0.0;
  double minDetJ = 1.0;
};

double determinant(const Matrix2& m, int dim);

// Starts at q0 with P = grad S, K = Hess S, S = S(q0, t0) and integrates to t.
CharacteristicRun integrateCharacteristic(const CharacteristicSetup& setup, const Point& q0, double t);

struct Foot {
  Point q0{0.0, 0.0};
  CharacteristicRun run;
  bool converged = false;
  int iterations = 0;
};

/// Newton solve for the foot q0 with X(q0, t) = q, starting from `guess`.
Foot solveFoot(const CharacteristicSetup& setup, const Point& q, double t, const Point& guess);

}  // namespace bohmlab
