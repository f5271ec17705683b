#pragma once

#include <string>
#include <vector>

#include "bohmlab/field/fields.hpp"
#include "bohmlab/schrodinger/potential.hpp"

namespace bohmlab {

enum class Splitting { Strang };

struct PropagatorConfig {
  double dt = 0.0;
  std::size_t steps = 0;
  double hbar = 1.0;
  double mass = 1.0;
  // Emit a snapshot every `snapshotStride` steps (the final step is always emitted).
  std::size_t snapshotStride = 1;
  Splitting splitting = Splitting::Strang;

  // Throws std::invalid_argument on dt <= 0, stride 0, hbar/mass <= 0.
  void validate() const;
  // Largest dt keeping the top-wavenumber kinetic phase per step below pi/2: min dx^2 m / (pi hbar).
  double aliasingDtBound(const SpatialGrid& grid) const;
};

enum class WarningKind { DtAboveAliasingBound, Aliasing, BoundaryContact };

struct PropagationWarning {
  WarningKind kind;
  double time;
  double value;
  std::string message;
};

struct Propagation {
  std::vector<WaveField> snapshots;
  std::vector<PropagationWarning> warnings;
  // Largest |psi| seen within 10% of any box edge, over all snapshots.
  double maxEdgeAmplitude = 0.0;
  // max |norm(t) - norm(0)| over snapshots.
  double normDrift = 0.0;

  bool hasWarning(WarningKind kind) const;
};

inline constexpr double kEdgeAmplitudeLimit = 1e-10;
inline constexpr double kAliasingTailLimit = 1e-8;

/// Strang split-step evolution under i hbar dpsi/dt = (-hbar^2/2m lap + V) psi.
///
/// Each step applies a half kinetic step in Fourier space, the full
/// potential phase, and another half kinetic step. The boundary is periodic;
/// a monitor records |psi| within 10% of each edge and the spectral tail
/// in the top 10% of wavenumbers, adding warnings instead of throwing.
Propagation propagate(const WaveField& psi0, const Potential& potential, const PropagatorConfig& cfg);

// Fraction of the norm carried by |k| >= 0.9 k_nyquist along any axis.
double spectralTailFraction(const WaveField& psi);
// Largest |psi| within 10% of any edge.
double edgeAmplitude(const WaveField& psi);

// <H> with a spectral kinetic term.
double energyExpectation(const WaveField& psi, const Potential& potential, double mass, double hbar);
// L2 distance sqrt(int |a - b|^2 dq).
double l2Distance(const WaveField& a, const WaveField& b);
// Standard deviation of position along `axis` under |psi|^2.
double positionSpread(const WaveField& psi, int axis = 0);

}  // namespace bohmlab
