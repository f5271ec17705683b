#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "bohmlab/field/grid.hpp"

namespace bohmlab {

using Complex = std::complex<double>;

enum class FieldUnit { Dimensionless, Energy, ProbabilityDensity, Action, Velocity, Length };

/// Complex wave function sampled on a grid at one instant.
///
/// Immutable after construction; every value is checked finite.
class WaveField {
 public:
  WaveField(SpatialGrid grid, std::vector<Complex> values, double time = 0.0);

  // Builds and rescales to unit L2 norm.
  static WaveField normalized(SpatialGrid grid, std::vector<Complex> values, double time = 0.0);

  const SpatialGrid& grid() const { return grid_; }
  std::span<const Complex> values() const { return values_; }
  const Complex& operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }
  double time() const { return time_; }

  // Integral of |psi|^2 over the box.
  double norm() const;
  double maxAbs() const;

  WaveField withTime(double t) const { return WaveField(grid_, values_, t); }
  // Multiplies by exp(i*alpha).
  WaveField rotated(double alpha) const;
  // Complex conjugate; for real potentials this is the time-reversed state.
  WaveField conjugated() const;

 private:
  SpatialGrid grid_;
  std::vector<Complex> values_;
  double time_;
};

/// Real scalar field with a declared unit and an optional node mask.
///
/// Masked entries hold 0 as a sentinel; consumers must consult `masked()`.
class RealField {
 public:
  RealField(SpatialGrid grid, std::vector<double> values, FieldUnit unit = FieldUnit::Dimensionless,
            std::vector<std::uint8_t> mask = {});

  const SpatialGrid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }
  FieldUnit unit() const { return unit_; }
  bool hasMask() const { return !mask_.empty(); }
  bool masked(std::size_t i) const { return !mask_.empty() && mask_[i] != 0; }
  std::span<const std::uint8_t> mask() const { return mask_; }

  // Grid quadrature of the (unmasked) values.
  double integral() const;

 private:
  SpatialGrid grid_;
  std::vector<double> values_;
  FieldUnit unit_;
  std::vector<std::uint8_t> mask_;
};

// Residue charge on one 2x2 plaquette whose lower-left node is `flat`.
struct PhaseResidue {
  std::size_t flat;
  int charge;
};

struct UnwrapDiagnostics {
  std::size_t startNode = 0;
  // Plaquettes with nonzero winding of the wrapped phase (2D only).
  std::vector<PhaseResidue> residues;
  // Unmasked neighbour pairs whose unwrapped difference is >= pi*hbar.
  std::size_t inconsistentEdges = 0;
};

/// Madelung pair (R, S) with S in action units, plus the node mask.
class PolarField {
 public:
  PolarField(SpatialGrid grid, std::vector<double> amplitude, std::vector<double> phase,
             std::vector<std::uint8_t> node_mask, double hbar, double time, UnwrapDiagnostics diagnostics = {});

  const SpatialGrid& grid() const { return grid_; }
  std::span<const double> amplitude() const { return amplitude_; }
  std::span<const double> phase() const { return phase_; }
  std::span<const std::uint8_t> nodeMask() const { return mask_; }
  bool masked(std::size_t i) const { return mask_[i] != 0; }
  std::size_t maskedCount() const;
  double hbar() const { return hbar_; }
  double time() const { return time_; }
  const UnwrapDiagnostics& diagnostics() const { return diagnostics_; }

  RealField amplitudeField() const;
  RealField phaseField() const;

 private:
  SpatialGrid grid_;
  std::vector<double> amplitude_;
  std::vector<double> phase_;
  std::vector<std::uint8_t> mask_;
  double hbar_;
  double time_;
  UnwrapDiagnostics diagnostics_;
};

// R exp(iS/hbar) at every node.
WaveField fromPolar(const PolarField& polar);

// rho = |psi|^2.
RealField density(const WaveField& psi);

}  // namespace bohmlab
