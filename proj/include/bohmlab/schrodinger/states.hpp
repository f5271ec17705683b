#pragma once

#include "bohmlab/field/fields.hpp"

namespace bohmlab {

/// Normalised Gaussian packet exp(-|q-c|^2 / (4 sigma^2) + i p.q / hbar).
///
/// `sigma` is the position standard deviation of |psi|^2 along each axis.
WaveField gaussianPacket(const SpatialGrid& grid, Point center, double sigma, Point momentum = {0.0, 0.0},
                         double hbar = 1.0, double time = 0.0);

// exp(i p.q / hbar), normalised on the box. Periodic only when p/hbar is a box harmonic.
WaveField planeWave(const SpatialGrid& grid, Point momentum, double hbar = 1.0);

// Harmonic-oscillator ground state displaced to `center` (width sqrt(hbar / (2 m omega))).
WaveField coherentState(const SpatialGrid& grid, Point center, double omega, double mass, double hbar = 1.0,
                        Point momentum = {0.0, 0.0});

struct DoubleSlitGeometry {
  double separation = 0.0;  // distance between packet centres on the transverse axis
  double width = 0.0;       // position std of each packet
  double forwardMomentum = 0.0;
  // 2D only: forward-axis packet centre and width.
  double forwardCenter = 0.0;
  double forwardWidth = 1.0;
};

/// Post-slit state: two equal Gaussians at +-separation/2 on the transverse axis.
///
/// 1D grids model the transverse axis alone. On 2D grids axis 0 is the
/// forward direction carrying a Gaussian envelope with `forwardMomentum`,
/// axis 1 the transverse one. Zero separation gives a single Gaussian.
/// Throws GridTooCoarseError if width < 2 dx on the transverse axis and
/// std::invalid_argument if 0 < separation <= width.
WaveField makeDoubleSlitState(const SpatialGrid& grid, const DoubleSlitGeometry& geometry, double hbar = 1.0);

}  // namespace bohmlab
