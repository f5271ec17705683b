#pragma once

#include <span>
#include <vector>

#include "bohmlab/field/fields.hpp"

namespace bohmlab {

// Probability current j = (hbar/m) Im(psi* grad psi), one field per axis (spectral).
std::vector<RealField> probabilityCurrent(const WaveField& psi, double mass, double hbar);

/// max over nodes of |d rho/dt + div j| at every interior snapshot.
///
/// d rho/dt uses the central difference of the two neighbouring snapshots;
/// div j is spectral. Entry i corresponds to snapshots[i + 1]. Requires at
/// least three snapshots on one grid.
std::vector<double> continuityResidual(std::span<const WaveField> snapshots, double mass, double hbar);

}  // namespace bohmlab
