#pragma once

#include "bohmlab/field/fft.hpp"
#include "bohmlab/field/fields.hpp"

namespace bohmlab {

inline constexpr double kDefaultNodeEps = 1e-6;

/// Madelung decomposition psi = R exp(iS/hbar).
///
/// R = |psi| exactly. Nodes with |psi| < nodeEps * max|psi| are masked. S is
/// unwrapped starting from the first node of maximal |psi|: in 1D by a
/// flood along the line in both directions (the periodic seam is not
/// crossed), in 2D by a quality-guided flood ordered by |psi| with residues
/// of the wrapped phase recorded in the diagnostics rather than removed.
///
/// Throws AllNodesError when every node is masked.
PolarField toPolar(const WaveField& psi, double nodeEps = kDefaultNodeEps, double hbar = 1.0);

/// dS/dq_axis of the unwrapped phase, masked where the stencil meets a node.
///
/// With no mask, each grid line is made periodic by removing its net 2*pi*hbar
/// winding ramp and differentiated spectrally; masked fields fall back to an
/// 8th-order stencil on locally unwrapped differences.
RealField phaseGradient(const PolarField& polar, int axis);

/// U = -(hbar^2 / 2m) * lap(R) / R off the node mask.
///
/// Masked nodes carry 0 and stay masked; with the finite-difference method
/// the mask is widened by the stencil reach. Spectral differentiation of R is
/// accurate when R is smooth, including tails that fall under the node
/// threshold; fields with true interior nodes (|psi| has a kink) should use
/// DiffMethod::FiniteDifference4 so ringing stays local.
RealField quantumPotential(const PolarField& polar, double mass, double hbar,
                           DiffMethod method = DiffMethod::Spectral);

}  // namespace bohmlab
