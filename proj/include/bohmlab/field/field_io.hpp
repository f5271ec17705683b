#pragma once

#include <iosfwd>
#include <string>

#include "bohmlab/field/fields.hpp"

namespace bohmlab {

// Text form of a double with 17 significant digits; parses back to the same bits.
std::string formatDouble(double v);

/// Field dump CSV.
///
///   # grid dim=1 n=512 qmin=-16 qmax=16 t=0.5
///   q,re,im            (wave field)   or   q,value   (real field)
///
/// 2D grids write `n=<n0>x<n1> qmin=<a0>,<a1> qmax=<b0>,<b1>` and two
/// coordinate columns. All numbers use 17 significant digits, so reading a
/// dump back reproduces every value bit for bit.
void writeFieldCsv(std::ostream& out, const WaveField& psi);
void writeFieldCsv(std::ostream& out, const RealField& field, double time = 0.0);

WaveField readWaveFieldCsv(std::istream& in);
RealField readRealFieldCsv(std::istream& in, FieldUnit unit = FieldUnit::Dimensionless);

}  // namespace bohmlab
