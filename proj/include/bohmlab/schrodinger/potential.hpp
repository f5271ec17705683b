#pragma once

#include <optional>
#include <string>

#include "bohmlab/field/fields.hpp"

namespace bohmlab {

/// Time-independent external potential V(q).
class Potential {
 public:
  enum class Kind { Free, Harmonic, CustomGrid };

  static Potential free();
  // V = m * omega^2 * |q - center|^2 / 2.
  static Potential harmonic(double omega, double mass, Point center = {0.0, 0.0});
  // Tabulated on a grid, cubic-interpolated off nodes.
  static Potential customGrid(RealField values);

  Kind kind() const { return kind_; }
  std::string name() const;
  double omega() const { return omega_; }
  double mass() const { return mass_; }

  RealField asField(const SpatialGrid& grid) const;
  double valueAt(const Point& q, int dim) const;
  Point gradientAt(const Point& q, int dim) const;

 private:
  Potential() = default;

  Kind kind_ = Kind::Free;
  double omega_ = 0.0;
  double mass_ = 1.0;
  Point center_{0.0, 0.0};
  std::optional<RealField> table_;
};

}  // namespace bohmlab
