#include "bohmlab/schrodinger/potential.hpp"

#include <cmath>
#include <stdexcept>

#include "bohmlab/field/interp.hpp"

namespace bohmlab {

Potential Potential::free() { return Potential(); }

Potential Potential::harmonic(double omega, double mass, Point center) {
  if (!(omega > 0.0) || !(mass > 0.0)) throw std::invalid_argument("harmonic potential needs omega > 0, mass > 0");
  Potential v;
  v.kind_ = Kind::Harmonic;
  v.omega_ = omega;
  v.mass_ = mass;
  v.center_ = center;
  return v;
}

Potential Potential::customGrid(RealField values) {
  if (values.hasMask()) throw std::invalid_argument("custom potential must not be masked");
  Potential v;
  v.kind_ = Kind::CustomGrid;
  v.table_.emplace(std::move(values));
  return v;
}

std::string Potential::name() const {
  switch (kind_) {
    case Kind::Free: return "free";
    case Kind::Harmonic: return "harmonic";
    case Kind::CustomGrid: return "custom-grid";
  }
  return "unknown";
}

double Potential::valueAt(const Point& q, int dim) const {
  switch (kind_) {
    case Kind::Free: return 0.0;
    case Kind::Harmonic: {
      double r2 = 0.0;
      for (int a = 0; a < dim; ++a) r2 += (q[a] - center_[a]) * (q[a] - center_[a]);
      return 0.5 * mass_ * omega_ * omega_ * r2;
    }
    case Kind::CustomGrid: return interpolate(table_->grid(), table_->values(), q);
  }
  return 0.0;
}

Point Potential::gradientAt(const Point& q, int dim) const {
  Point g{0.0, 0.0};
  switch (kind_) {
    case Kind::Free: break;
    case Kind::Harmonic:
      for (int a = 0; a < dim; ++a) g[a] = mass_ * omega_ * omega_ * (q[a] - center_[a]);
      break;
    case Kind::CustomGrid:
      for (int a = 0; a < dim; ++a) g[a] = interpolateDerivative(table_->grid(), table_->values(), q, a);
      break;
  }
  return g;
}

RealField Potential::asField(const SpatialGrid& grid) const {
  if (kind_ == Kind::CustomGrid && table_->grid() == grid) return *table_;
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = valueAt(grid.node(i), grid.dim());
  return RealField(grid, std::move(v), FieldUnit::Energy);
}

}  // namespace bohmlab
