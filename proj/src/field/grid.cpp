#include "bohmlab/field/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bohmlab {

namespace {

bool isPowerOfTwo(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

SpatialGrid SpatialGrid::line(std::size_t points, double qmin, double qmax) {
  SpatialGrid g;
  g.dim_ = 1;
  g.points_ = {points, 1};
  g.qmin_ = {qmin, 0.0};
  g.qmax_ = {qmax, 0.0};
  g.validate();
  g.spacing_ = {(qmax - qmin) / static_cast<double>(points), 0.0};
  return g;
}

SpatialGrid SpatialGrid::plane(std::array<std::size_t, 2> points, std::array<double, 2> qmin,
                               std::array<double, 2> qmax) {
  SpatialGrid g;
  g.dim_ = 2;
  g.points_ = points;
  g.qmin_ = qmin;
  g.qmax_ = qmax;
  g.validate();
  for (int a = 0; a < 2; ++a) g.spacing_[a] = (qmax[a] - qmin[a]) / static_cast<double>(points[a]);
  return g;
}

void SpatialGrid::validate() const {
  for (int a = 0; a < dim_; ++a) {
    if (points_[a] < 16 || !isPowerOfTwo(points_[a]))
      throw std::invalid_argument("grid axis " + std::to_string(a) +
                                  " needs a power-of-two point count >= 16");
    if (!std::isfinite(qmin_[a]) || !std::isfinite(qmax_[a]) || !(qmax_[a] > qmin_[a]))
      throw std::invalid_argument("grid axis " + std::to_string(a) + " needs qmax > qmin");
  }
}

std::size_t SpatialGrid::size() const { return dim_ == 1 ? points_[0] : points_[0] * points_[1]; }

double SpatialGrid::cellVolume() const { return dim_ == 1 ? spacing_[0] : spacing_[0] * spacing_[1]; }

std::array<std::size_t, 2> SpatialGrid::index(std::size_t flat) const {
  if (dim_ == 1) return {flat, 0};
  return {flat / points_[1], flat % points_[1]};
}

Point SpatialGrid::node(std::size_t flat) const {
  const auto idx = index(flat);
  Point p{coord(0, idx[0]), 0.0};
  if (dim_ == 2) p[1] = coord(1, idx[1]);
  return p;
}

std::size_t SpatialGrid::wrap(std::ptrdiff_t i, int axis) const {
  const auto n = static_cast<std::ptrdiff_t>(points_[axis]);
  std::ptrdiff_t r = i % n;
  if (r < 0) r += n;
  return static_cast<std::size_t>(r);
}

Point SpatialGrid::wrapPoint(Point p) const {
  for (int a = 0; a < dim_; ++a) {
    const double len = length(a);
    double r = std::fmod(p[a] - qmin_[a], len);
    if (r < 0.0) r += len;
    if (r >= len) r = 0.0;
    p[a] = qmin_[a] + r;
  }
  return p;
}

double SpatialGrid::wavenumber(int axis, std::size_t i) const {
  const auto n = points_[axis];
  const double base = 2.0 * std::numbers::pi / length(axis);
  const auto signed_i = i < n / 2 ? static_cast<double>(i) : static_cast<double>(i) - static_cast<double>(n);
  return base * signed_i;
}

std::vector<double> SpatialGrid::wavenumbers(int axis) const {
  std::vector<double> k(points_[axis]);
  for (std::size_t i = 0; i < k.size(); ++i) k[i] = wavenumber(axis, i);
  return k;
}

bool SpatialGrid::operator==(const SpatialGrid& other) const {
  return dim_ == other.dim_ && points_ == other.points_ && qmin_ == other.qmin_ && qmax_ == other.qmax_;
}

}  // namespace bohmlab
