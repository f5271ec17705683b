#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace bohmlab {

inline constexpr int kMaxDim = 2;

// A configuration-space point. Components past the grid dimension are zero.
using Point = std::array<double, kMaxDim>;

/// Uniform periodic grid over a 1D or 2D box [qmin, qmax).
///
/// Nodes are stored row-major with axis 0 slowest, which is the layout FFTW
/// expects for multi-dimensional transforms. Each axis carries at least 16
/// points and a power-of-two count.
class SpatialGrid {
 public:
  static SpatialGrid line(std::size_t points, double qmin, double qmax);
  static SpatialGrid plane(std::array<std::size_t, 2> points, std::array<double, 2> qmin,
                           std::array<double, 2> qmax);

  int dim() const { return dim_; }
  std::size_t points(int axis) const { return points_[axis]; }
  double qmin(int axis) const { return qmin_[axis]; }
  double qmax(int axis) const { return qmax_[axis]; }
  double length(int axis) const { return qmax_[axis] - qmin_[axis]; }
  double spacing(int axis) const { return spacing_[axis]; }

  // Total node count.
  std::size_t size() const;
  // Volume element dq (dx in 1D, dx*dy in 2D).
  double cellVolume() const;

  double coord(int axis, std::size_t i) const { return qmin_[axis] + static_cast<double>(i) * spacing_[axis]; }
  Point node(std::size_t flat) const;
  std::size_t flat(std::size_t i0, std::size_t i1 = 0) const { return dim_ == 1 ? i0 : i0 * points_[1] + i1; }
  // Multi-index of a flat index.
  std::array<std::size_t, 2> index(std::size_t flat) const;
  // Stride in flat indices of one step along `axis`.
  std::size_t stride(int axis) const { return (dim_ == 2 && axis == 0) ? points_[1] : 1; }

  std::size_t wrap(std::ptrdiff_t i, int axis) const;
  // Maps a coordinate into [qmin, qmax) along every axis.
  Point wrapPoint(Point p) const;
  // Fractional node coordinate (q - qmin)/dx, not wrapped.
  double fractionalIndex(int axis, double q) const { return (q - qmin_[axis]) / spacing_[axis]; }

  // Angular wavenumber of FFT bin i along `axis` (negative frequencies in the upper half).
  double wavenumber(int axis, std::size_t i) const;
  std::vector<double> wavenumbers(int axis) const;

  bool operator==(const SpatialGrid& other) const;
  bool operator!=(const SpatialGrid& other) const { return !(*this == other); }

 private:
  SpatialGrid() = default;
  void validate() const;

  int dim_ = 1;
  std::array<std::size_t, 2> points_{1, 1};
  std::array<double, 2> qmin_{0.0, 0.0};
  std::array<double, 2> qmax_{0.0, 0.0};
  std::array<double, 2> spacing_{0.0, 0.0};
};

}  // namespace bohmlab
