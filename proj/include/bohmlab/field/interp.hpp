#pragma once

#include <array>
#include <cmath>
#include <span>

#include "bohmlab/field/grid.hpp"

namespace bohmlab {

// Lagrange weights for nodes at offsets -1, 0, 1, 2 from the cell origin; frac in [0, 1).
inline std::array<double, 4> cubicWeights(double frac) {
  const double x = frac;
  return {-x * (x - 1.0) * (x - 2.0) / 6.0, (x + 1.0) * (x - 1.0) * (x - 2.0) / 2.0,
          -(x + 1.0) * x * (x - 2.0) / 2.0, (x + 1.0) * x * (x - 1.0) / 6.0};
}

// Weights of the derivative of the same cubic (per unit of node spacing).
inline std::array<double, 4> cubicDerivativeWeights(double frac) {
  const double x = frac;
  return {-(3.0 * x * x - 6.0 * x + 2.0) / 6.0, (3.0 * x * x - 4.0 * x - 1.0) / 2.0,
          -(3.0 * x * x - 2.0 * x - 2.0) / 2.0, (3.0 * x * x - 1.0) / 6.0};
}

struct CubicStencil {
  std::array<std::array<std::size_t, 4>, kMaxDim> nodes{};
  std::array<std::array<double, 4>, kMaxDim> weights{};
};

// Periodic 4-point stencil around p (derivative weights along `deriv_axis` if >= 0).
inline CubicStencil cubicStencil(const SpatialGrid& grid, const Point& p, int deriv_axis = -1) {
  CubicStencil st;
  for (int a = 0; a < grid.dim(); ++a) {
    const double u = grid.fractionalIndex(a, p[a]);
    const double cell = std::floor(u);
    const double frac = u - cell;
    const auto base = static_cast<std::ptrdiff_t>(cell);
    for (int k = 0; k < 4; ++k) st.nodes[a][k] = grid.wrap(base - 1 + k, a);
    if (a == deriv_axis) {
      st.weights[a] = cubicDerivativeWeights(frac);
      for (auto& w : st.weights[a]) w /= grid.spacing(a);
    } else {
      st.weights[a] = cubicWeights(frac);
    }
  }
  return st;
}

template <typename T>
T applyStencil(const SpatialGrid& grid, const CubicStencil& st, std::span<const T> values) {
  T acc{};
  if (grid.dim() == 1) {
    for (int k = 0; k < 4; ++k) acc += st.weights[0][k] * values[st.nodes[0][k]];
    return acc;
  }
  const std::size_t n1 = grid.points(1);
  for (int i = 0; i < 4; ++i) {
    T row{};
    for (int j = 0; j < 4; ++j) row += st.weights[1][j] * values[st.nodes[0][i] * n1 + st.nodes[1][j]];
    acc += st.weights[0][i] * row;
  }
  return acc;
}

/// Periodic cubic (tensor-product in 2D) interpolation at an arbitrary point.
template <typename T>
T interpolate(const SpatialGrid& grid, std::span<const T> values, const Point& p) {
  return applyStencil(grid, cubicStencil(grid, p), values);
}

// d/dq_axis of the cubic interpolant.
template <typename T>
T interpolateDerivative(const SpatialGrid& grid, std::span<const T> values, const Point& p, int axis) {
  return applyStencil(grid, cubicStencil(grid, p, axis), values);
}

/// Cubic Hermite interpolation on [t0, t1] with end slopes m0, m1.
template <typename T>
T hermite(double t, double t0, double t1, const T& y0, const T& y1, const T& m0, const T& m1) {
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * m0 + (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * m1;
}

}  // namespace bohmlab
