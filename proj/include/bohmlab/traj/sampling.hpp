#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "bohmlab/field/fields.hpp"

namespace bohmlab {

enum class SamplerKind { Born, Uniform, Explicit };

const char* samplerName(SamplerKind kind);

/// Periodic density on a 1D grid, linear between nodes (the last cell wraps to node 0).
///
/// The CDF is quadratic inside a cell, so the quantile inverts exactly.
class PiecewiseLinearDensity1D {
 public:
  PiecewiseLinearDensity1D(const SpatialGrid& grid, std::span<const double> density);

  double lower() const { return qmin_; }
  double upper() const { return qmin_ + dx_ * static_cast<double>(rho_.size()); }
  double total() const { return cum_.back(); }
  // Normalized density at q (q is wrapped into the box).
  double pdf(double q) const;
  // Normalized CDF of the wrapped coordinate.
  double cdf(double q) const;
  // Inverse CDF, u in [0, 1).
  double quantile(double u) const;

 private:
  double wrap(double q) const;

  double qmin_, dx_;
  std::vector<double> rho_;
  // cum_[i]: mass of cells [0, i).
  std::vector<double> cum_;
};

// Independent stream for draw `index` of a seeded ensemble; scheduling-order free.
std::mt19937_64 streamFor(std::uint64_t seed, std::uint64_t index);

/// Draws configurations distributed as |psi|^2.
///
/// 1D: inverse CDF of the piecewise-linear density. 2D: rejection against
/// the bilinear interpolant with a uniform proposal over the box.
class BornSampler {
 public:
  explicit BornSampler(const WaveField& psi);
  Point draw(std::mt19937_64& rng) const;
  const SpatialGrid& grid() const { return grid_; }

 private:
  SpatialGrid grid_;
  std::vector<double> rho_;
  double peak_ = 0.0;
  std::optional<PiecewiseLinearDensity1D> line_;
};

// Uniform over the grid box.
Point sampleUniform(const SpatialGrid& grid, std::mt19937_64& rng);

// Bilinear interpolation of a nonnegative node field at q (periodic).
double bilinear(const SpatialGrid& grid, std::span<const double> values, const Point& q);

}  // namespace bohmlab
