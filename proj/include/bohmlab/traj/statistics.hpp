#pragma once

#include <span>
#include <vector>

#include "bohmlab/field/fields.hpp"
#include "bohmlab/traj/sampling.hpp"

namespace bohmlab {

/// Node density of psi summed over every axis except `axis` (a 1D density on that axis).
RealField marginalDensity(const WaveField& psi, int axis);

/// Kolmogorov-Smirnov distance between the samples and a reference density.
///
/// Samples are wrapped into the box first. The reference CDF is the
/// piecewise-linear interpolant of the node density.
double ksStatistic(std::span<const double> samples, const PiecewiseLinearDensity1D& reference);

// KS distance of the `axis` coordinates of `points` against the |psi|^2 marginal.
double ksStatistic(std::span<const Point> points, const WaveField& psi, int axis = 0);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double pValue = 0.0;
};

/// Pearson goodness of fit on `bins` equal-probability cells of the reference.
ChiSquareResult chiSquareGof(std::span<const double> samples, const PiecewiseLinearDensity1D& reference,
                             int bins = 50);

struct Histogram {
  double lower = 0.0;
  double width = 0.0;
  std::vector<double> counts;
  double center(std::size_t i) const { return lower + (static_cast<double>(i) + 0.5) * width; }
};

// Counts in [lower, upper); out-of-range samples are dropped.
Histogram histogram(std::span<const double> samples, double lower, double upper, std::size_t bins);

}  // namespace bohmlab
