#include "bohmlab/traj/statistics.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <stdexcept>

namespace bohmlab {

RealField marginalDensity(const WaveField& psi, int axis) {
  const auto& g = psi.grid();
  if (axis < 0 || axis >= g.dim()) throw std::invalid_argument("axis out of range");
  if (g.dim() == 1) return density(psi);
  const int other = 1 - axis;
  std::vector<double> out(g.points(axis), 0.0);
  for (std::size_t f = 0; f < psi.size(); ++f) out[g.index(f)[axis]] += std::norm(psi[f]) * g.spacing(other);
  auto line = SpatialGrid::line(g.points(axis), g.qmin(axis), g.qmax(axis));
  return RealField(line, std::move(out), FieldUnit::ProbabilityDensity);
}

double ksStatistic(std::span<const double> samples, const PiecewiseLinearDensity1D& reference) {
  if (samples.empty()) return 0.0;
  std::vector<double> cdf(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) cdf[i] = reference.cdf(samples[i]);
  std::sort(cdf.begin(), cdf.end());
  const double n = static_cast<double>(cdf.size());
  double d = 0.0;
  for (std::size_t i = 0; i < cdf.size(); ++i) {
    const double k = static_cast<double>(i);
    d = std::max({d, (k + 1.0) / n - cdf[i], cdf[i] - k / n});
  }
  return d;
}

double ksStatistic(std::span<const Point> points, const WaveField& psi, int axis) {
  const RealField marginal = marginalDensity(psi, axis);
  const PiecewiseLinearDensity1D ref(marginal.grid(), marginal.values());
  std::vector<double> coords(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) coords[i] = points[i][axis];
  return ksStatistic(coords, ref);
}

ChiSquareResult chiSquareGof(std::span<const double> samples, const PiecewiseLinearDensity1D& reference, int bins) {
  if (bins < 2) throw std::invalid_argument("need at least two bins");
  if (samples.empty()) throw std::invalid_argument("no samples");
  // Equal-probability cells in CDF space.
  std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
  for (double s : samples) {
    const auto b = static_cast<std::size_t>(std::clamp(reference.cdf(s) * bins, 0.0, bins - 1.0));
    counts[b] += 1.0;
  }
  const double expected = static_cast<double>(samples.size()) / bins;
  ChiSquareResult r;
  for (double c : counts) r.statistic += (c - expected) * (c - expected) / expected;
  r.dof = bins - 1;
  boost::math::chi_squared dist(r.dof);
  r.pValue = boost::math::cdf(boost::math::complement(dist, r.statistic));
  return r;
}

Histogram histogram(std::span<const double> samples, double lower, double upper, std::size_t bins) {
  if (!(upper > lower) || bins == 0) throw std::invalid_argument("bad histogram range");
  Histogram h;
  h.lower = lower;
  h.width = (upper - lower) / static_cast<double>(bins);
  h.counts.assign(bins, 0.0);
  for (double s : samples) {
    if (!(s >= lower && s < upper)) continue;
    const auto b = std::min(static_cast<std::size_t>((s - lower) / h.width), bins - 1);
    h.counts[b] += 1.0;
  }
  return h;
}

}  // namespace bohmlab
