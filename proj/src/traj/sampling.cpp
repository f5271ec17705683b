#include "bohmlab/traj/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bohmlab {

const char* samplerName(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::Born: return "born";
    case SamplerKind::Uniform: return "uniform";
    case SamplerKind::Explicit: return "explicit";
  }
  return "?";
}

PiecewiseLinearDensity1D::PiecewiseLinearDensity1D(const SpatialGrid& grid, std::span<const double> density)
    : qmin_(grid.qmin(0)), dx_(grid.spacing(0)), rho_(density.begin(), density.end()) {
  if (grid.dim() != 1) throw std::invalid_argument("piecewise-linear density is 1D");
  if (rho_.size() != grid.size()) throw std::invalid_argument("density size does not match grid");
  const std::size_t n = rho_.size();
  cum_.assign(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(rho_[i] >= 0.0)) throw std::invalid_argument("density must be nonnegative");
    cum_[i + 1] = cum_[i] + 0.5 * dx_ * (rho_[i] + rho_[(i + 1) % n]);
  }
  if (!(cum_.back() > 0.0)) throw std::invalid_argument("density has zero mass");
}

double PiecewiseLinearDensity1D::wrap(double q) const {
  const double len = dx_ * static_cast<double>(rho_.size());
  double u = std::fmod(q - qmin_, len);
  if (u < 0.0) u += len;
  return u;
}

double PiecewiseLinearDensity1D::pdf(double q) const {
  const double u = wrap(q) / dx_;
  const auto i = std::min(static_cast<std::size_t>(u), rho_.size() - 1);
  const double f = u - static_cast<double>(i);
  return ((1.0 - f) * rho_[i] + f * rho_[(i + 1) % rho_.size()]) / total();
}

double PiecewiseLinearDensity1D::cdf(double q) const {
  const double u = wrap(q) / dx_;
  const auto i = std::min(static_cast<std::size_t>(u), rho_.size() - 1);
  const double f = u - static_cast<double>(i);
  const double a = rho_[i], b = rho_[(i + 1) % rho_.size()];
  return (cum_[i] + dx_ * (a * f + 0.5 * (b - a) * f * f)) / total();
}

double PiecewiseLinearDensity1D::quantile(double u) const {
  const double target = std::clamp(u, 0.0, 1.0) * total();
  auto it = std::upper_bound(cum_.begin(), cum_.end(), target);
  std::size_t i = it == cum_.begin() ? 0 : static_cast<std::size_t>(it - cum_.begin()) - 1;
  i = std::min(i, rho_.size() - 1);
  const double a = rho_[i], b = rho_[(i + 1) % rho_.size()];
  const double m = (target - cum_[i]) / dx_;
  // Solve a f + (b-a) f^2 / 2 = m for f in [0, 1].
  double f;
  const double c = b - a;
  if (std::abs(c) < 1e-14 * std::max(a, b)) {
    f = a > 0.0 ? m / a : 0.0;
  } else {
    const double disc = std::max(a * a + 2.0 * c * m, 0.0);
    // Cancellation-free root.
    f = 2.0 * m / (a + std::sqrt(disc));
  }
  return qmin_ + dx_ * (static_cast<double>(i) + std::clamp(f, 0.0, 1.0));
}

std::mt19937_64 streamFor(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

double bilinear(const SpatialGrid& grid, std::span<const double> values, const Point& q) {
  if (grid.dim() == 1) {
    const double u = grid.fractionalIndex(0, q[0]);
    const double c = std::floor(u);
    const double f = u - c;
    const auto i = static_cast<std::ptrdiff_t>(c);
    return (1.0 - f) * values[grid.wrap(i, 0)] + f * values[grid.wrap(i + 1, 0)];
  }
  const double u = grid.fractionalIndex(0, q[0]), v = grid.fractionalIndex(1, q[1]);
  const double cu = std::floor(u), cv = std::floor(v);
  const double fu = u - cu, fv = v - cv;
  const auto i = static_cast<std::ptrdiff_t>(cu), j = static_cast<std::ptrdiff_t>(cv);
  const auto i0 = grid.wrap(i, 0), i1 = grid.wrap(i + 1, 0);
  const auto j0 = grid.wrap(j, 1), j1 = grid.wrap(j + 1, 1);
  return (1.0 - fu) * ((1.0 - fv) * values[grid.flat(i0, j0)] + fv * values[grid.flat(i0, j1)]) +
         fu * ((1.0 - fv) * values[grid.flat(i1, j0)] + fv * values[grid.flat(i1, j1)]);
}

Point sampleUniform(const SpatialGrid& grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Point p{0.0, 0.0};
  for (int a = 0; a < grid.dim(); ++a) p[a] = grid.qmin(a) + unit(rng) * grid.length(a);
  return p;
}

BornSampler::BornSampler(const WaveField& psi) : grid_(psi.grid()), rho_(psi.size()) {
  for (std::size_t i = 0; i < rho_.size(); ++i) peak_ = std::max(peak_, rho_[i] = std::norm(psi[i]));
  if (!(peak_ > 0.0)) throw std::invalid_argument("cannot sample a vanishing wave function");
  if (grid_.dim() == 1) line_.emplace(grid_, rho_);
}

Point BornSampler::draw(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (line_) return {line_->quantile(unit(rng)), 0.0};
  // The bilinear interpolant never exceeds the node maximum.
  for (;;) {
    const Point p = sampleUniform(grid_, rng);
    if (unit(rng) * peak_ < bilinear(grid_, rho_, p)) return p;
  }
}

}  // namespace bohmlab
