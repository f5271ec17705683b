#include "bohmlab/field/fields.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bohmlab {

namespace {

void requireSize(const SpatialGrid& grid, std::size_t n, const char* what) {
  if (n != grid.size()) throw std::invalid_argument(std::string(what) + " size does not match grid");
}

}  // namespace

WaveField::WaveField(SpatialGrid grid, std::vector<Complex> values, double time)
    : grid_(std::move(grid)), values_(std::move(values)), time_(time) {
  requireSize(grid_, values_.size(), "wave field");
  for (const auto& v : values_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument("wave field contains non-finite values");
}

WaveField WaveField::normalized(SpatialGrid grid, std::vector<Complex> values, double time) {
  WaveField raw(std::move(grid), std::move(values), time);
  const double n = raw.norm();
  if (!(n > 0.0)) throw std::invalid_argument("cannot normalize a zero wave field");
  const double scale = 1.0 / std::sqrt(n);
  for (auto& v : raw.values_) v *= scale;
  return raw;
}

double WaveField::norm() const {
  double sum = 0.0;
  for (const auto& v : values_) sum += std::norm(v);
  return sum * grid_.cellVolume();
}

double WaveField::maxAbs() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v));
  return m;
}

WaveField WaveField::rotated(double alpha) const {
  const Complex f = std::polar(1.0, alpha);
  std::vector<Complex> out(values_);
  for (auto& v : out) v *= f;
  return WaveField(grid_, std::move(out), time_);
}

WaveField WaveField::conjugated() const {
  std::vector<Complex> out(values_);
  for (auto& v : out) v = std::conj(v);
  return WaveField(grid_, std::move(out), time_);
}

RealField::RealField(SpatialGrid grid, std::vector<double> values, FieldUnit unit, std::vector<std::uint8_t> mask)
    : grid_(std::move(grid)), values_(std::move(values)), unit_(unit), mask_(std::move(mask)) {
  requireSize(grid_, values_.size(), "real field");
  if (!mask_.empty()) requireSize(grid_, mask_.size(), "real field mask");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (masked(i)) {
      values_[i] = 0.0;
      continue;
    }
    if (!std::isfinite(values_[i])) throw std::invalid_argument("real field contains non-finite values");
  }
  if (unit_ == FieldUnit::ProbabilityDensity)
    for (double v : values_)
      if (v < 0.0) throw std::invalid_argument("probability density must be non-negative");
}

double RealField::integral() const {
  double sum = 0.0;
  for (double v : values_) sum += v;
  return sum * grid_.cellVolume();
}

PolarField::PolarField(SpatialGrid grid, std::vector<double> amplitude, std::vector<double> phase,
                       std::vector<std::uint8_t> node_mask, double hbar, double time, UnwrapDiagnostics diagnostics)
    : grid_(std::move(grid)),
      amplitude_(std::move(amplitude)),
      phase_(std::move(phase)),
      mask_(std::move(node_mask)),
      hbar_(hbar),
      time_(time),
      diagnostics_(std::move(diagnostics)) {
  requireSize(grid_, amplitude_.size(), "amplitude");
  requireSize(grid_, phase_.size(), "phase");
  requireSize(grid_, mask_.size(), "node mask");
  if (!(hbar_ > 0.0)) throw std::invalid_argument("hbar must be positive");
  for (std::size_t i = 0; i < amplitude_.size(); ++i) {
    if (!(amplitude_[i] >= 0.0) || !std::isfinite(amplitude_[i]) || !std::isfinite(phase_[i]))
      throw std::invalid_argument("polar field needs finite R >= 0 and finite S");
  }
}

std::size_t PolarField::maskedCount() const {
  return static_cast<std::size_t>(std::count_if(mask_.begin(), mask_.end(), [](auto m) { return m != 0; }));
}

RealField PolarField::amplitudeField() const { return RealField(grid_, amplitude_, FieldUnit::Dimensionless); }

RealField PolarField::phaseField() const { return RealField(grid_, phase_, FieldUnit::Action, mask_); }

WaveField fromPolar(const PolarField& polar) {
  const auto r = polar.amplitude();
  const auto s = polar.phase();
  std::vector<Complex> values(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) values[i] = std::polar(r[i], s[i] / polar.hbar());
  return WaveField(polar.grid(), std::move(values), polar.time());
}

RealField density(const WaveField& psi) {
  std::vector<double> rho(psi.size());
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = std::norm(psi[i]);
  return RealField(psi.grid(), std::move(rho), FieldUnit::ProbabilityDensity);
}

}  // namespace bohmlab
