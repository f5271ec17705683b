#include "bohmlab/schrodinger/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "bohmlab/field/fft.hpp"

namespace bohmlab {

void PropagatorConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("propagator dt must be positive");
  if (snapshotStride == 0) throw std::invalid_argument("snapshot stride must be >= 1");
  if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
  if (!(mass > 0.0)) throw std::invalid_argument("mass must be positive");
}

double PropagatorConfig::aliasingDtBound(const SpatialGrid& grid) const {
  double dx = grid.spacing(0);
  for (int a = 1; a < grid.dim(); ++a) dx = std::min(dx, grid.spacing(a));
  return dx * dx * mass / (std::numbers::pi * hbar);
}

bool Propagation::hasWarning(WarningKind kind) const {
  return std::any_of(warnings.begin(), warnings.end(), [&](const auto& w) { return w.kind == kind; });
}

double spectralTailFraction(const WaveField& psi) {
  const auto& grid = psi.grid();
  std::vector<Complex> spec(psi.values().begin(), psi.values().end());
  FourierTransform(grid).forward(spec);
  double total = 0.0, tail = 0.0;
  for (std::size_t flat = 0; flat < spec.size(); ++flat) {
    const double p = std::norm(spec[flat]);
    total += p;
    const auto idx = grid.index(flat);
    bool high = false;
    for (int a = 0; a < grid.dim(); ++a) {
      const double knyq = std::numbers::pi / grid.spacing(a);
      high = high || std::abs(grid.wavenumber(a, idx[a])) >= 0.9 * knyq;
    }
    if (high) tail += p;
  }
  return total > 0.0 ? tail / total : 0.0;
}

double edgeAmplitude(const WaveField& psi) {
  const auto& grid = psi.grid();
  double worst = 0.0;
  for (std::size_t flat = 0; flat < psi.size(); ++flat) {
    const auto idx = grid.index(flat);
    bool edge = false;
    for (int a = 0; a < grid.dim(); ++a) {
      const auto n = grid.points(a);
      const auto band = static_cast<std::size_t>(std::ceil(0.1 * static_cast<double>(n)));
      edge = edge || idx[a] < band || idx[a] >= n - band;
    }
    if (edge) worst = std::max(worst, std::abs(psi[flat]));
  }
  return worst;
}

Propagation propagate(const WaveField& psi0, const Potential& potential, const PropagatorConfig& cfg) {
  cfg.validate();
  const auto& grid = psi0.grid();
  const std::size_t n = grid.size();
  Propagation result;

  auto warn = [&](WarningKind kind, double t, double value, const std::string& text) {
    result.warnings.push_back({kind, t, value, text});
  };
  const double bound = cfg.aliasingDtBound(grid);
  if (cfg.dt > bound) {
    std::ostringstream os;
    os << "dt=" << cfg.dt << " exceeds the phase-aliasing bound " << bound;
    warn(WarningKind::DtAboveAliasingBound, psi0.time(), cfg.dt, os.str());
  }

  auto monitor = [&](const WaveField& psi) {
    const double edge = edgeAmplitude(psi);
    result.maxEdgeAmplitude = std::max(result.maxEdgeAmplitude, edge);
    if (edge > kEdgeAmplitudeLimit && !result.hasWarning(WarningKind::BoundaryContact))
      warn(WarningKind::BoundaryContact, psi.time(), edge, "|psi| near the box edge exceeds 1e-10");
    const double tail = spectralTailFraction(psi);
    if (tail > kAliasingTailLimit && !result.hasWarning(WarningKind::Aliasing))
      warn(WarningKind::Aliasing, psi.time(), tail, "momentum content approaches the Nyquist wavenumber");
  };

  const double norm0 = psi0.norm();
  result.snapshots.push_back(psi0);
  monitor(psi0);
  if (cfg.steps == 0) return result;

  // Half-step kinetic factors in FFT order and full-step potential phases.
  std::vector<Complex> kinetic(n), potential_phase(n);
  const double kin_rate = cfg.hbar * cfg.dt / (4.0 * cfg.mass);
  for (std::size_t flat = 0; flat < n; ++flat) {
    const auto idx = grid.index(flat);
    double k2 = 0.0;
    for (int a = 0; a < grid.dim(); ++a) {
      const double k = grid.wavenumber(a, idx[a]);
      k2 += k * k;
    }
    kinetic[flat] = std::polar(1.0, -kin_rate * k2);
  }
  const RealField v = potential.asField(grid);
  for (std::size_t i = 0; i < n; ++i) potential_phase[i] = std::polar(1.0, -v[i] * cfg.dt / cfg.hbar);

  const FourierTransform fft(grid);
  std::vector<Complex> psi(psi0.values().begin(), psi0.values().end());
  for (std::size_t step = 1; step <= cfg.steps; ++step) {
    fft.forward(psi);
    for (std::size_t i = 0; i < n; ++i) psi[i] *= kinetic[i];
    fft.backward(psi);
    for (std::size_t i = 0; i < n; ++i) psi[i] *= potential_phase[i];
    fft.forward(psi);
    for (std::size_t i = 0; i < n; ++i) psi[i] *= kinetic[i];
    fft.backward(psi);
    if (step % cfg.snapshotStride == 0 || step == cfg.steps) {
      WaveField snap(grid, psi, psi0.time() + static_cast<double>(step) * cfg.dt);
      result.normDrift = std::max(result.normDrift, std::abs(snap.norm() - norm0));
      monitor(snap);
      result.snapshots.push_back(std::move(snap));
    }
  }
  return result;
}

double energyExpectation(const WaveField& psi, const Potential& potential, double mass, double hbar) {
  const auto& grid = psi.grid();
  std::vector<Complex> spec(psi.values().begin(), psi.values().end());
  FourierTransform(grid).forward(spec);
  // Parseval: sum |psi|^2 dq = (dq / N) sum |psi_k|^2.
  double kin = 0.0, total = 0.0;
  for (std::size_t flat = 0; flat < spec.size(); ++flat) {
    const auto idx = grid.index(flat);
    double k2 = 0.0;
    for (int a = 0; a < grid.dim(); ++a) {
      const double k = grid.wavenumber(a, idx[a]);
      k2 += k * k;
    }
    const double p = std::norm(spec[flat]);
    kin += hbar * hbar * k2 / (2.0 * mass) * p;
    total += p;
  }
  const RealField v = potential.asField(grid);
  double pot = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    pot += v[i] * std::norm(psi[i]);
    norm += std::norm(psi[i]);
  }
  return kin / total + pot / norm;
}

double l2Distance(const WaveField& a, const WaveField& b) {
  if (a.grid() != b.grid()) throw std::invalid_argument("l2Distance: grids differ");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::norm(a[i] - b[i]);
  return std::sqrt(sum * a.grid().cellVolume());
}

double positionSpread(const WaveField& psi, int axis) {
  const auto& grid = psi.grid();
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double w = std::norm(psi[i]);
    const double q = grid.node(i)[axis];
    m0 += w;
    m1 += w * q;
    m2 += w * q * q;
  }
  const double mean = m1 / m0;
  return std::sqrt(std::max(0.0, m2 / m0 - mean * mean));
}

}  // namespace bohmlab
