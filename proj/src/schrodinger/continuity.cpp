#include "bohmlab/schrodinger/continuity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bohmlab/field/fft.hpp"

namespace bohmlab {

std::vector<RealField> probabilityCurrent(const WaveField& psi, double mass, double hbar) {
  const auto& grid = psi.grid();
  std::vector<RealField> out;
  for (int a = 0; a < grid.dim(); ++a) {
    const auto dpsi = derivative(grid, psi.values(), a);
    std::vector<double> j(psi.size());
    for (std::size_t i = 0; i < j.size(); ++i) j[i] = hbar / mass * std::imag(std::conj(psi[i]) * dpsi[i]);
    out.emplace_back(grid, std::move(j), FieldUnit::Dimensionless);
  }
  return out;
}

std::vector<double> continuityResidual(std::span<const WaveField> snapshots, double mass, double hbar) {
  if (snapshots.size() < 3) throw std::invalid_argument("continuity residual needs at least three snapshots");
  const auto& grid = snapshots.front().grid();
  for (const auto& s : snapshots)
    if (s.grid() != grid) throw std::invalid_argument("snapshots must share one grid");

  std::vector<double> residual;
  for (std::size_t k = 1; k + 1 < snapshots.size(); ++k) {
    const auto& prev = snapshots[k - 1];
    const auto& next = snapshots[k + 1];
    const double span_t = next.time() - prev.time();
    if (!(span_t > 0.0)) throw std::invalid_argument("snapshot times must increase");
    const auto current = probabilityCurrent(snapshots[k], mass, hbar);
    std::vector<double> div(grid.size(), 0.0);
    for (int a = 0; a < grid.dim(); ++a) {
      const auto d = derivative(grid, current[a].values(), a);
      for (std::size_t i = 0; i < div.size(); ++i) div[i] += d[i];
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < div.size(); ++i) {
      const double drho = (std::norm(next[i]) - std::norm(prev[i])) / span_t;
      worst = std::max(worst, std::abs(drho + div[i]));
    }
    residual.push_back(worst);
  }
  return residual;
}

}  // namespace bohmlab
