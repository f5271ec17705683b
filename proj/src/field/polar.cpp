#include "bohmlab/field/polar.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>

#include "bohmlab/errors.hpp"

namespace bohmlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrapAngle(double x) { return x - kTwoPi * std::round(x / kTwoPi); }

void unwrapLine(std::span<const double> wrapped, std::span<const std::uint8_t> mask, std::size_t start,
                std::span<double> out) {
  const std::size_t n = wrapped.size();
  out[start] = wrapped[start];
  // Sweep right then left; each node is unwrapped against the last unmasked node seen.
  std::size_t ref = start;
  for (std::size_t i = start + 1; i < n; ++i) {
    out[i] = out[ref] + wrapAngle(wrapped[i] - wrapped[ref]);
    if (!mask[i]) ref = i;
  }
  ref = start;
  for (std::size_t i = start; i-- > 0;) {
    out[i] = out[ref] + wrapAngle(wrapped[i] - wrapped[ref]);
    if (!mask[i]) ref = i;
  }
}

void unwrapQualityGuided(const SpatialGrid& grid, std::span<const double> wrapped, std::span<const double> quality,
                         std::size_t start, std::span<double> out) {
  struct Entry {
    double quality;
    std::size_t flat;
    bool operator<(const Entry& o) const {
      if (quality != o.quality) return quality < o.quality;
      return flat > o.flat;
    }
  };
  std::vector<std::uint8_t> visited(grid.size(), 0);
  std::priority_queue<Entry> frontier;
  out[start] = wrapped[start];
  visited[start] = 1;
  frontier.push({quality[start], start});
  const std::size_t n0 = grid.points(0), n1 = grid.points(1);
  while (!frontier.empty()) {
    const auto [q, flat] = frontier.top();
    frontier.pop();
    const auto idx = grid.index(flat);
    const std::array<std::array<std::ptrdiff_t, 2>, 4> steps{{{-1, 0}, {1, 0}, {0, -1}, {0, 1}}};
    for (const auto& s : steps) {
      const auto i0 = static_cast<std::ptrdiff_t>(idx[0]) + s[0];
      const auto i1 = static_cast<std::ptrdiff_t>(idx[1]) + s[1];
      if (i0 < 0 || i1 < 0 || i0 >= static_cast<std::ptrdiff_t>(n0) || i1 >= static_cast<std::ptrdiff_t>(n1)) continue;
      const std::size_t nb = grid.flat(static_cast<std::size_t>(i0), static_cast<std::size_t>(i1));
      if (visited[nb]) continue;
      visited[nb] = 1;
      out[nb] = out[flat] + wrapAngle(wrapped[nb] - wrapped[flat]);
      frontier.push({quality[nb], nb});
    }
  }
}

std::vector<PhaseResidue> findResidues(const SpatialGrid& grid, std::span<const double> wrapped,
                                       std::span<const std::uint8_t> mask) {
  std::vector<PhaseResidue> residues;
  for (std::size_t i = 0; i + 1 < grid.points(0); ++i) {
    for (std::size_t j = 0; j + 1 < grid.points(1); ++j) {
      const std::size_t a = grid.flat(i, j), b = grid.flat(i + 1, j), c = grid.flat(i + 1, j + 1),
                        d = grid.flat(i, j + 1);
      if (mask[a] || mask[b] || mask[c] || mask[d]) continue;
      const double loop = wrapAngle(wrapped[b] - wrapped[a]) + wrapAngle(wrapped[c] - wrapped[b]) +
                          wrapAngle(wrapped[d] - wrapped[c]) + wrapAngle(wrapped[a] - wrapped[d]);
      const int charge = static_cast<int>(std::lround(loop / kTwoPi));
      if (charge != 0) residues.push_back({a, charge});
    }
  }
  return residues;
}

std::size_t countInconsistentEdges(const SpatialGrid& grid, std::span<const double> s,
                                   std::span<const std::uint8_t> mask, double hbar) {
  std::size_t count = 0;
  const double limit = std::numbers::pi * hbar;
  for (int a = 0; a < grid.dim(); ++a) {
    for (std::size_t flat = 0; flat < grid.size(); ++flat) {
      const auto idx = grid.index(flat);
      if (idx[a] + 1 >= grid.points(a)) continue;
      const std::size_t nb = flat + grid.stride(a);
      if (mask[flat] || mask[nb]) continue;
      if (std::abs(s[nb] - s[flat]) >= limit) ++count;
    }
  }
  return count;
}

// Visits every grid line along `axis`, passing the flat index of its first node.
template <typename F>
void forEachLine(const SpatialGrid& grid, int axis, F&& f) {
  if (grid.dim() == 1) {
    f(std::size_t{0});
    return;
  }
  const int other = 1 - axis;
  for (std::size_t j = 0; j < grid.points(other); ++j) f(j * grid.stride(other));
}

std::vector<std::uint8_t> dilateMask(const SpatialGrid& grid, std::span<const std::uint8_t> mask,
                                     std::ptrdiff_t reach) {
  std::vector<std::uint8_t> out(mask.begin(), mask.end());
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    if (!mask[flat]) continue;
    const auto idx = grid.index(flat);
    for (int a = 0; a < grid.dim(); ++a) {
      const std::size_t base = flat - idx[a] * grid.stride(a);
      for (std::ptrdiff_t s = -reach; s <= reach; ++s)
        out[base + grid.wrap(static_cast<std::ptrdiff_t>(idx[a]) + s, a) * grid.stride(a)] = 1;
    }
  }
  return out;
}

}  // namespace

PolarField toPolar(const WaveField& psi, double nodeEps, double hbar) {
  if (!(nodeEps > 0.0)) throw std::invalid_argument("nodeEps must be positive");
  if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
  const auto& grid = psi.grid();
  const std::size_t n = psi.size();

  std::vector<double> r(n), wrapped(n);
  std::size_t start = 0;
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = std::abs(psi[i]);
    wrapped[i] = std::arg(psi[i]);
    if (r[i] > r[start]) start = i;
  }
  const double threshold = nodeEps * r[start];
  std::vector<std::uint8_t> mask(n);
  std::size_t masked = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mask[i] = !(r[i] >= threshold) || r[i] == 0.0;
    masked += mask[i];
  }
  if (masked == n) throw AllNodesError();

  std::vector<double> s(n);
  UnwrapDiagnostics diag;
  diag.startNode = start;
  if (grid.dim() == 1) {
    unwrapLine(wrapped, mask, start, s);
  } else {
    unwrapQualityGuided(grid, wrapped, r, start, s);
    diag.residues = findResidues(grid, wrapped, mask);
  }
  for (auto& v : s) v *= hbar;
  diag.inconsistentEdges = countInconsistentEdges(grid, s, mask, hbar);
  return PolarField(grid, std::move(r), std::move(s), std::move(mask), hbar, psi.time(), std::move(diag));
}

RealField phaseGradient(const PolarField& polar, int axis) {
  const auto& grid = polar.grid();
  if (axis < 0 || axis >= grid.dim()) throw std::invalid_argument("axis out of range");
  const std::size_t n = grid.points(axis);
  const std::size_t stride = grid.stride(axis);
  const double h = grid.spacing(axis);
  const double hbar = polar.hbar();
  const auto s = polar.phase();
  std::vector<double> out(grid.size(), 0.0);

  if (polar.maskedCount() == 0) {
    const FourierTransform fft(n);
    std::vector<Complex> line(n);
    forEachLine(grid, axis, [&](std::size_t base) {
      // Lift the line continuously, then remove the winding ramp so it is periodic.
      std::vector<double> lifted(n);
      lifted[0] = s[base] / hbar;
      for (std::size_t i = 1; i < n; ++i)
        lifted[i] = lifted[i - 1] + wrapAngle((s[base + i * stride] - s[base + (i - 1) * stride]) / hbar);
      const double closing = lifted[n - 1] + wrapAngle((s[base] - s[base + (n - 1) * stride]) / hbar) - lifted[0];
      const double winding = std::round(closing / kTwoPi);
      const double slope = kTwoPi * winding / grid.length(axis);
      for (std::size_t i = 0; i < n; ++i) line[i] = lifted[i] - slope * h * static_cast<double>(i);
      fft.forward(line);
      for (std::size_t j = 0; j < n; ++j) {
        const double k = grid.wavenumber(axis, j);
        line[j] *= (j == n / 2) ? Complex(0.0) : Complex(0.0, k);
      }
      fft.backward(line);
      for (std::size_t i = 0; i < n; ++i) out[base + i * stride] = hbar * (line[i].real() + slope);
    });
    return RealField(grid, std::move(out), FieldUnit::Dimensionless);
  }

  // Central 8th-order weights for offsets 1..4 (antisymmetric).
  constexpr std::array<double, 4> w{4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  std::vector<std::uint8_t> mask(grid.size(), 0);
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    const auto idx = grid.index(flat);
    const auto i = static_cast<std::ptrdiff_t>(idx[axis]);
    const std::size_t base = flat - idx[axis] * stride;
    auto node = [&](std::ptrdiff_t d) { return base + grid.wrap(i + d, axis) * stride; };
    bool touches = false;
    for (std::ptrdiff_t d = -4; d <= 4; ++d) touches = touches || polar.masked(node(d));
    if (touches) {
      mask[flat] = 1;
      continue;
    }
    // Accumulate neighbour by neighbour so each wrapped step stays below pi.
    std::array<double, 9> lift{};
    for (std::ptrdiff_t d = 1; d <= 4; ++d) {
      lift[4 + d] = lift[3 + d] + wrapAngle((s[node(d)] - s[node(d - 1)]) / hbar);
      lift[4 - d] = lift[5 - d] + wrapAngle((s[node(-d)] - s[node(1 - d)]) / hbar);
    }
    double acc = 0.0;
    for (std::size_t d = 1; d <= 4; ++d) acc += w[d - 1] * (lift[4 + d] - lift[4 - d]);
    out[flat] = hbar * acc / h;
  }
  return RealField(grid, std::move(out), FieldUnit::Dimensionless, std::move(mask));
}

RealField quantumPotential(const PolarField& polar, double mass, double hbar, DiffMethod method) {
  if (!(mass > 0.0)) throw std::invalid_argument("mass must be positive");
  if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
  const auto& grid = polar.grid();
  const auto r = polar.amplitude();
  const auto lap = laplacian(grid, r, method);
  auto mask = method == DiffMethod::FiniteDifference4 ? dilateMask(grid, polar.nodeMask(), 2)
                                                      : std::vector<std::uint8_t>(polar.nodeMask().begin(),
                                                                                  polar.nodeMask().end());
  const double prefactor = -hbar * hbar / (2.0 * mass);
  std::vector<double> u(grid.size(), 0.0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (mask[i]) continue;
    u[i] = prefactor * (lap[i] / r[i]);
  }
  return RealField(grid, std::move(u), FieldUnit::Energy, std::move(mask));
}

}  // namespace bohmlab
