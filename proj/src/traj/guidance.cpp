#include "bohmlab/traj/guidance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bohmlab/errors.hpp"
#include "bohmlab/field/fft.hpp"
#include "bohmlab/field/interp.hpp"
#include "bohmlab/kernels/guidance_kernels.hpp"

namespace bohmlab {

VelocityFrame computeVelocityFrame(const WaveField& psi, double mass, double hbar, double nodeEps) {
  const auto& grid = psi.grid();
  VelocityFrame frame;
  frame.density.resize(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) frame.density[i] = std::norm(psi[i]);
  const double max_abs = psi.maxAbs();
  frame.nodeThreshold2 = (nodeEps * max_abs) * (nodeEps * max_abs);
  // Below this floor the quotient is numerically meaningless; such nodes are
  // only ever reached through stencils of points that already fail the node test.
  const double floor2 = frame.nodeThreshold2 * 1e-6;
  for (int a = 0; a < grid.dim(); ++a) {
    const auto dpsi = derivative(grid, psi.values(), a);
    auto& v = frame.velocity[a];
    v.resize(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) {
      const double rho = frame.density[i];
      v[i] = rho > floor2 ? hbar / mass * std::imag(std::conj(psi[i]) * dpsi[i]) / rho : 0.0;
    }
  }
  return frame;
}

GuidanceField::GuidanceField(std::vector<WaveField> snapshots, double mass, double hbar, double nodeEps,
                             Execution exec)
    : snapshots_(std::move(snapshots)), mass_(mass), hbar_(hbar), node_eps_(nodeEps) {
  if (snapshots_.empty()) throw std::invalid_argument("guidance needs at least one snapshot");
  if (!(mass > 0.0) || !(hbar > 0.0)) throw std::invalid_argument("mass and hbar must be positive");
  for (std::size_t i = 0; i < snapshots_.size(); ++i) {
    if (snapshots_[i].grid() != snapshots_.front().grid()) throw std::invalid_argument("snapshots must share a grid");
    if (i > 0 && !(snapshots_[i].time() > snapshots_[i - 1].time()))
      throw std::invalid_argument("snapshot times must increase strictly");
    times_.push_back(snapshots_[i].time());
  }
  frames_ = kernels::velocityFrames(snapshots_, mass_, hbar_, node_eps_, exec);
}

double GuidanceField::minSpacing() const {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < times_.size(); ++i) gap = std::min(gap, times_[i] - times_[i - 1]);
  return gap;
}

GuidanceField::Sample GuidanceField::sampleFrame(std::size_t frame, const Point& q) const {
  const auto& g = grid();
  const auto st = cubicStencil(g, q);
  const auto& f = frames_[frame];
  Sample s;
  for (int a = 0; a < g.dim(); ++a) s.velocity[a] = applyStencil<double>(g, st, f.velocity[a]);
  const double rho = applyStencil<double>(g, st, f.density);
  s.nearNode = !(rho >= f.nodeThreshold2);
  return s;
}

GuidanceField::Sample GuidanceField::sample(const Point& q, double t) const {
  if (stationary()) return sampleFrame(0, q);
  const std::size_t last = times_.size() - 1;
  if (t < times_.front() || t > times_.back()) throw std::out_of_range("time outside the snapshot window");
  // Interval [i, i+1] containing t.
  std::size_t i = static_cast<std::size_t>(std::upper_bound(times_.begin(), times_.end(), t) - times_.begin());
  i = i == 0 ? 0 : std::min(i - 1, last - 1);

  const auto& g = grid();
  const auto st = cubicStencil(g, q);
  const std::size_t lo = i == 0 ? 0 : i - 1;
  const std::size_t hi = std::min(i + 2, last);
  std::array<Point, 4> vel{};
  std::array<double, 4> rho{};
  std::array<double, 4> thr{};
  for (std::size_t k = lo; k <= hi; ++k) {
    const auto& f = frames_[k];
    for (int a = 0; a < g.dim(); ++a) vel[k - lo][a] = applyStencil<double>(g, st, f.velocity[a]);
    rho[k - lo] = applyStencil<double>(g, st, f.density);
    thr[k - lo] = f.nodeThreshold2;
  }
  auto at = [&](std::size_t k) { return k - lo; };
  auto slope = [&](std::size_t k, auto&& value) {
    const std::size_t a = k == 0 ? 0 : k - 1;
    const std::size_t b = std::min(k + 1, last);
    return (value(at(b)) - value(at(a))) / (times_[b] - times_[a]);
  };

  Sample s;
  const double t0 = times_[i], t1 = times_[i + 1];
  for (int a = 0; a < g.dim(); ++a) {
    auto comp = [&](std::size_t idx) { return vel[idx][a]; };
    s.velocity[a] = hermite(t, t0, t1, comp(at(i)), comp(at(i + 1)), slope(i, comp), slope(i + 1, comp));
  }
  auto dens = [&](std::size_t idx) { return rho[idx]; };
  const double rho_t = hermite(t, t0, t1, rho[at(i)], rho[at(i + 1)], slope(i, dens), slope(i + 1, dens));
  const double w = (t - t0) / (t1 - t0);
  const double thr_t = (1.0 - w) * thr[at(i)] + w * thr[at(i + 1)];
  s.nearNode = !(rho_t >= thr_t);
  return s;
}

Point velocityAt(const WaveField& psi, const Point& q, double mass, double hbar, double nodeEps) {
  const GuidanceField field({psi}, mass, hbar, nodeEps, Execution::Serial);
  const auto s = field.sample(q, psi.time());
  if (s.nearNode) throw NodeProximityError(psi.time());
  return s.velocity;
}

Point velocityAt(const PolarField& polar, const Point& q, double mass) {
  const auto& g = polar.grid();
  const auto st = cubicStencil(g, q);
  Point v{0.0, 0.0};
  for (int a = 0; a < g.dim(); ++a) {
    const RealField ds = phaseGradient(polar, a);
    // Any masked node inside the stencil means the gradient is undefined here.
    for (int i = 0; i < 4; ++i) {
      if (g.dim() == 1) {
        if (ds.masked(st.nodes[0][i])) throw NodeProximityError(polar.time());
      } else {
        for (int j = 0; j < 4; ++j)
          if (ds.masked(g.flat(st.nodes[0][i], st.nodes[1][j]))) throw NodeProximityError(polar.time());
      }
    }
    v[a] = applyStencil<double>(g, st, ds.values()) / mass;
  }
  return v;
}

}  // namespace bohmlab
