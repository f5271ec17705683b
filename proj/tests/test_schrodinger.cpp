#include <doctest.h>

#include <cmath>

#include "bohmlab/errors.hpp"
#include "bohmlab/schrodinger/continuity.hpp"
#include "bohmlab/schrodinger/propagator.hpp"
#include "bohmlab/schrodinger/states.hpp"
#include "oracles.hpp"

using namespace bohmlab;
using oracle::pi;

namespace {

PropagatorConfig config(double dt, std::size_t steps, std::size_t stride = 0) {
  PropagatorConfig c;
  c.dt = dt;
  c.steps = steps;
  c.snapshotStride = stride == 0 ? std::max<std::size_t>(steps, 1) : stride;
  return c;
}

WaveField harmonicGroundState(const SpatialGrid& g, double omega) {
  std::vector<Complex> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = oracle::harmonicGround(g.coord(0, i), omega);
  return WaveField::normalized(g, std::move(v));
}

// Local maxima of a 1D density, refined by a parabola through the three top samples.
std::vector<double> peaks(const SpatialGrid& g, std::span<const double> rho, double lo, double hi, double floor = 0.0) {
  std::vector<double> out;
  for (std::size_t i = 1; i + 1 < g.size(); ++i) {
    const double q = g.coord(0, i);
    if (q < lo || q > hi || rho[i] <= floor) continue;
    if (rho[i] > rho[i - 1] && rho[i] >= rho[i + 1]) {
      const double a = rho[i - 1], b = rho[i], c = rho[i + 1];
      out.push_back(q + 0.5 * g.spacing(0) * (a - c) / (a - 2 * b + c));
    }
  }
  return out;
}

}  // namespace

TEST_CASE("config validation and aliasing bound") {
  const auto g = SpatialGrid::line(256, -16.0, 16.0);
  auto c = config(0.0, 10);
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = config(0.01, 10);
  c.snapshotStride = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = config(0.01, 10);
  c.mass = -1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = config(0.01, 10);
  const double dx = g.spacing(0);
  CHECK(c.aliasingDtBound(g) == doctest::Approx(dx * dx / pi));
}

TEST_CASE("free Gaussian width follows sigma(t)") {
  const auto g = SpatialGrid::line(1024, -32.0, 32.0);
  const auto psi0 = gaussianPacket(g, {0.0, 0.0}, 1.0);
  const auto run = propagate(psi0, Potential::free(), config(1e-3, 2000));
  const oracle::FreeGaussian fg;
  const double sigma = positionSpread(run.snapshots.back());
  CHECK(run.snapshots.back().time() == doctest::Approx(2.0));
  CHECK(std::abs(sigma - std::sqrt(2.0)) / std::sqrt(2.0) < 1e-4);
  CHECK(std::abs(sigma - fg.width(2.0)) / fg.width(2.0) < 1e-4);
  CHECK(run.warnings.empty());
  // Full state against the closed form (global phase fixed by the same convention).
  const auto exact = oracle::sampled(g, fg, 2.0);
  CHECK(l2Distance(run.snapshots.back(), exact) < 1e-8);
}

TEST_CASE("harmonic ground state keeps its modulus over a period") {
  const auto g = SpatialGrid::line(256, -16.0, 16.0);
  const auto psi0 = harmonicGroundState(g, 1.0);
  const std::size_t steps = 20000;
  auto c = config(2.0 * pi / steps, steps, 200);
  const auto run = propagate(psi0, Potential::harmonic(1.0, 1.0), c);
  double worst = 0.0;
  for (const auto& s : run.snapshots)
    for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(std::abs(s[i]) - std::abs(psi0[i])));
  CHECK(worst < 1e-8);
}

TEST_CASE("zero steps returns the input unchanged") {
  const auto g = SpatialGrid::line(64, -8.0, 8.0);
  const auto psi0 = gaussianPacket(g, {0.5, 0.0}, 1.0, {0.3, 0.0});
  const auto run = propagate(psi0, Potential::harmonic(1.0, 1.0), config(0.01, 0));
  REQUIRE(run.snapshots.size() == 1);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(run.snapshots[0][i] == psi0[i]);
  CHECK(run.snapshots[0].time() == psi0.time());
}

TEST_CASE("snapshot stride emits the start, every stride, and the final step") {
  const auto g = SpatialGrid::line(64, -8.0, 8.0);
  const auto run = propagate(gaussianPacket(g, {0.0, 0.0}, 1.0), Potential::free(), config(0.01, 10, 4));
  REQUIRE(run.snapshots.size() == 4);
  CHECK(run.snapshots[1].time() == doctest::Approx(0.04));
  CHECK(run.snapshots[2].time() == doctest::Approx(0.08));
  CHECK(run.snapshots[3].time() == doctest::Approx(0.10));
}

TEST_CASE("property: unitarity over 1e3 steps") {
  const auto g = SpatialGrid::line(512, -32.0, 32.0);
  DoubleSlitGeometry slit;
  slit.separation = 4.0;
  slit.width = 0.5;
  const std::vector<std::pair<WaveField, Potential>> cases{
      {gaussianPacket(g, {0.0, 0.0}, 1.0, {1.0, 0.0}), Potential::free()},
      {coherentState(g, {2.0, 0.0}, 1.0, 1.0), Potential::harmonic(1.0, 1.0)},
      {makeDoubleSlitState(g, slit), Potential::free()},
  };
  for (const auto& [psi0, pot] : cases) {
    const auto run = propagate(psi0, pot, config(1e-3, 1000, 100));
    CHECK(run.normDrift < 1e-10);
  }
  const auto g2 = SpatialGrid::plane({64, 64}, {-16.0, -16.0}, {16.0, 16.0});
  const auto run2 = propagate(gaussianPacket(g2, {0.0, 1.0}, 1.0, {0.5, -0.5}), Potential::harmonic(0.5, 1.0),
                              config(1e-3, 1000, 250));
  CHECK(run2.normDrift < 1e-10);
}

TEST_CASE("property: energy drift below 1e-6 relative over 1e3 steps") {
  const auto g = SpatialGrid::line(512, -16.0, 16.0);
  const auto pot = Potential::harmonic(1.0, 1.0);
  const auto psi0 = coherentState(g, {2.0, 0.0}, 1.0, 1.0, 1.0, {0.5, 0.0});
  const auto run = propagate(psi0, pot, config(1e-3, 1000, 50));
  const double e0 = energyExpectation(psi0, pot, 1.0, 1.0);
  double worst = 0.0;
  for (const auto& s : run.snapshots) worst = std::max(worst, std::abs(energyExpectation(s, pot, 1.0, 1.0) - e0) / e0);
  CHECK(worst < 1e-6);
}

TEST_CASE("property: Strang self-convergence ratio is 4 +- 20%") {
  const auto g = SpatialGrid::line(512, -16.0, 16.0);
  const auto pot = Potential::harmonic(1.0, 1.0);
  const auto psi0 = coherentState(g, {2.0, 0.0}, 1.0, 1.0);
  auto end = [&](double dt) { return propagate(psi0, pot, config(dt, static_cast<std::size_t>(std::lround(1.0 / dt)))).snapshots.back(); };
  const auto a = end(0.02), b = end(0.01), c = end(0.005);
  const double ratio = l2Distance(a, b) / l2Distance(b, c);
  CHECK(ratio > 3.2);
  CHECK(ratio < 4.8);
}

TEST_CASE("property: time reversal returns the initial state") {
  const auto g = SpatialGrid::line(512, -20.0, 20.0);
  const auto pot = Potential::harmonic(0.7, 1.0);
  const auto psi0 = gaussianPacket(g, {1.0, 0.0}, 0.8, {0.7, 0.0});
  const auto fwd = propagate(psi0, pot, config(2e-3, 1000)).snapshots.back();
  const auto back = propagate(fwd.conjugated(), pot, config(2e-3, 1000)).snapshots.back().conjugated();
  CHECK(l2Distance(back, psi0) < 1e-8);
}

TEST_CASE("monitors: aliasing, boundary contact, dt bound") {
  const auto g = SpatialGrid::line(256, -16.0, 16.0);
  const double k_nyq = pi / g.spacing(0);
  const auto fast = gaussianPacket(g, {0.0, 0.0}, 1.0, {0.95 * k_nyq, 0.0});
  CHECK(propagate(fast, Potential::free(), config(1e-3, 2)).hasWarning(WarningKind::Aliasing));
  const auto wide = gaussianPacket(g, {0.0, 0.0}, 4.0);
  CHECK(propagate(wide, Potential::free(), config(1e-3, 2)).hasWarning(WarningKind::BoundaryContact));
  const auto fine = gaussianPacket(g, {0.0, 0.0}, 1.0);
  const auto run = propagate(fine, Potential::free(), config(0.1, 2));
  CHECK(run.hasWarning(WarningKind::DtAboveAliasingBound));
  CHECK_FALSE(run.hasWarning(WarningKind::Aliasing));
  CHECK_FALSE(run.hasWarning(WarningKind::BoundaryContact));
}

TEST_CASE("continuity residual: free Gaussian is second order in dt") {
  const auto g = SpatialGrid::line(512, -32.0, 32.0);
  const auto psi0 = gaussianPacket(g, {0.0, 0.0}, 1.0, {0.5, 0.0});
  const auto mid = propagate(psi0, Potential::free(), config(1e-3, 500)).snapshots.back();
  auto residualAt = [&](double dt) {
    // Three snapshots centred on the same instant; the earlier one by stepping the conjugate.
    const auto before = propagate(mid.conjugated(), Potential::free(), config(dt, 1)).snapshots.back().conjugated();
    std::vector<WaveField> s{before.withTime(mid.time() - dt), mid};
    s.push_back(propagate(mid, Potential::free(), config(dt, 1)).snapshots.back());
    return continuityResidual(s, 1.0, 1.0).front();
  };
  const double r1 = residualAt(1e-3), r2 = residualAt(5e-4);
  CHECK(r1 < 1e-4);
  const double ratio = r1 / r2;
  CHECK(ratio > 3.2);
  CHECK(ratio < 4.8);

  const auto run = propagate(psi0, Potential::free(), config(1e-3, 50, 1));
  for (double r : continuityResidual(run.snapshots, 1.0, 1.0)) CHECK(r < 1e-4);
}

TEST_CASE("continuity residual: stationary and plane-wave states") {
  const auto g = SpatialGrid::line(256, -16.0, 16.0);
  const auto ground = propagate(harmonicGroundState(g, 1.0), Potential::harmonic(1.0, 1.0), config(1e-3, 20, 1));
  for (double r : continuityResidual(ground.snapshots, 1.0, 1.0)) CHECK(r < 1e-8);
  const auto gp = SpatialGrid::line(128, 0.0, 4.0 * pi);
  const auto plane = propagate(planeWave(gp, {2.0, 0.0}), Potential::free(), config(1e-3, 10, 1));
  for (double r : continuityResidual(plane.snapshots, 1.0, 1.0)) CHECK(r < 1e-12);
  CHECK_THROWS_AS(continuityResidual(std::span(plane.snapshots).first(2), 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("double-slit state: two symmetric maxima") {
  const auto g = SpatialGrid::line(1024, -32.0, 32.0);
  DoubleSlitGeometry slit;
  slit.separation = 4.0;
  slit.width = 0.5;
  const auto psi = makeDoubleSlitState(g, slit);
  CHECK(std::abs(psi.norm() - 1.0) < 1e-9);
  const auto rho = density(psi);
  std::size_t maxima = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double l = rho[g.wrap(static_cast<std::ptrdiff_t>(i) - 1, 0)], r = rho[g.wrap(static_cast<std::ptrdiff_t>(i) + 1, 0)];
    if (rho[i] > l && rho[i] >= r && rho[i] > 1e-300) ++maxima;
  }
  CHECK(maxima == 2);
  // Nodes i and n - i mirror each other about q = 0.
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(std::abs(rho[i] - rho[g.size() - i]) <= 1e-12);
}

TEST_CASE("double-slit far field fringe spacing") {
  const auto g = SpatialGrid::line(2048, -128.0, 128.0);
  DoubleSlitGeometry slit;
  slit.separation = 8.0;
  slit.width = 0.5;
  const double t = 10.0;
  const auto run = propagate(makeDoubleSlitState(g, slit), Potential::free(), config(2.5e-3, 4000));
  CHECK(run.maxEdgeAmplitude < kEdgeAmplitudeLimit);
  const auto rho = density(run.snapshots.back());
  const auto p = peaks(g, rho.values(), -15.0, 15.0);
  REQUIRE(p.size() >= 3);
  const double spacing = (p.back() - p.front()) / static_cast<double>(p.size() - 1);
  const double farField = 2.0 * pi * t / slit.separation;
  CHECK(std::abs(spacing - farField) / farField < 0.05);
  // Closed-form superposition of the two spreading packets, same peak finder.
  oracle::FreeGaussian up{slit.width, 0.5 * slit.separation}, down{slit.width, -0.5 * slit.separation};
  std::vector<double> exact_rho(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    exact_rho[i] = std::norm(up.psi(g.coord(0, i), t) + down.psi(g.coord(0, i), t));
  const auto q = peaks(g, exact_rho, -15.0, 15.0);
  REQUIRE(q.size() == p.size());
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(std::abs(p[i] - q[i]) < 1e-6);
}

TEST_CASE("double-slit state: degenerate and invalid geometries") {
  const auto g = SpatialGrid::line(512, -32.0, 32.0);
  DoubleSlitGeometry slit;
  slit.width = 0.5;
  slit.separation = 0.0;
  const auto rho = density(makeDoubleSlitState(g, slit));
  // Single Gaussian: rises to the centre, then falls.
  const std::size_t c = g.size() / 2;
  for (std::size_t i = 1; i <= c; ++i) CHECK(rho[i] >= rho[i - 1]);
  for (std::size_t i = c + 1; i < g.size(); ++i) CHECK(rho[i] <= rho[i - 1]);

  slit.width = 0.1;
  slit.separation = 4.0;
  CHECK_THROWS_AS(makeDoubleSlitState(g, slit), GridTooCoarseError);
  slit.width = 0.5;
  slit.separation = 0.4;
  CHECK_THROWS_AS(makeDoubleSlitState(g, slit), std::invalid_argument);
}

TEST_CASE("2D double slit: forward momentum on axis 0, fringes on axis 1") {
  const auto g = SpatialGrid::plane({64, 128}, {-16.0, -32.0}, {16.0, 32.0});
  DoubleSlitGeometry slit;
  slit.separation = 4.0;
  slit.width = 1.0;
  slit.forwardMomentum = 1.5;
  slit.forwardWidth = 2.0;
  const auto psi = makeDoubleSlitState(g, slit);
  CHECK(std::abs(psi.norm() - 1.0) < 1e-9);
  const auto run = propagate(psi, Potential::free(), config(1e-2, 200));
  // The packet centre moves along axis 0 only.
  double m0 = 0.0, m1 = 0.0, w = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = std::norm(run.snapshots.back()[i]);
    m0 += r * g.node(i)[0];
    m1 += r * g.node(i)[1];
    w += r;
  }
  CHECK(m0 / w == doctest::Approx(1.5 * 2.0).epsilon(1e-3));
  CHECK(std::abs(m1 / w) < 1e-10);
}
