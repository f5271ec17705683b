#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "bohmlab/errors.hpp"
#include "bohmlab/kernels/ensemble_kernels.hpp"
#include "bohmlab/kernels/guidance_kernels.hpp"
#include "bohmlab/schrodinger/propagator.hpp"
#include "bohmlab/schrodinger/states.hpp"
#include "bohmlab/traj/divergence.hpp"
#include "bohmlab/traj/ensemble.hpp"
#include "bohmlab/traj/statistics.hpp"
#include "oracles.hpp"

using namespace bohmlab;
using oracle::pi;

namespace {

std::vector<WaveField> evolve(const WaveField& psi0, const Potential& pot, double dt, double T, std::size_t stride) {
  PropagatorConfig c;
  c.dt = dt;
  c.steps = static_cast<std::size_t>(std::lround(T / dt));
  c.snapshotStride = stride;
  return propagate(psi0, pot, c).snapshots;
}

TrajectoryConfig trajConfig(double dt) {
  TrajectoryConfig c;
  c.dt = dt;
  return c;
}

// Free Gaussian guidance, sigma0 = 1, t in [0, 2].
const GuidanceField& freeGaussianGuidance() {
  static const GuidanceField field = [] {
    const auto g = SpatialGrid::line(1024, -32.0, 32.0);
    return GuidanceField(evolve(gaussianPacket(g, {0.0, 0.0}, 1.0), Potential::free(), 1e-3, 2.0, 10), 1.0, 1.0);
  }();
  return field;
}

WaveField firstExcited(const SpatialGrid& g) {
  std::vector<Complex> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double q = g.coord(0, i);
    v[i] = q * std::exp(-q * q / 2.0);
  }
  return WaveField::normalized(g, std::move(v));
}

}  // namespace

TEST_CASE("velocityAt: plane wave moves at p/m") {
  const auto g = SpatialGrid::line(128, 0.0, 4.0 * pi);
  const auto psi = planeWave(g, {2.0, 0.0});
  for (double q : {0.1, 1.234, 7.7, 12.5}) {
    CHECK(std::abs(velocityAt(psi, {q, 0.0}, 1.0, 1.0)[0] - 2.0) < 1e-9);
    CHECK(std::abs(velocityAt(toPolar(psi), {q, 0.0}, 1.0)[0] - 2.0) < 1e-9);
  }
}

TEST_CASE("velocityAt: real Gaussian is at rest") {
  const auto g = SpatialGrid::line(256, -16.0, 16.0);
  const auto psi = gaussianPacket(g, {0.3, 0.0}, 1.0);
  for (double q : {-2.0, 0.0, 0.77, 3.1}) CHECK(std::abs(velocityAt(psi, {q, 0.0}, 1.0, 1.0)[0]) < 1e-14);
}

TEST_CASE("velocityAt: spreading Gaussian follows q t / (4 sigma0^4 + t^2)") {
  const auto g = SpatialGrid::line(1024, -32.0, 32.0);
  const oracle::FreeGaussian fg;
  for (double t : {0.5, 1.0, 2.0}) {
    const auto psi = oracle::sampled(g, fg, t);
    for (double q : {-3.0, -1.1, 0.4, 2.5}) {
      const double v = velocityAt(psi, {q, 0.0}, 1.0, 1.0)[0];
      const double exact = q * t / (4.0 + t * t);
      CHECK(std::abs(v - exact) <= 1e-4 * std::abs(exact));
    }
  }
}

TEST_CASE("velocityAt: node proximity is reported") {
  const auto g = SpatialGrid::line(256, -16.0, 16.0);
  const auto psi = firstExcited(g);
  CHECK_THROWS_AS(velocityAt(psi, {0.0, 0.0}, 1.0, 1.0), NodeProximityError);
  CHECK_NOTHROW(velocityAt(psi, {1.0, 0.0}, 1.0, 1.0));
}

TEST_CASE("property: velocity from Im(grad psi / psi) equals grad S / m off nodes") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> where(-4.0, 4.0);
  // Two moving packets with distinct momenta: nontrivial phase, no nodes in the bulk.
  // The masked route is an 8th-order stencil, so the grid must resolve the interference phase.
  const auto g = SpatialGrid::line(4096, -32.0, 32.0);
  std::vector<Complex> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double q = g.coord(0, i);
    v[i] = std::exp(-q * q / 8.0) * std::polar(1.0, 1.3 * q) + 0.3 * std::exp(-(q - 1) * (q - 1) / 6.0) * std::polar(1.0, -0.4 * q);
  }
  const auto psi = WaveField::normalized(g, v);
  const auto polar = toPolar(psi);
  for (int k = 0; k < 50; ++k) {
    const Point q{where(rng), 0.0};
    const double a = velocityAt(psi, q, 1.0, 1.0)[0];
    const double b = velocityAt(polar, q, 1.0)[0];
    CHECK(std::abs(a - b) < 1e-8);
  }
  // 2D version.
  const auto g2 = SpatialGrid::plane({256, 256}, {-12.0, -12.0}, {12.0, 12.0});
  std::vector<Complex> w(g2.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Point q = g2.node(i);
    w[i] = std::exp(-(q[0] * q[0] + q[1] * q[1]) / 8.0) * std::polar(1.0, 0.7 * q[0] - 0.2 * q[1] + 0.05 * q[0] * q[1]);
  }
  const auto psi2 = WaveField::normalized(g2, w);
  const auto polar2 = toPolar(psi2);
  for (int k = 0; k < 20; ++k) {
    const Point q{0.5 * where(rng), 0.5 * where(rng)};
    const auto a = velocityAt(psi2, q, 1.0, 1.0);
    const auto b = velocityAt(polar2, q, 1.0);
    CHECK(std::abs(a[0] - b[0]) < 1e-8);
    CHECK(std::abs(a[1] - b[1]) < 1e-8);
  }
}

TEST_CASE("trajectory: plane wave travels in a straight line") {
  const auto g = SpatialGrid::line(128, 0.0, 4.0 * pi);
  const GuidanceField field(evolve(planeWave(g, {2.0, 0.0}), Potential::free(), 1e-3, 1.0, 50), 1.0, 1.0);
  const auto tr = integrateTrajectory(field, {0.5, 0.0}, trajConfig(0.01));
  CHECK_FALSE(tr.halted());
  CHECK(tr.times.back() == doctest::Approx(1.0));
  CHECK(std::abs(tr.end()[0] - 2.5) < 1e-8);
}

TEST_CASE("trajectory: stationary real state keeps particles still") {
  const auto g = SpatialGrid::line(256, -16.0, 16.0);
  std::vector<Complex> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = oracle::harmonicGround(g.coord(0, i), 1.0);
  const auto psi = WaveField::normalized(g, v);
  const GuidanceField field(evolve(psi, Potential::harmonic(1.0, 1.0), 1e-3, 2.0, 20), 1.0, 1.0);
  for (double x0 : {-1.5, 0.0, 0.3, 2.2}) {
    // The split-step stationary state differs from the sampled one at O(dt^2),
    // which leaves a residual current of that size.
    const auto tr = integrateTrajectory(field, {x0, 0.0}, trajConfig(0.02));
    for (const auto& p : tr.positions) CHECK(std::abs(p[0] - x0) < 1e-6);
  }
  // A single snapshot is a stationary field valid at any time.
  const GuidanceField still({psi}, 1.0, 1.0);
  TrajectoryConfig c = trajConfig(0.1);
  c.recordTimes = {0.0, 5.0};
  CHECK(std::abs(integrateTrajectory(still, {0.7, 0.0}, c).end()[0] - 0.7) < 1e-14);
}

TEST_CASE("trajectory: free Gaussian from sigma0 reaches sigma(2) = sqrt(2)") {
  const auto tr = integrateTrajectory(freeGaussianGuidance(), {1.0, 0.0}, trajConfig(0.01));
  CHECK(std::abs(tr.end()[0] - std::sqrt(2.0)) < 1e-3);
  const oracle::FreeGaussian fg;
  for (std::size_t k = 0; k < tr.times.size(); ++k)
    CHECK(std::abs(tr.positions[k][0] - fg.trajectory(1.0, tr.times[k])) < 1e-3);
}

TEST_CASE("trajectory: RK4 step error is negligible next to the field error") {
  const oracle::FreeGaussian fg;
  auto end = [&](double dt) { return integrateTrajectory(freeGaussianGuidance(), {2.0, 0.0}, trajConfig(dt)).end()[0]; };
  const double coarse = end(0.01), fine = end(0.001);
  // Refining the step by 10x barely moves the endpoint; what remains is field discretization.
  CHECK(std::abs(coarse - fine) < 1e-10);
  CHECK(std::abs(fine - fg.trajectory(2.0, 2.0)) < 1e-7);
}

TEST_CASE("trajectory: config validation") {
  const auto& field = freeGaussianGuidance();
  CHECK_THROWS_AS(integrateTrajectory(field, {0.0, 0.0}, trajConfig(0.0)), std::invalid_argument);
  CHECK_THROWS_AS(integrateTrajectory(field, {0.0, 0.0}, trajConfig(0.02)), std::invalid_argument);
  TrajectoryConfig c = trajConfig(0.01);
  c.recordTimes = {0.0, 3.0};
  CHECK_THROWS_AS(integrateTrajectory(field, {0.0, 0.0}, c), std::invalid_argument);
  c.recordTimes = {0.5, 0.2};
  CHECK_THROWS_AS(integrateTrajectory(field, {0.0, 0.0}, c), std::invalid_argument);
}

TEST_CASE("trajectory: a start on a node halts instead of throwing") {
  const auto g = SpatialGrid::line(256, -16.0, 16.0);
  const GuidanceField field({firstExcited(g)}, 1.0, 1.0);
  TrajectoryConfig c = trajConfig(0.1);
  c.recordTimes = {0.0, 1.0};
  Trajectory tr;
  CHECK_NOTHROW(tr = integrateTrajectory(field, {0.0, 0.0}, c));
  CHECK(tr.halted());
  CHECK(tr.haltTime == 0.0);
  CHECK(tr.positions.size() == 1);
}

TEST_CASE("trajectory: running into a moving node halts at that time") {
  // (phi0 + phi1) / sqrt(2) in a harmonic well: the node starts at -1/sqrt(2) and moves off.
  const auto g = SpatialGrid::line(256, -12.0, 12.0);
  std::vector<Complex> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double q = g.coord(0, i);
    v[i] = std::exp(-q * q / 2.0) * (1.0 + std::sqrt(2.0) * q);
  }
  PropagatorConfig pc;
  pc.dt = 1e-3;
  pc.steps = 4000;
  pc.snapshotStride = 10;
  const GuidanceField field(propagate(WaveField::normalized(g, v), Potential::harmonic(1.0, 1.0), pc).snapshots, 1.0, 1.0, 0.01);
  const auto tr = integrateTrajectory(field, {-0.66, 0.0}, trajConfig(0.01));
  REQUIRE(tr.halted());
  CHECK(tr.status == TrajectoryStatus::HaltedAtNode);
  CHECK(tr.haltTime > 0.0);
  CHECK(tr.haltTime < 4.0);
  CHECK(tr.times.back() == tr.haltTime);
  CHECK(tr.positions.size() == tr.times.size());
  for (std::size_t i = 1; i < tr.times.size(); ++i) CHECK(tr.times[i] > tr.times[i - 1]);
  // Far from the node nothing halts.
  CHECK_FALSE(integrateTrajectory(field, {1.5, 0.0}, trajConfig(0.01)).halted());
}

TEST_CASE("sampling: piecewise-linear quantile inverts the CDF") {
  const auto g = SpatialGrid::line(64, -4.0, 4.0);
  std::vector<double> rho(g.size());
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = 1.0 + std::sin(g.coord(0, i)) * 0.8 + (i % 3 == 0 ? 0.5 : 0.0);
  const PiecewiseLinearDensity1D d(g, rho);
  for (double u = 0.001; u < 1.0; u += 0.0137) CHECK(d.cdf(d.quantile(u)) == doctest::Approx(u).epsilon(1e-12));
  CHECK(d.cdf(d.lower()) == 0.0);
}

TEST_CASE("sampling: Born draws pass chi-square against |psi0|^2 for N = 1e4") {
  const auto g = SpatialGrid::line(1024, -32.0, 32.0);
  const auto psi = gaussianPacket(g, {0.5, 0.0}, 1.3);
  const auto ens = bornEnsemble(psi, 10000, 42);
  std::vector<double> x;
  for (const auto& p : ens.starts()) x.push_back(p[0]);
  const auto rho = density(psi);
  const auto gof = chiSquareGof(x, PiecewiseLinearDensity1D(g, rho.values()));
  CHECK(gof.pValue > 0.01);
  CHECK(ksStatistic(ens.starts(), psi) < 0.02);
  // A shifted reference is clearly rejected.
  const auto other = density(gaussianPacket(g, {1.0, 0.0}, 1.3));
  CHECK(chiSquareGof(x, PiecewiseLinearDensity1D(g, other.values())).pValue < 1e-6);
}

TEST_CASE("sampling: 2D rejection sampler matches both marginals") {
  const auto g = SpatialGrid::plane({64, 64}, {-8.0, -8.0}, {8.0, 8.0});
  const auto psi = gaussianPacket(g, {1.0, -0.5}, 1.0, {0.4, 0.2});
  const auto ens = bornEnsemble(psi, 10000, 7);
  const auto pts = ens.starts();
  CHECK(ksStatistic(pts, psi, 0) < 0.02);
  CHECK(ksStatistic(pts, psi, 1) < 0.02);
}

TEST_CASE("sampling is seeded, reproducible, and independent of execution mode") {
  const auto g = SpatialGrid::line(256, -16.0, 16.0);
  const auto psi = gaussianPacket(g, {0.0, 0.0}, 1.0);
  const auto a = bornEnsemble(psi, 2000, 99, Execution::Serial).starts();
  const auto b = bornEnsemble(psi, 2000, 99, Execution::Parallel).starts();
  const auto c = bornEnsemble(psi, 2000, 100, Execution::Serial).starts();
  CHECK(a == b);
  CHECK(a != c);
  // Prefix stability: draw i does not depend on N.
  const auto d = bornEnsemble(psi, 500, 99).starts();
  CHECK(std::equal(d.begin(), d.end(), a.begin()));
  const auto u = uniformEnsemble(g, 1000, 3);
  for (const auto& p : u.starts()) CHECK((p[0] >= -16.0 && p[0] < 16.0));
}

TEST_CASE("ensemble: empty in, empty out") {
  const Ensemble empty = explicitEnsemble({}, 1);
  const auto out = propagateEnsemble(freeGaussianGuidance(), empty, trajConfig(0.01));
  CHECK(out.empty());
  CHECK(out.haltedFraction() == 0.0);
}

TEST_CASE("ensemble: equivariance, KS < 0.02 against |psi_T|^2 at every snapshot") {
  const auto& field = freeGaussianGuidance();
  const auto ens0 = bornEnsemble(field.snapshots().front(), 10000, 42);
  TrajectoryConfig c = trajConfig(0.01);
  c.recordTimes = {0.0, 0.5, 1.0, 1.5, 2.0};
  const auto ens = propagateEnsemble(field, ens0, c);
  CHECK(ens.haltedFraction() == 0.0);
  for (double t : c.recordTimes) {
    const auto& snaps = field.snapshots();
    const auto it = std::find_if(snaps.begin(), snaps.end(), [&](const auto& s) { return std::abs(s.time() - t) < 1e-9; });
    REQUIRE(it != snaps.end());
    const auto pts = ens.positionsAt(t);
    CHECK(pts.size() == 10000);
    CHECK(ksStatistic(pts, *it) < 0.02);
  }
  // The same endpoint against the closed-form CDF.
  const oracle::FreeGaussian fg;
  double d = 0.0;
  auto x = ens.positionsAt(2.0);
  std::sort(x.begin(), x.end(), [](const Point& a, const Point& b) { return a[0] < b[0]; });
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = fg.cdf(x[i][0], 2.0);
    d = std::max({d, (i + 1.0) / x.size() - f, f - static_cast<double>(i) / x.size()});
  }
  CHECK(d < 0.02);
}

TEST_CASE("ensemble: serial and parallel kernels agree bit for bit") {
  const auto& field = freeGaussianGuidance();
  const auto ens0 = bornEnsemble(field.snapshots().front(), 300, 5);
  const auto a = propagateEnsemble(field, ens0, trajConfig(0.01), Execution::Serial);
  const auto b = propagateEnsemble(field, ens0, trajConfig(0.01), Execution::Parallel);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.trajectories[i].times == b.trajectories[i].times);
    CHECK(a.trajectories[i].positions == b.trajectories[i].positions);
  }
  const auto fs = kernels::velocityFrames(field.snapshots(), 1.0, 1.0, kDefaultNodeEps, Execution::Serial);
  const auto fp = kernels::velocityFrames(field.snapshots(), 1.0, 1.0, kDefaultNodeEps, Execution::Parallel);
  REQUIRE(fs.size() == fp.size());
  for (std::size_t i = 0; i < fs.size(); ++i) CHECK(fs[i].velocity[0] == fp[i].velocity[0]);
}

TEST_CASE("property: 1D no-crossing, order of 100 trajectories preserved") {
  const auto g = SpatialGrid::line(2048, -64.0, 64.0);
  DoubleSlitGeometry slit;
  slit.separation = 6.0;
  slit.width = 0.5;
  const GuidanceField field(evolve(makeDoubleSlitState(g, slit), Potential::free(), 2.5e-3, 4.0, 4), 1.0, 1.0);
  const auto ens = propagateEnsemble(field, bornEnsemble(field.snapshots().front(), 100, 11), trajConfig(0.01));
  std::vector<std::size_t> order(ens.size());
  std::iota(order.begin(), order.end(), 0);
  auto at = [&](std::size_t i, std::size_t k) { return ens.trajectories[i].positions[k][0]; };
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return at(a, 0) < at(b, 0); });
  const std::size_t steps = ens.trajectories.front().times.size();
  for (std::size_t k = 1; k < steps; ++k) {
    std::vector<std::size_t> live;
    for (auto i : order)
      if (ens.trajectories[i].positions.size() > k) live.push_back(i);
    for (std::size_t j = 1; j < live.size(); ++j) CHECK(at(live[j - 1], k) < at(live[j], k));
  }
}

TEST_CASE("double slit: no trajectory crosses the symmetry axis (N = 1e4)") {
  const auto g = SpatialGrid::line(2048, -128.0, 128.0);
  DoubleSlitGeometry slit;
  slit.separation = 8.0;
  slit.width = 0.5;
  const GuidanceField field(evolve(makeDoubleSlitState(g, slit), Potential::free(), 2.5e-3, 10.0, 4), 1.0, 1.0);
  TrajectoryConfig c = trajConfig(0.01);
  c.recordSubsteps = true;
  const auto ens = propagateEnsemble(field, bornEnsemble(field.snapshots().front(), 10000, 42), c);
  std::size_t crossed = 0;
  for (const auto& tr : ens.trajectories) {
    const double side = std::copysign(1.0, tr.start()[0]);
    for (const auto& p : tr.positions)
      if (p[0] * side < 0.0) {
        ++crossed;
        break;
      }
  }
  CHECK(crossed == 0);
  CHECK(ksStatistic(ens.positionsAt(10.0), field.snapshots().back()) < 0.02);
}

TEST_CASE("property: global phase leaves trajectories unchanged (1e-10)") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
  const auto g = SpatialGrid::line(512, -32.0, 32.0);
  const auto psi0 = gaussianPacket(g, {0.0, 0.0}, 1.0, {0.8, 0.0});
  const GuidanceField base(evolve(psi0, Potential::free(), 2e-3, 1.0, 5), 1.0, 1.0);
  for (int k = 0; k < 5; ++k) {
    const GuidanceField rot(evolve(psi0.rotated(angle(rng)), Potential::free(), 2e-3, 1.0, 5), 1.0, 1.0);
    for (double x0 : {-1.0, 0.2, 1.5}) {
      const auto a = integrateTrajectory(base, {x0, 0.0}, trajConfig(0.01));
      const auto b = integrateTrajectory(rot, {x0, 0.0}, trajConfig(0.01));
      for (std::size_t i = 0; i < a.positions.size(); ++i) CHECK(std::abs(a.positions[i][0] - b.positions[i][0]) < 1e-10);
    }
  }
}

TEST_CASE("divergence: different widths at rest separate, identical or phase-shifted copies do not") {
  const auto g = SpatialGrid::line(1024, -32.0, 32.0);
  const auto narrow = gaussianPacket(g, {0.0, 0.0}, 1.0);
  const auto wide = gaussianPacket(g, {0.0, 0.0}, 2.0);
  const GuidanceField a(evolve(narrow, Potential::free(), 1e-3, 2.0, 10), 1.0, 1.0);
  const GuidanceField b(evolve(wide, Potential::free(), 1e-3, 2.0, 10), 1.0, 1.0);
  const auto r = divergenceExperiment(a, b, {1.0, 0.0}, trajConfig(0.01));
  CHECK(r.initialGradientGap < kPreparationTolerance);
  CHECK(r.finalSeparation() > 0.1);
  // Oracle: each follows its own width scaling.
  const oracle::FreeGaussian fa{1.0}, fb{2.0};
  CHECK(r.finalSeparation() == doctest::Approx(std::abs(fa.trajectory(1.0, 2.0) - fb.trajectory(1.0, 2.0))).epsilon(1e-3));

  const auto same = divergenceExperiment(a, a, {1.0, 0.0}, trajConfig(0.01));
  for (double s : same.separation) CHECK(s == 0.0);
  const GuidanceField c(evolve(narrow.rotated(1.234), Potential::free(), 1e-3, 2.0, 10), 1.0, 1.0);
  const auto phased = divergenceExperiment(a, c, {1.0, 0.0}, trajConfig(0.01));
  for (double s : phased.separation) CHECK(s < 1e-10);
}

TEST_CASE("divergence: mismatched initial gradient is rejected") {
  const auto g = SpatialGrid::line(512, -32.0, 32.0);
  const GuidanceField a(evolve(gaussianPacket(g, {0.0, 0.0}, 1.0), Potential::free(), 1e-3, 0.1, 10), 1.0, 1.0);
  const GuidanceField b(evolve(gaussianPacket(g, {0.0, 0.0}, 1.0, {0.01, 0.0}), Potential::free(), 1e-3, 0.1, 10), 1.0, 1.0);
  CHECK_THROWS_AS(divergenceExperiment(a, b, {0.5, 0.0}, trajConfig(0.01)), PreparationMismatchError);
}
