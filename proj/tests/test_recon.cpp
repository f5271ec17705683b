#include <doctest.h>

#include <cmath>

#include "bohmlab/classical/classical.hpp"
#include "bohmlab/errors.hpp"
#include "bohmlab/recon/reconstruction.hpp"
#include "bohmlab/schrodinger/propagator.hpp"
#include "bohmlab/schrodinger/states.hpp"
#include "oracles.hpp"

using namespace bohmlab;
using oracle::pi;

namespace {

GuidanceField evolve(const WaveField& psi0, const Potential& pot, double T) {
  PropagatorConfig c;
  c.dt = 1e-3;
  c.steps = static_cast<std::size_t>(std::lround(T / c.dt));
  c.snapshotStride = 10;
  return GuidanceField(propagate(psi0, pot, c).snapshots, 1.0, 1.0);
}

const GuidanceField& freeGaussian() {
  static const GuidanceField g =
      evolve(gaussianPacket(SpatialGrid::line(2048, -24.0, 24.0), {0.0, 0.0}, 1.0, {0.5, 0.0}), Potential::free(), 1.0);
  return g;
}

TrajectoryConfig recordAtSnapshots() {
  TrajectoryConfig c;
  c.dt = 0.005;
  return c;
}

}  // namespace

TEST_CASE("classical reconstruction: free particle P = 2 gives S(t) = 2t") {
  ClassicalState s;
  s.action = ActionField::planeWave({2.0, 0.0}, 1.0);
  const auto tr = classicalTrajectory(s, 1.0, 0.01);
  const auto S = classicalReconstructAlongC(tr, Potential::free(), 1.0, 0.0);
  CHECK(std::abs(S.back() - 2.0) < 1e-8);
  // Against S1(Q(t), t) - S1(Q0, 0) on the line.
  for (std::size_t i = 0; i < S.size(); ++i) {
    const double t = tr.times[i], q = tr.positions[i][0];
    CHECK(std::abs(S[i] - ((2.0 * q - 2.0 * t) - 0.0)) < 1e-8);
  }
}

TEST_CASE("classical reconstruction: a particle at rest keeps S constant") {
  ClassicalState s;
  s.Q0 = {1.3, 0.0};
  s.P0 = Point{0.0, 0.0};
  const auto S = classicalReconstructAlongC(classicalTrajectory(s, 2.0, 0.1), Potential::free(), 1.0, 0.75);
  for (double v : S) CHECK(v == 0.75);
}

TEST_CASE("classical reconstruction: harmonic motion matches the Lagrangian integral") {
  // x = cos t, v = -sin t, L = (sin^2 t - cos^2 t)/2, so int_0^T L = -sin(2T)/4.
  ClassicalState s;
  s.Q0 = {1.0, 0.0};
  s.P0 = Point{0.0, 0.0};
  const auto pot = Potential::harmonic(1.0, 1.0);
  const auto tr = classicalTrajectory(s, 2.0, 0.001, 1.0, pot);
  const auto S = classicalReconstructAlongC(tr, pot, 1.0, 0.0);
  CHECK(std::abs(S.back() + std::sin(4.0) / 4.0) < 1e-5);
}

TEST_CASE("reconstruction: one trajectory is not enough") {
  for (int k : {0, 1}) {
    const auto b = makeBundle(freeGaussian(), 0.7, k, 0.1, recordAtSnapshots());
    CHECK(b.members.size() == static_cast<std::size_t>(2 * k + 1));
    CHECK_THROWS_AS(reconstructAlongC(b, Potential::free(), 1.0, 1.0, 0.0), InsufficientBundleError);
  }
}

TEST_CASE("property: classical reconstruction succeeds where the quantum one needs a bundle") {
  ClassicalState s;
  s.Q0 = {0.7, 0.0};
  s.action = ActionField::planeWave({0.5, 0.0}, 1.0);
  CHECK_NOTHROW(classicalReconstructAlongC(classicalTrajectory(s, 1.0, 0.01), Potential::free(), 1.0, 0.0));
  const auto single = makeBundle(freeGaussian(), 0.7, 0, 0.0, recordAtSnapshots());
  CHECK_THROWS_AS(reconstructAlongC(single, Potential::free(), 1.0, 1.0, 0.0), InsufficientBundleError);
}

TEST_CASE("reconstruction: free Gaussian, k = 4, delta = 0.05 tracks the solver's S and R") {
  const auto b = makeBundle(freeGaussian(), 0.7, 4, 0.05, recordAtSnapshots());
  const auto oracle = solverAlongC(freeGaussian(), b.center());
  REQUIRE(oracle.times.size() == b.center().times.size());
  const auto rec = reconstructAlongC(b, Potential::free(), 1.0, 1.0, oracle.S.front());
  CHECK(relativeWindowError(rec.S, oracle.S) < 1e-2);
  for (std::size_t i = 0; i < rec.R.size(); ++i) CHECK(std::abs(rec.R[i] - oracle.R[i]) < 0.05 * oracle.R[i]);
  // Independent check: the analytic U of the free Gaussian along the analytic path.
  const oracle::FreeGaussian fg{1.0, 0.0, 0.5};
  for (std::size_t i = 0; i < rec.times.size(); i += 10) {
    const double t = rec.times[i], w = fg.width(t), q = b.center().positions[i][0] - fg.centre(t);
    CHECK(std::abs(rec.quantumPotential[i] - oracle::gaussianQuantumPotential(q, w)) < 1e-2);
    CHECK(std::abs(rec.velocity[i] - fg.velocity(b.center().positions[i][0], t)) < 1e-4);
  }
}

TEST_CASE("reconstruction: plane wave is exact for any k >= 2") {
  const auto g = SpatialGrid::line(512, 0.0, 8.0 * pi);
  const auto field = evolve(planeWave(g, {1.5, 0.0}), Potential::free(), 1.0);
  for (int k : {2, 3, 5}) {
    const auto b = makeBundle(field, 3.0, k, 0.2, recordAtSnapshots());
    const auto rec = reconstructAlongC(b, Potential::free(), 1.0, 1.0, 0.0);
    for (std::size_t i = 0; i < rec.times.size(); ++i) {
      CHECK(std::abs(rec.S[i] - 1.125 * rec.times[i]) < 1e-8);
      CHECK(std::abs(rec.R[i] - b.amplitude0[static_cast<std::size_t>(k)]) < 1e-8);
      CHECK(std::abs(rec.quantumPotential[i]) < 1e-6);
    }
  }
}

TEST_CASE("reconstruction: crossing neighbours are detected") {
  Bundle b;
  b.k = 2;
  b.delta = 0.1;
  for (int j = -2; j <= 2; ++j) {
    Trajectory tr;
    tr.times = {0.0, 0.5, 1.0};
    const double x = 0.1 * j;
    // Member +1 overtakes member +2 at t = 1.
    const double late = j == 1 ? 0.5 : x;
    tr.positions = {{x, 0.0}, {x, 0.0}, {late, 0.0}};
    b.members.push_back(tr);
    b.amplitude0.push_back(1.0);
  }
  CHECK_THROWS_AS(reconstructAlongC(b, Potential::free(), 1.0, 1.0, 0.0), BundleCrossingError);
}

TEST_CASE("bundle convergence: free Gaussian error falls over delta = 0.2, 0.1, 0.05") {
  ReconstructionScenario sc;
  sc.guidance = &freeGaussian();
  sc.q0 = 0.7;
  sc.trajectory = recordAtSnapshots();
  const auto rows = bundleConvergence(sc, 4, {0.2, 0.1, 0.05});
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].errS < rows[0].errS);
  CHECK(rows[2].errS < rows[1].errS);
  // The free flow map is linear in the start point, so dx/dx0 (and R) is exact at every delta.
  for (const auto& r : rows) CHECK(r.errR < 1e-6);
  // Second-order stencils.
  CHECK(rows[0].slope == doctest::Approx(2.0).epsilon(0.25));
  for (const auto& r : rows) CHECK(r.slope == rows[0].slope);
  CHECK_THROWS_AS(bundleConvergence(sc, 4, {0.1, 0.2}), std::invalid_argument);
  CHECK_THROWS_AS(bundleConvergence(sc, 4, {0.01}), std::invalid_argument);
}

TEST_CASE("bundle convergence: plane wave sits at the floor for every delta") {
  const auto g = SpatialGrid::line(512, 0.0, 8.0 * pi);
  const auto field = evolve(planeWave(g, {1.5, 0.0}), Potential::free(), 1.0);
  ReconstructionScenario sc;
  sc.guidance = &field;
  sc.q0 = 3.0;
  sc.trajectory = recordAtSnapshots();
  for (const auto& r : bundleConvergence(sc, 4, {0.4, 0.2, 0.1})) {
    CHECK(r.errS < 1e-8);
    CHECK(r.errR < 1e-8);
  }
}

TEST_CASE("bundle convergence: harmonic coherent state error falls with delta") {
  const auto g = SpatialGrid::line(2048, -16.0, 16.0);
  const auto pot = Potential::harmonic(1.0, 1.0);
  const auto field = evolve(coherentState(g, {1.5, 0.0}, 1.0, 1.0, 1.0, {0.0, 0.0}), pot, 1.0);
  // A coherent state keeps its width, so use a squeezed packet to give U time dependence.
  const auto squeezed = evolve(gaussianPacket(g, {1.5, 0.0}, 0.5), pot, 1.0);
  for (const auto* f : {&field, &squeezed}) {
    ReconstructionScenario sc;
    sc.guidance = f;
    sc.potential = pot;
    sc.q0 = 2.0;
    sc.trajectory = recordAtSnapshots();
    const auto rows = bundleConvergence(sc, 4, {0.2, 0.1, 0.05});
    CHECK(rows[1].errS < rows[0].errS);
    CHECK(rows[2].errS < rows[1].errS);
  }
}
