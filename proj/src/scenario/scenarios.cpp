#include "scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "bohmlab/classical/classical.hpp"
#include "bohmlab/classical/semiclassical.hpp"
#include "bohmlab/classical/transport.hpp"
#include "bohmlab/recon/reconstruction.hpp"
#include "bohmlab/scenario/output.hpp"
#include "bohmlab/schrodinger/continuity.hpp"
#include "bohmlab/schrodinger/propagator.hpp"
#include "bohmlab/schrodinger/states.hpp"
#include "bohmlab/traj/divergence.hpp"
#include "bohmlab/traj/ensemble.hpp"
#include "bohmlab/traj/statistics.hpp"

namespace bohmlab::scenario::builtin {

namespace {

// Thresholds every run is judged against.
constexpr double kNormDriftBound = 1e-10;
constexpr double kWidthRelBound = 1e-4;
constexpr double kKsBound = 0.02;
constexpr double kHollandBound = 1e-8;
constexpr double kHjResidualBound = 1e-10;
constexpr double kDivergenceBound = 0.1;
constexpr double kClassicalPairBound = 1e-8;
constexpr double kClassicalReconBound = 1e-8;
constexpr double kReconErrorBound = 1e-2;
constexpr double kContinuityBound = 1e-4;
constexpr double kRatioLow = 3.2, kRatioHigh = 4.8;
// Histogram fringes below this fraction of the tallest |psi_T|^2 peak are not required to show.
constexpr double kFringeFloor = 0.1;

struct Steps {
  double dt = 0.0;
  double T = 0.0;
  std::size_t stride = 1;
  std::size_t count = 0;

  PropagatorConfig propagator(const PhysicsSpec& p) const {
    PropagatorConfig c;
    c.dt = dt;
    c.steps = count;
    c.snapshotStride = stride;
    c.hbar = p.hbar;
    c.mass = p.mass;
    return c;
  }
};

std::size_t wholeSteps(const ConfigReader& r, const std::string& key, double span, double dt) {
  const double n = span / dt;
  const auto count = static_cast<std::size_t>(std::llround(n));
  if (count == 0 || std::abs(n - static_cast<double>(count)) > 1e-9 * std::max(1.0, n))
    r.fail(key, "must be a whole number of dt steps");
  if (count > 10'000'000) r.fail(key, "more than 1e7 steps");
  return count;
}

Steps readSteps(const ConfigReader& run) {
  Steps s;
  s.dt = run.positive("dt");
  s.T = run.positive("T");
  s.stride = static_cast<std::size_t>(run.integer("snapshotStride", 1));
  s.count = wholeSteps(run, "T", s.T, s.dt);
  return s;
}

double readTrajectoryDt(const ConfigReader& run, const Steps& s) {
  const double h = run.positive("dtTraj");
  const double spacing = s.dt * static_cast<double>(std::min(s.stride, s.count));
  if (h > spacing * (1.0 + 1e-12)) run.fail("dtTraj", "must not exceed the snapshot spacing dt * snapshotStride");
  return h;
}

struct Packet {
  double center = 0.0;
  double sigma = 0.0;
  double momentum = 0.0;
};

Packet readPacket(const ConfigReader& state, const GridSpec& grid, bool needSigma = true) {
  Packet p;
  p.center = state.number("center");
  p.momentum = state.number("momentum");
  if (needSigma) {
    p.sigma = state.positive("sigma");
    const double dx = (grid.qmax[0] - grid.qmin[0]) / static_cast<double>(grid.n[0]);
    if (p.sigma < 2.0 * dx) state.fail("sigma", "below two grid spacings");
  }
  if (!(p.center > grid.qmin[0] && p.center < grid.qmax[0])) state.fail("center", "outside the grid box");
  return p;
}

void requireFree(const ConfigReader& root, const PhysicsSpec& p, const char* why) {
  if (p.potential != "free") root.section("physics").section("potential").fail("kind", why);
}

Propagation runPropagation(RunContext& ctx, const WaveField& psi0, const Potential& pot, const Steps& s,
                           const PhysicsSpec& phys) {
  auto prop = propagate(psi0, pot, s.propagator(phys));
  for (const auto& w : prop.warnings) ctx.report().warn(w.message);
  return prop;
}

// Snapshot times every `every` snapshots, always ending at the last one.
std::vector<double> everyNth(const GuidanceField& g, std::size_t every) {
  std::vector<double> out;
  const auto t = g.times();
  for (std::size_t i = 0; i < t.size(); i += every) out.push_back(t[i]);
  if (out.back() != t.back()) out.push_back(t.back());
  return out;
}

const WaveField& snapshotAt(const GuidanceField& g, double t) {
  const auto snaps = g.snapshots();
  for (const auto& s : snaps)
    if (std::abs(s.time() - t) <= 1e-9 * std::max(1.0, std::abs(t))) return s;
  throw std::logic_error("no snapshot at the requested time");
}

std::vector<EnsembleStatsRow> ensembleStats(const Ensemble& ens, const GuidanceField& g, std::span<const double> times) {
  std::vector<EnsembleStatsRow> rows;
  for (double t : times) {
    const auto pts = ens.positionsAt(t);
    std::size_t halted = 0;
    for (const auto& tr : ens.trajectories)
      if (tr.halted() && tr.haltTime <= t) ++halted;
    EnsembleStatsRow r;
    r.t = t;
    r.ks = pts.empty() ? 1.0 : ksStatistic(pts, snapshotAt(g, t));
    r.haltedFraction = ens.empty() ? 0.0 : static_cast<double>(halted) / static_cast<double>(ens.size());
    rows.push_back(r);
  }
  return rows;
}

void reportStats(Report& report, std::span<const EnsembleStatsRow> rows) {
  double ks = 0.0, halted = 0.0;
  for (const auto& r : rows) {
    ks = std::max(ks, r.ks);
    halted = std::max(halted, r.haltedFraction);
  }
  report.lessThan("ks_max", ks, kKsBound, "largest KS distance to |psi_t|^2 over the recorded times");
  report.measure("ks_final", rows.back().ks);
  report.atMost("halted_fraction", halted, 0.0, "trajectories stopped at a node");
}

void dumpTrajectories(RunContext& ctx, const std::string& name, std::span<const Trajectory> all) {
  const auto n = std::min(all.size(), ctx.output().trajectories);
  ctx.csv(name, [&](std::ostream& out) { writeTrajectoryCsv(out, all.first(n)); });
}

// ---------------------------------------------------------------------------

class EquivarianceFreeGaussian final : public Scenario {
 public:
  void configure(const ConfigReader& root) override {
    grid_ = readGrid(root, 1);
    phys_ = readPhysics(root, true, true);
    requireFree(root, phys_, "the width oracle is the free-particle law; use \"free\"");
    packet_ = readPacket(root.section("state"), grid_);
    const auto run = root.section("run");
    steps_ = readSteps(run);
    dtTraj_ = readTrajectoryDt(run, steps_);
    every_ = static_cast<std::size_t>(run.integer("recordEvery", 1));
    ens_ = readEnsemble(root, {SamplerKind::Born});
  }

  void run(RunContext& ctx) override {
    auto& report = ctx.report();
    const auto psi0 = gaussianPacket(grid_.make(), {packet_.center, 0.0}, packet_.sigma, {packet_.momentum, 0.0},
                                     phys_.hbar);
    const auto prop = runPropagation(ctx, psi0, Potential::free(), steps_, phys_);
    report.lessThan("norm_drift", prop.normDrift, kNormDriftBound, "max |norm(t) - norm(0)|");
    const double s = phys_.hbar * steps_.T / (2.0 * phys_.mass * packet_.sigma * packet_.sigma);
    const double exact = packet_.sigma * std::sqrt(1.0 + s * s);
    report.lessThan("width_rel_error", std::abs(positionSpread(prop.snapshots.back()) - exact) / exact,
                    kWidthRelBound, "position spread at T against sigma0 sqrt(1 + (hbar T / 2 m sigma0^2)^2)");

    const GuidanceField guidance(prop.snapshots, phys_.mass, phys_.hbar, kDefaultNodeEps, ctx.execution());
    TrajectoryConfig cfg;
    cfg.dt = dtTraj_;
    cfg.recordTimes = everyNth(guidance, every_);
    const auto ens0 = bornEnsemble(psi0, ens_.count, ens_.seed, ctx.execution());
    const auto ens = propagateEnsemble(guidance, ens0, cfg, ctx.execution());
    const auto rows = ensembleStats(ens, guidance, cfg.recordTimes);
    reportStats(report, rows);
    report.measure("trajectories", static_cast<double>(ens.size()));

    ctx.csv("ensemble_stats.csv", [&](std::ostream& out) { writeEnsembleStatsCsv(out, rows); });
    dumpTrajectories(ctx, "trajectories.csv", ens.trajectories);
    ctx.field("psi_initial.csv", psi0);
    ctx.field("psi_final.csv", prop.snapshots.back());
  }

 private:
  GridSpec grid_;
  PhysicsSpec phys_;
  Packet packet_;
  Steps steps_;
  double dtTraj_ = 0.0;
  std::size_t every_ = 1;
  EnsembleSpec ens_;
};

// ---------------------------------------------------------------------------

// Local maxima of a node density inside [lo, hi) above `floor` times the largest one there.
std::vector<std::size_t> densityPeaks(const SpatialGrid& g, std::span<const double> rho, double lo, double hi,
                                      double floor) {
  std::vector<std::size_t> idx;
  double top = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g.coord(0, i) >= lo && g.coord(0, i) < hi) top = std::max(top, rho[i]);
  for (std::size_t i = 1; i + 1 < g.size(); ++i) {
    const double q = g.coord(0, i);
    if (q < lo || q >= hi) continue;
    if (rho[i] > rho[i - 1] && rho[i] >= rho[i + 1] && rho[i] >= floor * top) idx.push_back(i);
  }
  return idx;
}

class DoubleSlitNoCross final : public Scenario {
 public:
  void configure(const ConfigReader& root) override {
    grid_ = readGrid(root, 1);
    phys_ = readPhysics(root, true, true);
    requireFree(root, phys_, "the slit geometry is evolved freely; use \"free\"");
    const auto state = root.section("state");
    slit_.separation = state.positive("separation");
    slit_.width = state.positive("width");
    const double dx = (grid_.qmax[0] - grid_.qmin[0]) / static_cast<double>(grid_.n[0]);
    if (slit_.width < 2.0 * dx) state.fail("width", "below two grid spacings");
    if (slit_.separation <= slit_.width) state.fail("separation", "must exceed the slit width");
    const auto h = state.section("histogram");
    lower_ = h.number("lower");
    upper_ = h.number("upper");
    bins_ = static_cast<std::size_t>(h.integer("bins", 3));
    if (!(upper_ > lower_)) h.fail("upper", "must exceed lower");
    const auto run = root.section("run");
    steps_ = readSteps(run);
    dtTraj_ = readTrajectoryDt(run, steps_);
    every_ = static_cast<std::size_t>(run.integer("recordEvery", 1));
    ens_ = readEnsemble(root, {SamplerKind::Born});
  }

  void run(RunContext& ctx) override {
    auto& report = ctx.report();
    const auto grid = grid_.make();
    const auto psi0 = makeDoubleSlitState(grid, slit_, phys_.hbar);
    const auto prop = runPropagation(ctx, psi0, Potential::free(), steps_, phys_);
    report.lessThan("edge_amplitude", prop.maxEdgeAmplitude, kEdgeAmplitudeLimit, "largest |psi| near the box edge");
    report.lessThan("norm_drift", prop.normDrift, kNormDriftBound);

    const GuidanceField guidance(prop.snapshots, phys_.mass, phys_.hbar, kDefaultNodeEps, ctx.execution());
    TrajectoryConfig cfg;
    cfg.dt = dtTraj_;
    cfg.recordTimes = everyNth(guidance, every_);
    cfg.recordSubsteps = true;  // the crossing test sees every RK4 step
    const auto ens = propagateEnsemble(guidance, bornEnsemble(psi0, ens_.count, ens_.seed, ctx.execution()), cfg,
                                       ctx.execution());

    std::size_t crossed = 0;
    for (const auto& tr : ens.trajectories) {
      const double side = std::copysign(1.0, tr.start()[0]);
      for (const auto& p : tr.positions)
        if (p[0] * side < 0.0) {
          ++crossed;
          break;
        }
    }
    report.atMost("axis_crossings", static_cast<double>(crossed), 0.0, "trajectories that change side of q = 0");

    const auto rows = ensembleStats(ens, guidance, cfg.recordTimes);
    reportStats(report, rows);

    // Fringes: histogram argmax inside each |psi_T|^2 fringe cell must sit within one bin of the field peak.
    const auto& final = prop.snapshots.back();
    const auto rho = density(final);
    const auto peaks = densityPeaks(grid, rho.values(), lower_, upper_, kFringeFloor);
    std::vector<double> xs;
    for (const auto& p : ens.positionsAt(guidance.endTime())) xs.push_back(p[0]);
    const auto hist = histogram(xs, lower_, upper_, bins_);
    std::size_t matched = 0;
    for (std::size_t k = 0; k < peaks.size(); ++k) {
      // Cell edges: density minima between neighbouring peaks (window edges at the ends).
      auto minimumBetween = [&](std::size_t a, std::size_t b) {
        std::size_t m = a;
        for (std::size_t i = a; i <= b; ++i)
          if (rho[i] < rho[m]) m = i;
        return grid.coord(0, m);
      };
      const double cellLo = k == 0 ? lower_ : minimumBetween(peaks[k - 1], peaks[k]);
      const double cellHi = k + 1 == peaks.size() ? upper_ : minimumBetween(peaks[k], peaks[k + 1]);
      std::size_t best = hist.counts.size();
      for (std::size_t b = 0; b < hist.counts.size(); ++b) {
        const double c = hist.center(b);
        if (c < cellLo || c >= cellHi) continue;
        if (best == hist.counts.size() || hist.counts[b] > hist.counts[best]) best = b;
      }
      if (best < hist.counts.size() && std::abs(hist.center(best) - grid.coord(0, peaks[k])) <= hist.width) ++matched;
    }
    report.atLeast("interference_maxima", static_cast<double>(matched), 3.0,
                   "histogram maxima within one bin of a |psi_T|^2 peak");
    report.holds("all_fringes_matched", matched == peaks.size(), static_cast<double>(peaks.size()),
                 "every |psi_T|^2 peak above 10% of the tallest has a histogram maximum within one bin");

    const PiecewiseLinearDensity1D reference(grid, rho.values());
    ctx.csv("ensemble_stats.csv", [&](std::ostream& out) { writeEnsembleStatsCsv(out, rows); });
    ctx.csv("histogram.csv", [&](std::ostream& out) {
      std::vector<std::vector<double>> table;
      for (std::size_t b = 0; b < hist.counts.size(); ++b) {
        const double lo = hist.lower + static_cast<double>(b) * hist.width;
        const double expected = static_cast<double>(xs.size()) * (reference.cdf(lo + hist.width) - reference.cdf(lo));
        table.push_back({hist.center(b), hist.counts[b], expected});
      }
      writeTableCsv(out, {"q", "count", "expected"}, table);
    });
    ctx.csv("field_peaks.csv", [&](std::ostream& out) {
      std::vector<std::vector<double>> table;
      for (auto i : peaks) table.push_back({grid.coord(0, i), rho[i]});
      writeTableCsv(out, {"q", "density"}, table);
    });
    dumpTrajectories(ctx, "trajectories.csv", ens.trajectories);
    ctx.field("psi_initial.csv", psi0);
    ctx.field("psi_final.csv", final);
  }

 private:
  GridSpec grid_;
  PhysicsSpec phys_;
  DoubleSlitGeometry slit_;
  double lower_ = 0.0, upper_ = 0.0;
  std::size_t bins_ = 0;
  Steps steps_;
  double dtTraj_ = 0.0;
  std::size_t every_ = 1;
  EnsembleSpec ens_;
};

// ---------------------------------------------------------------------------

class HollandNonuniqueness final : public Scenario {
 public:
  void configure(const ConfigReader& root) override {
    phys_ = readPhysics(root, false, false);
    const auto state = root.section("state");
    P_ = state.number("P");
    Q0_ = state.number("Q0");
    t0_ = state.positive("t0");
    const auto run = root.section("run");
    T_ = run.positive("T");
    if (!(T_ > t0_)) run.fail("T", "must exceed state.t0");
    dt_ = run.positive("dtTraj");
    if (dt_ > T_ - t0_) run.fail("dtTraj", "longer than the whole window");
    ens_ = readEnsemble(root, {SamplerKind::Uniform});
  }

  void run(RunContext& ctx) override {
    auto& report = ctx.report();
    const auto r = bohmlab::hollandNonuniqueness(P_, Q0_, phys_.mass, t0_, T_, dt_, ens_.count, ens_.seed);
    report.lessThan("max_deviation", r.maxDeviation, kHollandBound, "|Q_S1(t) - Q_S2(t)| over the window");
    report.lessThan("line_deviation", r.maxLineDeviation, kHollandBound, "distance from Q0 + P t / m");
    report.lessThan("hj_residual_plane_wave", r.residualPlaneWave.maxAbs, kHjResidualBound,
                    std::to_string(r.residualPlaneWave.points) + " random (q, t) points");
    report.lessThan("hj_residual_circular", r.residualCircular.maxAbs, kHjResidualBound,
                    std::to_string(r.residualCircular.points) + " random (q, t) points");
    const std::vector<Trajectory> both{r.planeWave, r.circular};
    ctx.csv("trajectories.csv", [&](std::ostream& out) { writeTrajectoryCsv(out, both); });
  }

 private:
  PhysicsSpec phys_;
  double P_ = 0.0, Q0_ = 0.0, t0_ = 0.0, T_ = 0.0, dt_ = 0.0;
  EnsembleSpec ens_;
};

// ---------------------------------------------------------------------------

class P2Divergence final : public Scenario {
 public:
  void configure(const ConfigReader& root) override {
    grid_ = readGrid(root, 1);
    phys_ = readPhysics(root, true, true);
    const auto state = root.section("state");
    Q0_ = state.number("Q0");
    packet_ = readPacket(state, grid_, false);
    sigmaA_ = state.positive("sigmaA");
    sigmaB_ = state.positive("sigmaB");
    if (sigmaA_ == sigmaB_) state.fail("sigmaB", "must differ from sigmaA (the preparations need different R)");
    classicalT0_ = state.positive("classicalT0");
    const auto run = root.section("run");
    steps_ = readSteps(run);
    dtTraj_ = readTrajectoryDt(run, steps_);
  }

  void run(RunContext& ctx) override {
    auto& report = ctx.report();
    const auto grid = grid_.make();
    const auto pot = phys_.makePotential();
    auto guidance = [&](double sigma, const char* name) {
      const auto psi0 = gaussianPacket(grid, {packet_.center, 0.0}, sigma, {packet_.momentum, 0.0}, phys_.hbar);
      ctx.field(std::string("psi_initial_") + name + ".csv", psi0);
      const auto prop = runPropagation(ctx, psi0, pot, steps_, phys_);
      return GuidanceField(prop.snapshots, phys_.mass, phys_.hbar, kDefaultNodeEps, ctx.execution());
    };
    const auto a = guidance(sigmaA_, "A");
    const auto b = guidance(sigmaB_, "B");
    TrajectoryConfig cfg;
    cfg.dt = dtTraj_;
    const auto q = divergenceExperiment(a, b, {Q0_, 0.0}, cfg);
    report.lessThan("preparation_gradient_gap", q.initialGradientGap, kPreparationTolerance,
                    "|grad S_A(Q0) - grad S_B(Q0)| before integrating");
    const bool quantumOk = q.finalSeparation() > kDivergenceBound;
    report.greaterThan("quantum_separation_T", q.finalSeparation(), kDivergenceBound);

    // Classical pair: plane wave and a circular action aimed so that both give P at (Q0, t0).
    const double P = packet_.momentum, m = phys_.mass, t0 = classicalT0_;
    const auto s1 = ActionField::planeWave({P, 0.0}, m);
    const auto s2 = ActionField::circular({Q0_ - P * t0 / m, 0.0}, m);
    const auto c = classicalDivergence(s1, s2, {Q0_, 0.0}, t0, t0 + steps_.T, dtTraj_, m);
    double classicalMax = 0.0;
    for (double s : c.separation) classicalMax = std::max(classicalMax, s);
    const bool classicalOk = classicalMax < kClassicalPairBound;
    report.lessThan("classical_separation_max", classicalMax, kClassicalPairBound);
    report.holds("paired_contrast", quantumOk && classicalOk, q.finalSeparation(),
                 "quantum pair separates while the classical pair does not");

    const std::vector<Trajectory> quantum{q.a, q.b}, classical{c.a, c.b};
    ctx.csv("trajectories.csv", [&](std::ostream& out) { writeTrajectoryCsv(out, quantum); });
    ctx.csv("classical_trajectories.csv", [&](std::ostream& out) { writeTrajectoryCsv(out, classical); });
    auto table = [](const DivergenceReport& r) {
      std::vector<std::vector<double>> t;
      for (std::size_t i = 0; i < r.times.size(); ++i) t.push_back({r.times[i], r.separation[i]});
      return t;
    };
    ctx.csv("separation.csv", [&](std::ostream& out) { writeTableCsv(out, {"t", "separation"}, table(q)); });
    ctx.csv("classical_separation.csv", [&](std::ostream& out) { writeTableCsv(out, {"t", "separation"}, table(c)); });
  }

 private:
  GridSpec grid_;
  PhysicsSpec phys_;
  Packet packet_;
  double Q0_ = 0.0, sigmaA_ = 0.0, sigmaB_ = 0.0, classicalT0_ = 0.0;
  Steps steps_;
  double dtTraj_ = 0.0;
};

// ---------------------------------------------------------------------------

class SemiclassicalSweep final : public Scenario {
 public:
  void configure(const ConfigReader& root) override {
    grid_ = readGrid(root, 1);
    phys_ = readPhysics(root, false, false);
    const auto state = root.section("state");
    const auto kind = state.choice("kind", {"gaussian", "plane-wave"});
    gaussian_ = kind == "gaussian";
    packet_ = readPacket(state, grid_, gaussian_);
    hbars_ = state.numbers("hbars", 2);
    for (std::size_t i = 0; i < hbars_.size(); ++i) {
      if (!(hbars_[i] > 0.0)) state.fail("hbars", "entries must be positive");
      if (i > 0 && !(hbars_[i] < hbars_[i - 1])) state.fail("hbars", "must decrease strictly");
    }
    for (double s : state.numbers("starts", 1)) {
      if (!(s > grid_.qmin[0] && s < grid_.qmax[0])) state.fail("starts", "start outside the grid box");
      starts_.push_back({s, 0.0});
    }
    const auto run = root.section("run");
    steps_ = readSteps(run);
    dtTraj_ = readTrajectoryDt(run, steps_);
  }

  void run(RunContext& ctx) override {
    auto& report = ctx.report();
    SemiclassicalConfig c;
    c.state = gaussian_ ? SemiclassicalState::GaussianPacket : SemiclassicalState::PlaneWave;
    c.grid = grid_.make();
    c.sigma = packet_.sigma;
    c.center = {packet_.center, 0.0};
    c.momentum = {packet_.momentum, 0.0};
    c.mass = phys_.mass;
    c.hbars = hbars_;
    c.T = steps_.T;
    c.dt = steps_.dt;
    c.snapshotStride = steps_.stride;
    c.trajectoryDt = dtTraj_;
    c.starts = starts_;
    const auto r = semiclassicalCompare(c, ctx.execution());
    std::size_t halted = 0;
    for (const auto& run : r.runs) {
      std::ostringstream name;
      name << "max_error_hbar_" << run.hbar;
      report.measure(name.str(), run.maxError);
      halted += run.halted;
    }
    report.holds("error_strictly_decreasing", r.strictlyDecreasing(), static_cast<double>(r.runs.size()),
                 "max Bohmian-classical distance falls with every smaller hbar");
    report.atMost("halted_trajectories", static_cast<double>(halted), 0.0);
    ctx.csv("semiclassical_error.csv", [&](std::ostream& out) {
      std::vector<std::vector<double>> t;
      for (const auto& run : r.runs)
        for (std::size_t i = 0; i < run.times.size(); ++i) t.push_back({run.hbar, run.times[i], run.error[i]});
      writeTableCsv(out, {"hbar", "t", "error"}, t);
    });
  }

 private:
  GridSpec grid_;
  PhysicsSpec phys_;
  bool gaussian_ = true;
  Packet packet_;
  std::vector<double> hbars_;
  std::vector<Point> starts_;
  Steps steps_;
  double dtTraj_ = 0.0;
};

// ---------------------------------------------------------------------------

class ReconstructionBundle final : public Scenario {
 public:
  void configure(const ConfigReader& root) override {
    grid_ = readGrid(root, 1);
    phys_ = readPhysics(root, true, true);
    const auto state = root.section("state");
    packet_ = readPacket(state, grid_);
    q0_ = state.number("q0");
    k_ = static_cast<int>(state.integer("k", 2));
    if (k_ > 64) state.fail("k", "at most 64");
    deltas_ = state.numbers("deltas", 2);
    const double dx = (grid_.qmax[0] - grid_.qmin[0]) / static_cast<double>(grid_.n[0]);
    for (std::size_t i = 0; i < deltas_.size(); ++i) {
      if (!(deltas_[i] >= 2.0 * dx)) state.fail("deltas", "every delta must be at least two grid spacings");
      if (i > 0 && !(deltas_[i] < deltas_[i - 1])) state.fail("deltas", "must decrease strictly");
    }
    classicalP_ = state.number("classicalMomentum");
    const auto run = root.section("run");
    steps_ = readSteps(run);
    dtTraj_ = readTrajectoryDt(run, steps_);
  }

  void run(RunContext& ctx) override {
    auto& report = ctx.report();
    const double m = phys_.mass;

    // One classical path is enough: S from the Lagrangian integral against S1 on the line.
    ClassicalState cs;
    cs.Q0 = {q0_, 0.0};
    cs.action = ActionField::planeWave({classicalP_, 0.0}, m);
    const auto path = classicalTrajectory(cs, steps_.T, dtTraj_, m);
    const auto S = classicalReconstructAlongC(path, Potential::free(), m, 0.0);
    double classicalErr = 0.0;
    std::vector<std::vector<double>> classicalRows;
    for (std::size_t i = 0; i < S.size(); ++i) {
      const double t = path.times[i], q = path.positions[i][0];
      const double exact = classicalP_ * (q - q0_) - classicalP_ * classicalP_ * t / (2.0 * m);
      classicalErr = std::max(classicalErr, std::abs(S[i] - exact));
      classicalRows.push_back({t, q, S[i], exact});
    }
    report.lessThan("classical_single_trajectory_error", classicalErr, kClassicalReconBound,
                    "|S_rec - (S1(Q(t), t) - S1(Q0, 0))| along one path");

    const auto psi0 = gaussianPacket(grid_.make(), {packet_.center, 0.0}, packet_.sigma, {packet_.momentum, 0.0},
                                     phys_.hbar);
    const auto pot = phys_.makePotential();
    const auto prop = runPropagation(ctx, psi0, pot, steps_, phys_);
    const GuidanceField guidance(prop.snapshots, m, phys_.hbar, kDefaultNodeEps, ctx.execution());
    TrajectoryConfig cfg;
    cfg.dt = dtTraj_;

    bool insufficient = false;
    try {
      reconstructAlongC(makeBundle(guidance, q0_, 0, 0.0, cfg, ctx.execution()), pot, m, phys_.hbar, 0.0);
    } catch (const InsufficientBundleError&) {
      insufficient = true;
    }
    report.holds("single_trajectory_insufficient", insufficient, insufficient ? 1.0 : 0.0,
                 "k = 0 bundle is rejected with InsufficientBundle");

    ReconstructionScenario sc;
    sc.guidance = &guidance;
    sc.potential = pot;
    sc.q0 = q0_;
    sc.trajectory = cfg;
    const auto rows = bundleConvergence(sc, k_, deltas_, ctx.execution());
    bool decreasing = true;
    for (std::size_t i = 1; i < rows.size(); ++i) decreasing = decreasing && rows[i].errS < rows[i - 1].errS;
    report.holds("errS_strictly_decreasing", decreasing, rows.back().errS, "reconstruction error of S over the deltas");
    report.lessThan("errS_finest", rows.back().errS, kReconErrorBound, "relative to the range of S on C");
    report.measure("errR_finest", rows.back().errR);
    report.measure("slope", rows.front().slope);

    // Along-C detail for the finest bundle.
    const auto bundle = makeBundle(guidance, q0_, k_, deltas_.back(), cfg, ctx.execution());
    const auto oracle = solverAlongC(guidance, bundle.center());
    const auto rec = reconstructAlongC(bundle, pot, m, phys_.hbar, oracle.S.front());
    ctx.csv("convergence.csv", [&](std::ostream& out) { writeConvergenceCsv(out, rows); });
    ctx.csv("reconstruction.csv", [&](std::ostream& out) {
      std::vector<std::vector<double>> t;
      const std::size_t n = std::min(rec.times.size(), oracle.times.size());
      for (std::size_t i = 0; i < n; ++i)
        t.push_back({rec.times[i], rec.S[i], rec.R[i], oracle.S[i], oracle.R[i], rec.quantumPotential[i],
                     rec.velocity[i]});
      writeTableCsv(out, {"t", "S", "R", "S_solver", "R_solver", "U", "v"}, t);
    });
    ctx.csv("classical_reconstruction.csv",
            [&](std::ostream& out) { writeTableCsv(out, {"t", "q", "S", "S_exact"}, classicalRows); });
    ctx.csv("trajectories.csv", [&](std::ostream& out) { writeTrajectoryCsv(out, bundle.members); });
    ctx.field("psi_initial.csv", psi0);
  }

 private:
  GridSpec grid_;
  PhysicsSpec phys_;
  Packet packet_;
  double q0_ = 0.0;
  int k_ = 0;
  std::vector<double> deltas_;
  double classicalP_ = 0.0;
  Steps steps_;
  double dtTraj_ = 0.0;
};

// ---------------------------------------------------------------------------

class ContinuityResidual final : public Scenario {
 public:
  void configure(const ConfigReader& root) override {
    grid_ = readGrid(root, 1);
    phys_ = readPhysics(root, true, true);
    const auto state = root.section("state");
    packet_ = readPacket(state, grid_);
    probe_ = state.positive("probeTime");
    const auto run = root.section("run");
    dt_ = run.positive("dt");
    probeSteps_ = wholeSteps(state, "probeTime", probe_, dt_);
    T_ = run.positive("T");
    if (!(probe_ < T_)) state.fail("probeTime", "must lie inside (0, run.T)");
    dtTraj_ = run.positive("dtTraj");
    stride_ = static_cast<std::size_t>(run.integer("snapshotStride", 2));
    if (stride_ % 2 != 0) run.fail("snapshotStride", "must be even (the fine level halves it)");
    // The probe must be a recorded slice at both levels.
    const double h = T_ / std::ceil(T_ / dtTraj_ - 1e-9);
    wholeSteps(state, "probeTime", probe_, h * static_cast<double>(stride_));
  }

  void run(RunContext& ctx) override {
    auto& report = ctx.report();
    const auto pot = phys_.makePotential();
    const auto psi0 = gaussianPacket(grid_.make(), {packet_.center, 0.0}, packet_.sigma, {packet_.momentum, 0.0},
                                     phys_.hbar);
    auto single = [&](const WaveField& psi, double dt, std::size_t steps) {
      PropagatorConfig c;
      c.dt = dt;
      c.steps = steps;
      c.snapshotStride = steps;
      c.hbar = phys_.hbar;
      c.mass = phys_.mass;
      return propagate(psi, pot, c).snapshots.back();
    };
    const auto mid = single(psi0, dt_, probeSteps_);
    // Three snapshots centred on the probe; the earlier one by stepping the conjugate (time reversal).
    auto quantum = [&](double dt) {
      const auto before = single(mid.conjugated(), dt, 1).conjugated().withTime(mid.time() - dt);
      const std::vector<WaveField> s{before, mid, single(mid, dt, 1)};
      return bohmlab::continuityResidual(s, phys_.mass, phys_.hbar).front();
    };
    const double qc = quantum(dt_), qf = quantum(0.5 * dt_);
    report.lessThan("quantum_residual_fine", qf, kContinuityBound, "max |d rho/dt + div j| at the probe time");
    report.within("quantum_ratio", qc / qf, kRatioLow, kRatioHigh, "residual(dt) / residual(dt/2)");

    const auto action = ActionField::planeWave({packet_.momentum, 0.0}, phys_.mass);
    const ClassicalDensity rho0{density(psi0), 0.0};
    auto classical = [&](std::size_t stride) {
      TransportConfig c;
      c.endTime = T_;
      c.dt = dtTraj_;
      c.recordStride = stride;
      c.potential = pot;
      c.mass = phys_.mass;
      c.execution = ctx.execution();
      const auto r = transportClassical(rho0, action, c);
      if (r.caustic) throw std::runtime_error("classical transport hit a caustic before run.T");
      const auto res = classicalContinuityResidual(r);
      for (std::size_t i = 0; i < res.size(); ++i)
        if (std::abs(r.times[i + 1] - probe_) <= 1e-9 * std::max(1.0, probe_))
          return std::pair{res[i], r.times[i + 1] - r.times[i]};
      throw std::runtime_error("probe time is not an interior recorded slice");
    };
    const auto [cc, cdt] = classical(stride_);
    const auto [cf, fdt] = classical(stride_ / 2);
    report.lessThan("classical_residual_fine", cf, kContinuityBound, "transported rho_c against div(rho_c v)");
    report.within("classical_ratio", cc / cf, kRatioLow, kRatioHigh, "residual(2 h) / residual(h)");

    ctx.csv("continuity.csv", [&](std::ostream& out) {
      writeTableCsv(out, {"level", "quantum_dt", "quantum_residual", "classical_dt", "classical_residual"},
                    {{1.0, dt_, qc, cdt, cc}, {2.0, 0.5 * dt_, qf, fdt, cf}});
    });
    ctx.field("psi_probe.csv", mid);
  }

 private:
  GridSpec grid_;
  PhysicsSpec phys_;
  Packet packet_;
  double probe_ = 0.0, dt_ = 0.0, T_ = 0.0, dtTraj_ = 0.0;
  std::size_t probeSteps_ = 0, stride_ = 2;
};

}  // namespace

std::unique_ptr<Scenario> continuityResidual() { return std::make_unique<ContinuityResidual>(); }
std::unique_ptr<Scenario> doubleSlitNoCross() { return std::make_unique<DoubleSlitNoCross>(); }
std::unique_ptr<Scenario> equivarianceFreeGaussian() { return std::make_unique<EquivarianceFreeGaussian>(); }
std::unique_ptr<Scenario> hollandNonuniqueness() { return std::make_unique<HollandNonuniqueness>(); }
std::unique_ptr<Scenario> p2Divergence() { return std::make_unique<P2Divergence>(); }
std::unique_ptr<Scenario> reconstructionBundle() { return std::make_unique<ReconstructionBundle>(); }
std::unique_ptr<Scenario> semiclassicalSweep() { return std::make_unique<SemiclassicalSweep>(); }

}  // namespace bohmlab::scenario::builtin
