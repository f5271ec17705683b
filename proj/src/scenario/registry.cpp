#include "bohmlab/scenario/registry.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "bohmlab/field/field_io.hpp"
#include "scenarios.hpp"

namespace bohmlab::scenario {

namespace {

std::string joined(const std::vector<std::string>& names) {
  std::string s;
  for (const auto& n : names) s += (s.empty() ? "" : ", ") + n;
  return s;
}

std::vector<ScenarioInfo> build() {
  using namespace builtin;
  const std::vector<std::string> common{"scenario", "output.directory", "output.formats"};
  auto keys = [&](std::vector<std::string> extra) {
    std::vector<std::string> k = common;
    k.insert(k.end(), extra.begin(), extra.end());
    return k;
  };
  std::vector<ScenarioInfo> r{
      {"continuity-residual", "continuity equation for rho",
       "quantum and transported classical continuity residuals converge at second order in dt",
       keys({"grid", "physics.{hbar,mass,potential}", "state.{center,sigma,momentum,probeTime}",
             "run.{dt,T,dtTraj,snapshotStride}"}),
       continuityResidual},
      {"double-slit-nocross", "the wave passes both slits, the particle one",
       "Born ensemble behind two slits: no trajectory crosses the axis, histogram fringes follow |psi_T|^2",
       keys({"grid", "physics.{hbar,mass,potential}", "state.{separation,width,histogram.{lower,upper,bins}}",
             "run.{dt,T,snapshotStride,dtTraj,recordEvery}", "ensemble.{N,sampler,seed}"}),
       doubleSlitNoCross},
      {"equivariance-free-gaussian", "equivariance: |psi|^2 distribution preserved over time",
       "Born-sampled ensemble in a spreading free Gaussian stays |psi_t|^2 distributed (KS per snapshot)",
       keys({"grid", "physics.{hbar,mass,potential}", "state.{center,sigma,momentum}",
             "run.{dt,T,snapshotStride,dtTraj,recordEvery}", "ensemble.{N,sampler,seed}"}),
       equivarianceFreeGaussian},
      {"holland-nonuniqueness", "nonuniqueness of S for one mechanical problem",
       "plane-wave and circular actions drive the same classical path; both solve free HJ",
       keys({"physics.mass", "state.{P,Q0,t0}", "run.{T,dtTraj}", "ensemble.{N,sampler,seed}"}),
       hollandNonuniqueness},
      {"p2-divergence", "same (Q0, grad S), future motion may differ",
       "two preparations with equal position and momentum but different R separate; the classical pair does not",
       keys({"grid", "physics.{hbar,mass,potential}", "state.{Q0,center,momentum,sigmaA,sigmaB,classicalT0}",
             "run.{dt,T,snapshotStride,dtTraj}"}),
       p2Divergence},
      {"reconstruction-bundle", "reconstruction of S and R along a trajectory",
       "one classical path suffices; the quantum case needs a bundle and converges as delta shrinks",
       keys({"grid", "physics.{hbar,mass,potential}",
             "state.{center,sigma,momentum,q0,k,deltas,classicalMomentum}", "run.{dt,T,snapshotStride,dtTraj}"}),
       reconstructionBundle},
      {"semiclassical-sweep", "quantum potential vanishes progressively as hbar -> 0",
       "Bohmian vs classical paths from a fixed (R, S) for a decreasing list of hbar",
       keys({"grid", "physics.mass", "state.{center,sigma,momentum,hbars,starts}",
             "run.{dt,T,snapshotStride,dtTraj}"}),
       semiclassicalSweep},
  };
  std::sort(r.begin(), r.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return r;
}

}  // namespace

ScenarioFailure::ScenarioFailure(std::vector<std::string> f)
    : Error("failed checks: " + joined(f)), failed(std::move(f)) {}

void RunContext::write(const std::string& name, const std::function<void(std::ostream&)>& body) {
  const auto file = directory_ / name;
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  body(out);
  if (!out) throw std::runtime_error("write failed for " + file.string());
  report_.artifact(name);
}

void RunContext::csv(const std::string& name, const std::function<void(std::ostream&)>& body) {
  if (output_.csv) write(name, body);
}

void RunContext::field(const std::string& name, const WaveField& psi) {
  if (output_.fields) write(name, [&](std::ostream& out) { writeFieldCsv(out, psi); });
}

const std::vector<ScenarioInfo>& registry() {
  static const std::vector<ScenarioInfo> r = build();
  return r;
}

const ScenarioInfo* findScenario(const std::string& name) {
  for (const auto& s : registry())
    if (s.name == name) return &s;
  return nullptr;
}

std::string listing() {
  std::ostringstream os;
  for (const auto& s : registry()) {
    os << s.name << "  [" << s.anchor << "]\n";
    os << "    " << s.summary << "\n";
    os << "    keys: " << joined(s.requiredKeys) << "\n";
  }
  return os.str();
}

PreparedRun prepare(const Json& config) {
  const ConfigReader root(config);
  std::vector<std::string> names;
  for (const auto& s : registry()) names.push_back(s.name);
  const std::string name = root.choice("scenario", names);
  PreparedRun p;
  p.info = findScenario(name);
  p.output = readOutput(root);
  p.scenario = p.info->make();
  p.scenario->configure(root);
  root.rejectUnused();
  return p;
}

Report runScenario(const Json& config, const std::filesystem::path& root, Execution exec) {
  PreparedRun p = prepare(config);
  const auto dir = root / p.output.directory;
  std::filesystem::create_directories(dir);
  Report report(p.info->name, p.info->anchor);
  RunContext ctx(dir, p.output, report, exec);
  try {
    p.scenario->run(ctx);
  } catch (const std::exception& e) {
    report.abort(e.what());
  }
  report.write(dir / "report.json");
  return report;
}

void requirePassed(const Report& report) {
  if (!report.passed()) throw ScenarioFailure(report.failedChecks());
}

}  // namespace bohmlab::scenario
