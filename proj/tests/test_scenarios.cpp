#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "bohmlab/errors.hpp"
#include "bohmlab/scenario/config.hpp"
#include "bohmlab/scenario/output.hpp"
#include "bohmlab/scenario/registry.hpp"
#include "bohmlab/scenario/report.hpp"

using namespace bohmlab;
using namespace bohmlab::scenario;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs{BOHMLAB_CONFIG_DIR};

Json config(const std::string& name) { return loadJson(kConfigs / (name + ".json")); }

// Fresh scratch directory per call, removed by the destructor.
struct Scratch {
  fs::path dir;
  Scratch() {
    static int counter = 0;
    dir = fs::temp_directory_path() /
          ("bohmlab-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
};

// The ConfigError path raised by prepare(), or "" when the config is accepted.
std::string rejectedPath(const Json& j) {
  try {
    prepare(j);
  } catch (const ConfigError& e) {
    return e.path;
  }
  return "";
}

std::string slurp(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Cheap equivariance run: small grid, short time, few particles.
Json smallEquivariance() {
  auto j = config("equivariance-free-gaussian");
  j["grid"]["n"] = 256;
  j["grid"]["qmin"] = -16;
  j["grid"]["qmax"] = 16;
  j["run"]["T"] = 0.5;
  j["ensemble"]["N"] = 500;
  j["output"]["trajectories"] = 10;
  return j;
}

int cli(const std::string& args, const fs::path& root, const fs::path& log) {
  const std::string cmd = std::string(kOutputRootEnv) + "='" + root.string() + "' '" + BOHMLAB_CLI + "' " + args +
                          " > '" + log.string() + "' 2>&1";
  const int raw = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(raw));
  return WEXITSTATUS(raw);
}

fs::path writeConfig(const fs::path& dir, const std::string& file, const Json& j) {
  const auto p = dir / file;
  std::ofstream(p) << j.dump(2);
  return p;
}

}  // namespace

TEST_CASE("registry: seven scenarios, sorted, each with an anchor and a shipped config") {
  const auto& r = registry();
  REQUIRE(r.size() == 7);
  CHECK(std::is_sorted(r.begin(), r.end(), [](const auto& a, const auto& b) { return a.name < b.name; }));
  for (const auto& s : r) {
    CAPTURE(s.name);
    CHECK(!s.anchor.empty());
    CHECK(!s.summary.empty());
    CHECK(findScenario(s.name) == &s);
    const auto p = prepare(config(s.name));
    CHECK(p.info == &s);
    CHECK(p.output.directory == s.name);
  }
  CHECK(findScenario("no-such-scenario") == nullptr);
  const auto text = listing();
  for (const auto& s : r) CHECK(text.find(s.name + "  [" + s.anchor + "]") != std::string::npos);
}

TEST_CASE("config: errors name the offending key path") {
  auto j = config("equivariance-free-gaussian");
  CHECK(rejectedPath(j).empty());

  SUBCASE("negative dt") {
    j["run"]["dt"] = -0.001;
    CHECK(rejectedPath(j) == "run.dt");
  }
  SUBCASE("zero sigma") {
    j["state"]["sigma"] = 0;
    CHECK(rejectedPath(j) == "state.sigma");
  }
  SUBCASE("missing key") {
    j["state"].erase("sigma");
    CHECK(rejectedPath(j) == "state.sigma");
  }
  SUBCASE("missing section") {
    j.erase("ensemble");
    CHECK(rejectedPath(j) == "ensemble");
  }
  SUBCASE("unknown key is never ignored") {
    j["run"]["dtt"] = 0.001;
    CHECK(rejectedPath(j) == "run.dtt");
  }
  SUBCASE("key that this scenario does not use") {
    j["state"]["separation"] = 8;
    CHECK(rejectedPath(j) == "state.separation");
  }
  SUBCASE("wrong type") {
    j["grid"]["n"] = "1024";
    CHECK(rejectedPath(j) == "grid.n");
  }
  SUBCASE("fractional integer") {
    j["grid"]["n"] = 1024.5;
    CHECK(rejectedPath(j) == "grid.n");
  }
  SUBCASE("negative integer") {
    j["ensemble"]["N"] = -5;
    CHECK(rejectedPath(j) == "ensemble.N");
    j["ensemble"]["N"] = 0;
    CHECK(rejectedPath(j) == "ensemble.N");
  }
  SUBCASE("n not a power of two") {
    j["grid"]["n"] = 1000;
    CHECK(rejectedPath(j) == "grid.n");
  }
  SUBCASE("inverted box") {
    j["grid"]["qmax"] = -40;
    CHECK(rejectedPath(j) == "grid.qmax");
  }
  SUBCASE("T not a whole number of steps") {
    j["run"]["T"] = 2.0005;
    CHECK(rejectedPath(j) == "run.T");
  }
  SUBCASE("trajectory step longer than the snapshot spacing") {
    j["run"]["dtTraj"] = 0.02;
    CHECK(rejectedPath(j) == "run.dtTraj");
  }
  SUBCASE("unknown scenario") {
    j["scenario"] = "tunnelling";
    CHECK(rejectedPath(j) == "scenario");
  }
  SUBCASE("unknown sampler") {
    j["ensemble"]["sampler"] = "metropolis";
    CHECK(rejectedPath(j) == "ensemble.sampler");
  }
  SUBCASE("unknown potential") {
    j["physics"]["potential"]["kind"] = "coulomb";
    CHECK(rejectedPath(j) == "physics.potential.kind");
  }
  SUBCASE("output directory escaping the root") {
    j["output"]["directory"] = "../elsewhere";
    CHECK(rejectedPath(j) == "output.directory");
    j["output"]["directory"] = "/tmp/abs";
    CHECK(rejectedPath(j) == "output.directory");
  }
  SUBCASE("unknown output format") {
    j["output"]["formats"] = {"csv", "hdf5"};
    CHECK(rejectedPath(j) == "output.formats");
  }
}

TEST_CASE("config: scenario-specific constraints") {
  auto p2 = config("p2-divergence");
  p2["state"]["sigmaB"] = p2["state"]["sigmaA"];
  CHECK(rejectedPath(p2) == "state.sigmaB");

  auto sc = config("semiclassical-sweep");
  sc["state"]["hbars"] = {1.0, 0.5, 0.5};
  CHECK(rejectedPath(sc) == "state.hbars");

  auto rb = config("reconstruction-bundle");
  rb["state"]["deltas"] = {0.1, 0.2};
  CHECK(rejectedPath(rb) == "state.deltas");

  auto ds = config("double-slit-nocross");
  ds["state"]["separation"] = 0.25;
  CHECK(rejectedPath(ds) == "state.separation");

  auto cr = config("continuity-residual");
  cr["run"]["snapshotStride"] = 7;
  CHECK(rejectedPath(cr) == "run.snapshotStride");

  auto ho = config("holland-nonuniqueness");
  ho["run"]["T"] = 0.05;  // before t0
  CHECK(rejectedPath(ho) == "run.T");
}

TEST_CASE("config: JSON syntax errors and the ConfigReader accessors") {
  try {
    parseJson("{\"scenario\": ");
    FAIL("no exception");
  } catch (const ConfigError& e) {
    CHECK(e.path == "<document>");
  }
  CHECK_THROWS_AS(loadJson("/nonexistent/bohmlab.json"), ConfigError);

  const auto j = parseJson(R"({"a": {"x": 2, "v": [1, 2.5], "flag": true, "name": "k"}, "b": 1})");
  const ConfigReader root(j);
  const auto a = root.section("a");
  CHECK(a.path("x") == "a.x");
  CHECK(a.integer("x", 2) == 2);
  CHECK_THROWS_AS(a.integer("x", 3), ConfigError);
  CHECK(a.numbers("v") == std::vector<double>{1.0, 2.5});
  CHECK_THROWS_AS(a.numbers("v", 3), ConfigError);
  CHECK(a.boolean("flag"));
  CHECK(a.choice("name", {"k", "m"}) == "k");
  CHECK(a.isArray("v"));
  CHECK(!a.has("missing"));
  try {
    root.rejectUnused();
    FAIL("b was never read");
  } catch (const ConfigError& e) {
    CHECK(e.path == "b");
  }
  root.number("b");
  CHECK_NOTHROW(root.rejectUnused());
}

TEST_CASE("report: checks, verdict and JSON shape") {
  Report r("demo", "topic");
  CHECK(!r.passed());  // nothing checked yet
  r.lessThan("small", 1e-12, 1e-10, "detail text");
  r.atMost("zero", 0.0, 0.0);
  r.greaterThan("big", 2.0, 1.0);
  r.atLeast("count", 3.0, 3.0);
  r.within("ratio", 4.1, 3.2, 4.8);
  r.holds("flag", true, 1.0);
  r.measure("nan", std::numeric_limits<double>::quiet_NaN());
  r.artifact("a.csv");
  r.warn("careful");
  CHECK(r.passed());
  CHECK(r.failedChecks().empty());
  CHECK(std::isnan(r.measured("nan")));

  r.lessThan("nan_check", std::numeric_limits<double>::quiet_NaN(), 1.0);
  r.within("out", 5.0, 3.2, 4.8);
  CHECK(!r.passed());
  CHECK(r.failedChecks() == std::vector<std::string>{"nan_check", "out"});
  REQUIRE(r.find("out") != nullptr);
  CHECK(r.find("out")->relation == "in");

  const auto j = r.toJson();
  CHECK(j["scenario"] == "demo");
  CHECK(j["anchor"] == "topic");
  CHECK(j["status"] == "fail");
  CHECK(j["checks"].size() == 8);
  CHECK(j["checks"][0]["name"] == "small");
  CHECK(j["checks"][0]["passed"] == true);
  CHECK(j["checks"][0]["detail"] == "detail text");
  CHECK(j["checks"][6]["value"].is_null());
  CHECK(j["measurements"]["nan"].is_null());
  CHECK(j["artifacts"] == Json::array({"a.csv"}));
  CHECK(j["warnings"] == Json::array({"careful"}));
  CHECK(j["failed"] == Json::array({"nan_check", "out"}));

  Report aborted("demo", "topic");
  aborted.abort("boom");
  CHECK(!aborted.passed());
  CHECK(aborted.failedChecks() == std::vector<std::string>{"completed"});
  CHECK_THROWS_AS(requirePassed(aborted), ScenarioFailure);
}

TEST_CASE("csv writers: headers and 17-digit values") {
  Trajectory a;
  a.times = {0.0, 0.1};
  a.positions = {{1.0, 0.0}, {1.0 / 3.0, 0.0}};
  Trajectory b = a;
  b.status = TrajectoryStatus::HaltedAtNode;
  b.haltTime = 0.1;
  std::ostringstream os;
  const std::vector<Trajectory> trs{a, b};
  writeTrajectoryCsv(os, trs, 5);
  CHECK(os.str() ==
        "traj_id,t,q1,halted\n"
        "5,0,1,0\n"
        "5,0.10000000000000001,0.33333333333333331,0\n"
        "6,0,1,1\n"
        "6,0.10000000000000001,0.33333333333333331,1\n");

  Trajectory p;
  p.dim = 2;
  p.times = {0.5};
  p.positions = {{-1.5, 2.0}};
  os.str("");
  writeTrajectoryCsv(os, std::vector<Trajectory>{p});
  CHECK(os.str() == "traj_id,t,q1,q2,halted\n0,0.5,-1.5,2,0\n");

  os.str("");
  const std::vector<EnsembleStatsRow> stats{{0.0, 0.0125, 0.0}, {1.0, 0.02, 0.5}};
  writeEnsembleStatsCsv(os, stats);
  CHECK(os.str() == "t,ks_stat,halted_frac\n0,0.012500000000000001,0\n1,0.02,0.5\n");

  os.str("");
  const std::vector<ConvergenceRow> conv{{0.2, 4, 0.01, 0.002, 2.0}};
  writeConvergenceCsv(os, conv);
  CHECK(os.str() == "delta,k,errS,errR,slope\n0.20000000000000001,4,0.01,0.002,2\n");

  os.str("");
  writeTableCsv(os, {"x", "y"}, {{1.0, -2.0}});
  CHECK(os.str() == "x,y\n1,-2\n");
}

TEST_CASE("output root: environment override") {
  const char* saved = std::getenv(kOutputRootEnv);
  const std::string keep = saved ? saved : "";
  ::setenv(kOutputRootEnv, "/tmp/somewhere", 1);
  CHECK(outputRoot() == fs::path("/tmp/somewhere"));
  ::setenv(kOutputRootEnv, "", 1);
  CHECK(outputRoot() == fs::path(kDefaultOutputRoot));
  ::unsetenv(kOutputRootEnv);
  CHECK(outputRoot() == fs::path(kDefaultOutputRoot));
  if (saved) ::setenv(kOutputRootEnv, keep.c_str(), 1);
}

TEST_CASE("run: writes report.json and the CSVs it lists") {
  Scratch s;
  const auto report = runScenario(smallEquivariance(), s.dir);
  const auto dir = s.dir / "equivariance-free-gaussian";
  REQUIRE(fs::exists(dir / "report.json"));
  const auto j = Json::parse(slurp(dir / "report.json"));
  CHECK(j["scenario"] == "equivariance-free-gaussian");
  CHECK(j["checks"].size() == report.checks().size());
  for (const auto& a : report.artifacts()) CHECK(fs::exists(dir / a));
  for (const char* f : {"ensemble_stats.csv", "trajectories.csv", "psi_initial.csv", "psi_final.csv"})
    CHECK(std::find(report.artifacts().begin(), report.artifacts().end(), f) != report.artifacts().end());
  CHECK(slurp(dir / "ensemble_stats.csv").rfind("t,ks_stat,halted_frac\n", 0) == 0);
  CHECK(slurp(dir / "trajectories.csv").rfind("traj_id,t,q1,halted\n", 0) == 0);
  CHECK(slurp(dir / "psi_initial.csv").rfind("# grid dim=1 n=256", 0) == 0);

  // formats: [] writes only the report
  Scratch t;
  auto j2 = smallEquivariance();
  j2["output"]["formats"] = Json::array();
  const auto r2 = runScenario(j2, t.dir);
  CHECK(r2.artifacts().empty());
  CHECK(fs::exists(t.dir / "equivariance-free-gaussian" / "report.json"));
  CHECK(!fs::exists(t.dir / "equivariance-free-gaussian" / "trajectories.csv"));
}

TEST_CASE("run: config errors are thrown before anything is written") {
  Scratch s;
  auto j = smallEquivariance();
  j["run"]["dt"] = -1.0;
  CHECK_THROWS_AS(runScenario(j, s.dir), ConfigError);
  CHECK(fs::is_empty(s.dir));
}

TEST_CASE("property: seeded runs are byte-identical, serial or parallel") {
  Scratch a, b, c;
  runScenario(smallEquivariance(), a.dir);
  runScenario(smallEquivariance(), b.dir);
  runScenario(smallEquivariance(), c.dir, Execution::Serial);
  const auto sub = fs::path("equivariance-free-gaussian");
  std::size_t compared = 0;
  for (const auto& e : fs::directory_iterator(a.dir / sub)) {
    const auto name = e.path().filename();
    CAPTURE(name.string());
    const auto bytes = slurp(e.path());
    CHECK(bytes == slurp(b.dir / sub / name));
    CHECK(bytes == slurp(c.dir / sub / name));
    ++compared;
  }
  CHECK(compared == 5);

  // a different seed changes the ensemble
  Scratch d;
  auto j = smallEquivariance();
  j["ensemble"]["seed"] = 43;
  runScenario(j, d.dir);
  CHECK(slurp(a.dir / sub / "trajectories.csv") != slurp(d.dir / sub / "trajectories.csv"));
}

TEST_CASE("cli: exit codes 0 / 1 / 2") {
  Scratch s;
  const auto log = s.dir / "log.txt";
  const auto root = s.dir / "runs";

  CHECK(cli("list", root, log) == 0);
  for (const auto& info : registry()) CHECK(slurp(log).find(info.name) != std::string::npos);

  const auto good = (kConfigs / "holland-nonuniqueness.json").string();
  CHECK(cli("check '" + good + "'", root, log) == 0);
  CHECK(!fs::exists(root));  // check never writes
  CHECK(cli("run '" + good + "'", root, log) == 0);
  CHECK(fs::exists(root / "holland-nonuniqueness" / "report.json"));
  CHECK(slurp(log).find("PASS max_deviation") != std::string::npos);

  auto bad = config("holland-nonuniqueness");
  bad["run"]["dtTraj"] = -0.001;
  const auto badFile = writeConfig(s.dir, "bad.json", bad);
  CHECK(cli("check '" + badFile.string() + "'", root, log) == 2);
  CHECK(slurp(log).find("run.dtTraj") != std::string::npos);
  CHECK(cli("run '" + badFile.string() + "'", root, log) == 2);
  CHECK(cli("run '" + (s.dir / "missing.json").string() + "'", root, log) == 2);
  CHECK(cli("frobnicate", root, log) == 2);
  CHECK(cli("run", root, log) == 2);

  // Nearly equal widths: the quantum pair cannot separate by the required margin.
  auto weak = config("p2-divergence");
  weak["grid"]["n"] = 512;
  weak["run"]["T"] = 0.5;
  weak["state"]["sigmaB"] = 1.0001;
  const auto weakFile = writeConfig(s.dir, "weak.json", weak);
  CHECK(cli("run '" + weakFile.string() + "'", root, log) == 1);
  CHECK(slurp(log).find("FAIL quantum_separation_T") != std::string::npos);
  const auto rep = Json::parse(slurp(root / "p2-divergence" / "report.json"));
  CHECK(rep["status"] == "fail");
}
