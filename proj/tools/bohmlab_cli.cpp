// bohmlab: run, list and validate scenario configs.
//
// Exit codes: 0 every check passed, 1 a check failed (or the run aborted),
// 2 the config or the command line was rejected.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "bohmlab/field/field_io.hpp"
#include "bohmlab/scenario/output.hpp"
#include "bohmlab/scenario/registry.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kCheckFailed = 1;
constexpr int kConfigError = 2;

void printCheck(const bohmlab::scenario::CheckResult& c) {
  std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " = " << bohmlab::formatDouble(c.value);
  if (c.relation == "in") std::cout << " in [" << c.threshold << ", " << c.upper << "]";
  else if (c.relation != "holds") std::cout << ' ' << c.relation << ' ' << c.threshold;
  if (!c.detail.empty()) std::cout << "  (" << c.detail << ')';
  std::cout << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  namespace sc = bohmlab::scenario;
  CLI::App app{"Bohmian trajectory lab: scenario runner"};
  app.require_subcommand(1);

  std::string runPath, checkPath;
  bool serial = false;
  auto* run = app.add_subcommand("run", "run a scenario config and write report.json plus CSVs");
  run->add_option("config", runPath, "scenario config (JSON)")->required();
  run->add_flag("--serial", serial, "use the serial reference kernels instead of OpenMP");
  auto* list = app.add_subcommand("list", "list the registered scenarios");
  auto* check = app.add_subcommand("check", "validate a config without running it");
  check->add_option("config", checkPath, "scenario config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*list) {
      std::cout << sc::listing();
      return kPass;
    }
    if (*check) {
      const auto p = sc::prepare(sc::loadJson(checkPath));
      std::cout << "ok: " << p.info->name << " -> " << (sc::outputRoot() / p.output.directory).string() << '\n';
      return kPass;
    }
    const auto exec = serial ? bohmlab::Execution::Serial : bohmlab::Execution::Parallel;
    const auto root = sc::outputRoot();
    const auto report = sc::runScenario(sc::loadJson(runPath), root, exec);
    for (const auto& c : report.checks()) printCheck(c);
    for (const auto& w : report.warnings()) std::cout << "warning: " << w << '\n';
    std::cout << (report.passed() ? "scenario passed" : "scenario FAILED") << ": " << report.scenario() << " -> "
              << root.string() << '\n';
    try {
      sc::requirePassed(report);
    } catch (const sc::ScenarioFailure& e) {
      std::cerr << e.what() << '\n';
      return kCheckFailed;
    }
    return kPass;
  } catch (const bohmlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
}
