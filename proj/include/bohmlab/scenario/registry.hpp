#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "bohmlab/errors.hpp"
#include "bohmlab/kernels/execution.hpp"
#include "bohmlab/scenario/config.hpp"
#include "bohmlab/scenario/report.hpp"

namespace bohmlab {
class WaveField;
}

namespace bohmlab::scenario {

// A run finished but at least one check failed.
class ScenarioFailure : public Error {
 public:
  explicit ScenarioFailure(std::vector<std::string> failed);
  std::vector<std::string> failed;
};

/// Where a running scenario writes and reports.
class RunContext {
 public:
  RunContext(std::filesystem::path directory, OutputSpec output, Report& report, Execution exec)
      : directory_(std::move(directory)), output_(std::move(output)), report_(report), exec_(exec) {}

  Report& report() { return report_; }
  const OutputSpec& output() const { return output_; }
  Execution execution() const { return exec_; }
  const std::filesystem::path& directory() const { return directory_; }

  // Writes <directory>/<name> through `body` when the csv format is on; records the artifact.
  void csv(const std::string& name, const std::function<void(std::ostream&)>& body);
  // Field dump when the fields format is on.
  void field(const std::string& name, const WaveField& psi);

 private:
  void write(const std::string& name, const std::function<void(std::ostream&)>& body);

  std::filesystem::path directory_;
  OutputSpec output_;
  Report& report_;
  Execution exec_;
};

/// A named experiment: reads its config sections strictly, then runs.
class Scenario {
 public:
  virtual ~Scenario() = default;
  // Reads every key the scenario needs; must throw ConfigError before any allocation-heavy work.
  virtual void configure(const ConfigReader& root) = 0;
  virtual void run(RunContext& ctx) = 0;
};

struct ScenarioInfo {
  std::string name;
  // Topic of the source argument the scenario operationalises.
  std::string anchor;
  std::string summary;
  std::vector<std::string> requiredKeys;
  std::function<std::unique_ptr<Scenario>()> make;
};

// Every built-in scenario, sorted by name.
const std::vector<ScenarioInfo>& registry();
const ScenarioInfo* findScenario(const std::string& name);
// One block per scenario: name, anchor, summary, required keys.
std::string listing();

struct PreparedRun {
  const ScenarioInfo* info = nullptr;
  std::unique_ptr<Scenario> scenario;
  OutputSpec output;
};

/// Full validation of a config document (the `check` command). Throws ConfigError.
PreparedRun prepare(const Json& config);

/// Validates, runs and writes report.json plus the CSVs under root/output.directory.
///
/// Config problems throw ConfigError before anything is written. A scenario
/// that throws while running is reported as a failed "completed" check.
Report runScenario(const Json& config, const std::filesystem::path& root, Execution exec = Execution::Parallel);

// Throws ScenarioFailure naming every failed check.
void requirePassed(const Report& report);

}  // namespace bohmlab::scenario
