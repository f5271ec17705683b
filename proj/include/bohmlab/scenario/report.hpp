#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace bohmlab::scenario {

/// One invariant a scenario checked: the measured value, the bound and the verdict.
struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  // "<", "<=", ">", ">=", "in", "==", or "holds" for boolean checks.
  std::string relation;
  double threshold = 0.0;
  double upper = 0.0;  // only for "in"
  std::string detail;
};

struct Measurement {
  std::string name;
  double value = 0.0;
};

/// Everything a run reports; serialised as report.json.
class Report {
 public:
  Report() = default;
  Report(std::string scenario, std::string anchor) : scenario_(std::move(scenario)), anchor_(std::move(anchor)) {}

  void lessThan(const std::string& name, double value, double bound, std::string detail = {});
  void atMost(const std::string& name, double value, double bound, std::string detail = {});
  void greaterThan(const std::string& name, double value, double bound, std::string detail = {});
  void atLeast(const std::string& name, double value, double bound, std::string detail = {});
  void within(const std::string& name, double value, double lo, double hi, std::string detail = {});
  // Boolean invariant; `value` is what was measured (a count, a flag, ...).
  void holds(const std::string& name, bool ok, double value, std::string detail = {});
  void measure(const std::string& name, double value);
  void artifact(const std::string& file);
  void warn(const std::string& message);
  // The scenario threw; recorded as a failed check named "completed".
  void abort(const std::string& message);

  const std::string& scenario() const { return scenario_; }
  const std::vector<CheckResult>& checks() const { return checks_; }
  const std::vector<Measurement>& measurements() const { return measurements_; }
  const std::vector<std::string>& artifacts() const { return artifacts_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  const CheckResult* find(const std::string& name) const;
  double measured(const std::string& name) const;

  // True when at least one check ran and none failed.
  bool passed() const;
  std::vector<std::string> failedChecks() const;

  nlohmann::json toJson() const;
  void write(const std::filesystem::path& file) const;

 private:
  void add(CheckResult c);

  std::string scenario_;
  std::string anchor_;
  std::vector<CheckResult> checks_;
  std::vector<Measurement> measurements_;
  std::vector<std::string> artifacts_;
  std::vector<std::string> warnings_;
};

}  // namespace bohmlab::scenario
