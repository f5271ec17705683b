#include "bohmlab/scenario/report.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace bohmlab::scenario {

namespace {

// JSON has no NaN/inf; those become null.
nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

void Report::add(CheckResult c) { checks_.push_back(std::move(c)); }

void Report::lessThan(const std::string& name, double value, double bound, std::string detail) {
  add({name, value < bound, value, "<", bound, 0.0, std::move(detail)});
}

void Report::atMost(const std::string& name, double value, double bound, std::string detail) {
  add({name, value <= bound, value, "<=", bound, 0.0, std::move(detail)});
}

void Report::greaterThan(const std::string& name, double value, double bound, std::string detail) {
  add({name, value > bound, value, ">", bound, 0.0, std::move(detail)});
}

void Report::atLeast(const std::string& name, double value, double bound, std::string detail) {
  add({name, value >= bound, value, ">=", bound, 0.0, std::move(detail)});
}

void Report::within(const std::string& name, double value, double lo, double hi, std::string detail) {
  add({name, value >= lo && value <= hi, value, "in", lo, hi, std::move(detail)});
}

void Report::holds(const std::string& name, bool ok, double value, std::string detail) {
  add({name, ok, value, "holds", 0.0, 0.0, std::move(detail)});
}

void Report::measure(const std::string& name, double value) { measurements_.push_back({name, value}); }

void Report::artifact(const std::string& file) { artifacts_.push_back(file); }

void Report::warn(const std::string& message) { warnings_.push_back(message); }

void Report::abort(const std::string& message) {
  add({"completed", false, std::numeric_limits<double>::quiet_NaN(), "holds", 0.0, 0.0, message});
}

const CheckResult* Report::find(const std::string& name) const {
  for (const auto& c : checks_)
    if (c.name == name) return &c;
  return nullptr;
}

double Report::measured(const std::string& name) const {
  for (const auto& m : measurements_)
    if (m.name == name) return m.value;
  if (const auto* c = find(name)) return c->value;
  throw std::out_of_range("no measurement named " + name);
}

bool Report::passed() const {
  if (checks_.empty()) return false;
  for (const auto& c : checks_)
    if (!c.passed) return false;
  return true;
}

std::vector<std::string> Report::failedChecks() const {
  std::vector<std::string> out;
  for (const auto& c : checks_)
    if (!c.passed) out.push_back(c.name);
  return out;
}

nlohmann::json Report::toJson() const {
  nlohmann::json j;
  j["scenario"] = scenario_;
  j["anchor"] = anchor_;
  j["status"] = passed() ? "pass" : "fail";
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks_) {
    nlohmann::json e{{"name", c.name}, {"passed", c.passed}, {"value", num(c.value)}, {"relation", c.relation}};
    if (c.relation == "in") e["bounds"] = {num(c.threshold), num(c.upper)};
    else if (c.relation != "holds") e["threshold"] = num(c.threshold);
    if (!c.detail.empty()) e["detail"] = c.detail;
    j["checks"].push_back(std::move(e));
  }
  j["measurements"] = nlohmann::json::object();
  for (const auto& m : measurements_) j["measurements"][m.name] = num(m.value);
  j["artifacts"] = artifacts_;
  j["warnings"] = warnings_;
  j["failed"] = failedChecks();
  return j;
}

void Report::write(const std::filesystem::path& file) const {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << toJson().dump(2) << '\n';
}

}  // namespace bohmlab::scenario
