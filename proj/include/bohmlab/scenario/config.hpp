#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "bohmlab/field/grid.hpp"
#include "bohmlab/schrodinger/potential.hpp"
#include "bohmlab/traj/sampling.hpp"

namespace bohmlab::scenario {

using Json = nlohmann::json;

/// Strict, path-tracking view of a parsed config document.
///
/// Every accessor validates type and range and throws ConfigError naming the
/// dotted key path (e.g. "run.dt"). Keys that no accessor touched are
/// rejected by `rejectUnused()`, so a typo never silently falls back to
/// anything.
class ConfigReader {
 public:
  explicit ConfigReader(const Json& root);

  // Sub-view; throws when the key is missing or not an object.
  ConfigReader section(const std::string& key) const;
  bool has(const std::string& key) const;
  bool isArray(const std::string& key) const;

  double number(const std::string& key) const;
  double positive(const std::string& key) const;
  double nonNegative(const std::string& key) const;
  // Integer >= minimum (JSON number with no fractional part).
  std::uint64_t integer(const std::string& key, std::uint64_t minimum = 0) const;
  bool boolean(const std::string& key) const;
  std::string text(const std::string& key) const;
  // Text restricted to the listed choices.
  std::string choice(const std::string& key, const std::vector<std::string>& allowed) const;
  std::vector<double> numbers(const std::string& key, std::size_t minCount = 1) const;
  std::vector<std::string> texts(const std::string& key) const;

  // Dotted path of `key` below this view.
  std::string path(const std::string& key) const;
  [[noreturn]] void fail(const std::string& key, const std::string& what) const;

  // Throws ConfigError for the first key in the document no accessor consumed.
  void rejectUnused() const;

 private:
  struct Shared {
    const Json* root;
    std::set<std::string> used;
  };
  ConfigReader(std::shared_ptr<Shared> shared, const Json* node, std::string prefix);
  const Json& get(const std::string& key) const;
  void walk(const Json& node, const std::string& prefix) const;

  std::shared_ptr<Shared> shared_;
  const Json* node_;
  std::string prefix_;
};

struct GridSpec {
  int dim = 1;
  std::array<std::size_t, 2> n{0, 0};
  std::array<double, 2> qmin{0.0, 0.0};
  std::array<double, 2> qmax{0.0, 0.0};
  SpatialGrid make() const;
};

struct PhysicsSpec {
  double hbar = 0.0;
  double mass = 0.0;
  std::string potential;  // "free" or "harmonic"
  double omega = 0.0;
  Potential makePotential() const;
};

struct EnsembleSpec {
  std::size_t count = 0;
  SamplerKind sampler = SamplerKind::Born;
  std::uint64_t seed = 0;
};

struct OutputSpec {
  std::string directory;
  bool csv = false;
  bool fields = false;
  // Trajectories written to trajectories.csv for ensemble scenarios.
  std::size_t trajectories = 0;
};

// Section readers shared by the scenarios. `needHbar` lets classical-only scenarios omit physics.hbar.
GridSpec readGrid(const ConfigReader& root, int requiredDim = 0);
PhysicsSpec readPhysics(const ConfigReader& root, bool needHbar, bool needPotential);
EnsembleSpec readEnsemble(const ConfigReader& root, const std::vector<SamplerKind>& allowed);
OutputSpec readOutput(const ConfigReader& root);

// Parses JSON text; syntax errors become ConfigError with path "<document>".
Json parseJson(const std::string& text);
Json loadJson(const std::filesystem::path& file);

}  // namespace bohmlab::scenario
