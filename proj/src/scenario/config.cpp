#include "bohmlab/scenario/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bohmlab/errors.hpp"

namespace bohmlab::scenario {

namespace {

std::string describe(const Json& v) {
  std::string s = v.dump();
  if (s.size() > 40) s = s.substr(0, 37) + "...";
  return s;
}

bool powerOfTwo(std::uint64_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

ConfigReader::ConfigReader(const Json& root)
    : shared_(std::make_shared<Shared>(Shared{&root, {}})), node_(&root), prefix_() {
  if (!root.is_object()) throw ConfigError("<document>", "top level must be an object");
}

ConfigReader::ConfigReader(std::shared_ptr<Shared> shared, const Json* node, std::string prefix)
    : shared_(std::move(shared)), node_(node), prefix_(std::move(prefix)) {}

std::string ConfigReader::path(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

void ConfigReader::fail(const std::string& key, const std::string& what) const { throw ConfigError(path(key), what); }

bool ConfigReader::has(const std::string& key) const { return node_->contains(key); }

bool ConfigReader::isArray(const std::string& key) const { return node_->contains(key) && (*node_)[key].is_array(); }

const Json& ConfigReader::get(const std::string& key) const {
  const auto it = node_->find(key);
  if (it == node_->end()) fail(key, "required key is missing");
  shared_->used.insert(path(key));
  return *it;
}

ConfigReader ConfigReader::section(const std::string& key) const {
  const Json& v = get(key);
  if (!v.is_object()) fail(key, "expected an object, got " + describe(v));
  return ConfigReader(shared_, &v, path(key));
}

double ConfigReader::number(const std::string& key) const {
  const Json& v = get(key);
  if (!v.is_number()) fail(key, "expected a number, got " + describe(v));
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(key, "must be finite");
  return x;
}

double ConfigReader::positive(const std::string& key) const {
  const double x = number(key);
  if (!(x > 0.0)) fail(key, "must be positive (got " + describe(get(key)) + ")");
  return x;
}

double ConfigReader::nonNegative(const std::string& key) const {
  const double x = number(key);
  if (x < 0.0) fail(key, "must be non-negative (got " + describe(get(key)) + ")");
  return x;
}

std::uint64_t ConfigReader::integer(const std::string& key, std::uint64_t minimum) const {
  const Json& v = get(key);
  if (v.is_number_unsigned()) {
    const auto n = v.get<std::uint64_t>();
    if (n < minimum) fail(key, "must be at least " + std::to_string(minimum) + " (got " + describe(v) + ")");
    return n;
  }
  // Parsed text stores non-negative integers as unsigned; documents built in code may hold signed ones.
  if (v.is_number_integer()) {
    const auto s = v.get<std::int64_t>();
    if (s < 0 || static_cast<std::uint64_t>(s) < minimum)
      fail(key, "must be at least " + std::to_string(minimum) + " (got " + describe(v) + ")");
    return static_cast<std::uint64_t>(s);
  }
  if (v.is_number_float()) {
    const double x = v.get<double>();
    if (std::floor(x) == x && x >= 0.0 && x < 9.0e15) {
      const auto n = static_cast<std::uint64_t>(x);
      if (n < minimum) fail(key, "must be at least " + std::to_string(minimum) + " (got " + describe(v) + ")");
      return n;
    }
  }
  fail(key, "expected a non-negative integer, got " + describe(v));
}

bool ConfigReader::boolean(const std::string& key) const {
  const Json& v = get(key);
  if (!v.is_boolean()) fail(key, "expected true or false, got " + describe(v));
  return v.get<bool>();
}

std::string ConfigReader::text(const std::string& key) const {
  const Json& v = get(key);
  if (!v.is_string()) fail(key, "expected a string, got " + describe(v));
  return v.get<std::string>();
}

std::string ConfigReader::choice(const std::string& key, const std::vector<std::string>& allowed) const {
  const std::string s = text(key);
  if (std::find(allowed.begin(), allowed.end(), s) == allowed.end()) {
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    fail(key, "'" + s + "' is not one of: " + list);
  }
  return s;
}

std::vector<double> ConfigReader::numbers(const std::string& key, std::size_t minCount) const {
  const Json& v = get(key);
  if (!v.is_array()) fail(key, "expected an array of numbers, got " + describe(v));
  if (v.size() < minCount) fail(key, "needs at least " + std::to_string(minCount) + " entries");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number() || !std::isfinite(v[i].get<double>()))
      fail(key + "[" + std::to_string(i) + "]", "expected a finite number, got " + describe(v[i]));
    out.push_back(v[i].get<double>());
  }
  return out;
}

std::vector<std::string> ConfigReader::texts(const std::string& key) const {
  const Json& v = get(key);
  if (!v.is_array()) fail(key, "expected an array of strings, got " + describe(v));
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) fail(key + "[" + std::to_string(i) + "]", "expected a string, got " + describe(v[i]));
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

void ConfigReader::walk(const Json& node, const std::string& prefix) const {
  for (auto it = node.begin(); it != node.end(); ++it) {
    const std::string p = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (!shared_->used.contains(p)) throw ConfigError(p, "unknown key (not used by this scenario)");
    if (it->is_object()) walk(*it, p);
  }
}

void ConfigReader::rejectUnused() const { walk(*shared_->root, ""); }

SpatialGrid GridSpec::make() const {
  if (dim == 1) return SpatialGrid::line(n[0], qmin[0], qmax[0]);
  return SpatialGrid::plane(n, qmin, qmax);
}

GridSpec readGrid(const ConfigReader& root, int requiredDim) {
  const auto g = root.section("grid");
  GridSpec s;
  s.dim = static_cast<int>(g.integer("dim", 1));
  if (s.dim > 2) g.fail("dim", "must be 1 or 2");
  if (requiredDim != 0 && s.dim != requiredDim)
    g.fail("dim", "this scenario needs dim=" + std::to_string(requiredDim));
  // Scalars apply to every axis; 2D grids may give one value per axis.
  auto axisValues = [&](const std::string& key) -> std::vector<double> {
    if (!g.isArray(key)) return std::vector<double>(static_cast<std::size_t>(s.dim), g.number(key));
    auto v = g.numbers(key, 1);
    if (v.size() != static_cast<std::size_t>(s.dim)) g.fail(key, "needs one entry per axis");
    return v;
  };
  const auto n = axisValues("n");
  const auto lo = axisValues("qmin");
  const auto hi = axisValues("qmax");
  for (int a = 0; a < s.dim; ++a) {
    const double na = n[static_cast<std::size_t>(a)];
    if (!(na >= 16.0) || std::floor(na) != na || !powerOfTwo(static_cast<std::uint64_t>(na)))
      g.fail("n", "points per axis must be a power of two >= 16");
    s.n[static_cast<std::size_t>(a)] = static_cast<std::size_t>(na);
    s.qmin[static_cast<std::size_t>(a)] = lo[static_cast<std::size_t>(a)];
    s.qmax[static_cast<std::size_t>(a)] = hi[static_cast<std::size_t>(a)];
    if (!(hi[static_cast<std::size_t>(a)] > lo[static_cast<std::size_t>(a)])) g.fail("qmax", "must exceed qmin");
  }
  return s;
}

PhysicsSpec readPhysics(const ConfigReader& root, bool needHbar, bool needPotential) {
  const auto p = root.section("physics");
  PhysicsSpec s;
  if (needHbar) s.hbar = p.positive("hbar");
  s.mass = p.positive("mass");
  if (needPotential) {
    const auto v = p.section("potential");
    s.potential = v.choice("kind", {"free", "harmonic"});
    if (s.potential == "harmonic") s.omega = v.positive("omega");
  }
  return s;
}

Potential PhysicsSpec::makePotential() const {
  if (potential == "harmonic") return Potential::harmonic(omega, mass);
  return Potential::free();
}

EnsembleSpec readEnsemble(const ConfigReader& root, const std::vector<SamplerKind>& allowed) {
  const auto e = root.section("ensemble");
  EnsembleSpec s;
  s.count = static_cast<std::size_t>(e.integer("N", 1));
  if (s.count > 10'000'000) e.fail("N", "at most 1e7 trajectories");
  std::vector<std::string> names;
  for (auto k : allowed) names.emplace_back(samplerName(k));
  const std::string kind = e.choice("sampler", names);
  for (auto k : allowed)
    if (kind == samplerName(k)) s.sampler = k;
  s.seed = e.integer("seed");
  return s;
}

OutputSpec readOutput(const ConfigReader& root) {
  const auto o = root.section("output");
  OutputSpec s;
  s.directory = o.text("directory");
  if (s.directory.empty()) o.fail("directory", "must not be empty");
  if (std::filesystem::path(s.directory).is_absolute() || s.directory.find("..") != std::string::npos)
    o.fail("directory", "must be a relative path below the output root");
  for (const auto& f : o.texts("formats")) {
    if (f == "csv") s.csv = true;
    else if (f == "fields") s.fields = true;
    else o.fail("formats", "unknown format '" + f + "' (csv, fields)");
  }
  s.trajectories = o.has("trajectories") ? static_cast<std::size_t>(o.integer("trajectories")) : 100;
  return s;
}

Json parseJson(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError("<document>", std::string("invalid JSON: ") + e.what());
  }
}

Json loadJson(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("<document>", "cannot read " + file.string());
  std::ostringstream os;
  os << in.rdbuf();
  return parseJson(os.str());
}

}  // namespace bohmlab::scenario
