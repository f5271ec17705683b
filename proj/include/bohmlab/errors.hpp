#pragma once

#include <stdexcept>
#include <string>

namespace bohmlab {

// Base for every typed failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// toPolar on a field with no node above the relative threshold.
class AllNodesError : public Error {
 public:
  AllNodesError() : Error("every grid node is below the node threshold") {}
};

class GridTooCoarseError : public Error {
 public:
  using Error::Error;
};

// Guiding velocity requested where |psi| is below the node threshold.
class NodeProximityError : public Error {
 public:
  explicit NodeProximityError(double t)
      : Error("configuration too close to a node of psi at t=" + std::to_string(t)), time(t) {}
  double time;
};

class PreparationMismatchError : public Error {
 public:
  using Error::Error;
};

// Classical action gradient is undefined at the start point and no momentum was given.
class UndefinedGradientError : public Error {
 public:
  using Error::Error;
};

// Reconstruction along a single curve needs transverse neighbours.
class InsufficientBundleError : public Error {
 public:
  using Error::Error;
};

class BundleCrossingError : public Error {
 public:
  using Error::Error;
};

// Configuration rejected before any run; `path` names the offending key, e.g. "run.dt".
class ConfigError : public Error {
 public:
  ConfigError(std::string key_path, const std::string& what)
      : Error(key_path + ": " + what), path(std::move(key_path)) {}
  std::string path;
};

}  // namespace bohmlab
