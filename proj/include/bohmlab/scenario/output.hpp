#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bohmlab/recon/reconstruction.hpp"
#include "bohmlab/traj/trajectory.hpp"

namespace bohmlab::scenario {

inline constexpr const char* kOutputRootEnv = "BOHMLAB_OUTPUT_ROOT";
inline constexpr const char* kDefaultOutputRoot = "bohmlab-runs";

// $BOHMLAB_OUTPUT_ROOT if set and non-empty, else ./bohmlab-runs.
std::filesystem::path outputRoot();

/// traj_id,t,q1[,q2],halted
///
/// One row per recorded point. `halted` is the trajectory's final status
/// (1 on every row of a trajectory that stopped at a node). Ids start at `firstId`.
void writeTrajectoryCsv(std::ostream& out, std::span<const Trajectory> trajectories, std::size_t firstId = 0);

struct EnsembleStatsRow {
  double t = 0.0;
  double ks = 0.0;
  double haltedFraction = 0.0;
};

// t,ks_stat,halted_frac
void writeEnsembleStatsCsv(std::ostream& out, std::span<const EnsembleStatsRow> rows);

// delta,k,errS,errR,slope
void writeConvergenceCsv(std::ostream& out, std::span<const ConvergenceRow> rows);

/// Generic numeric table: header line then rows, 17 significant digits.
void writeTableCsv(std::ostream& out, const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& rows);

}  // namespace bohmlab::scenario
