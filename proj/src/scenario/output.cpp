#include "bohmlab/scenario/output.hpp"

#include <cstdlib>
#include <ostream>

#include "bohmlab/field/field_io.hpp"

namespace bohmlab::scenario {

std::filesystem::path outputRoot() {
  const char* env = std::getenv(kOutputRootEnv);
  if (env != nullptr && *env != '\0') return env;
  return kDefaultOutputRoot;
}

void writeTrajectoryCsv(std::ostream& out, std::span<const Trajectory> trajectories, std::size_t firstId) {
  const int dim = trajectories.empty() ? 1 : trajectories.front().dim;
  out << (dim == 2 ? "traj_id,t,q1,q2,halted\n" : "traj_id,t,q1,halted\n");
  for (std::size_t k = 0; k < trajectories.size(); ++k) {
    const auto& tr = trajectories[k];
    const char* halted = tr.halted() ? "1" : "0";
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      out << firstId + k << ',' << formatDouble(tr.times[i]) << ',' << formatDouble(tr.positions[i][0]);
      if (dim == 2) out << ',' << formatDouble(tr.positions[i][1]);
      out << ',' << halted << '\n';
    }
  }
}

void writeEnsembleStatsCsv(std::ostream& out, std::span<const EnsembleStatsRow> rows) {
  out << "t,ks_stat,halted_frac\n";
  for (const auto& r : rows)
    out << formatDouble(r.t) << ',' << formatDouble(r.ks) << ',' << formatDouble(r.haltedFraction) << '\n';
}

void writeConvergenceCsv(std::ostream& out, std::span<const ConvergenceRow> rows) {
  out << "delta,k,errS,errR,slope\n";
  for (const auto& r : rows)
    out << formatDouble(r.delta) << ',' << r.k << ',' << formatDouble(r.errS) << ',' << formatDouble(r.errR) << ','
        << formatDouble(r.slope) << '\n';
}

void writeTableCsv(std::ostream& out, const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << formatDouble(row[i]);
    out << '\n';
  }
}

}  // namespace bohmlab::scenario
