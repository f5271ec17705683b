#include "bohmlab/classical/semiclassical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bohmlab/classical/classical.hpp"
#include "bohmlab/kernels/ensemble_kernels.hpp"
#include "bohmlab/schrodinger/propagator.hpp"
#include "bohmlab/schrodinger/states.hpp"

namespace bohmlab {

bool SemiclassicalResult::strictlyDecreasing() const {
  for (std::size_t i = 1; i < runs.size(); ++i)
    if (!(runs[i].maxError < runs[i - 1].maxError)) return false;
  return !runs.empty();
}

SemiclassicalResult semiclassicalCompare(const SemiclassicalConfig& cfg, Execution exec) {
  if (cfg.starts.empty()) throw std::invalid_argument("semiclassical comparison needs start points");
  if (cfg.hbars.empty()) throw std::invalid_argument("semiclassical comparison needs hbar values");
  if (!(cfg.T > 0.0) || !(cfg.dt > 0.0) || !(cfg.trajectoryDt > 0.0))
    throw std::invalid_argument("semiclassical T, dt and trajectoryDt must be positive");
  const int dim = cfg.grid.dim();
  const ActionField classical = ActionField::planeWave(cfg.momentum, cfg.mass, 0.0, dim);

  SemiclassicalResult out;
  for (double hbar : cfg.hbars) {
    if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
    const WaveField psi0 = cfg.state == SemiclassicalState::GaussianPacket
                               ? gaussianPacket(cfg.grid, cfg.center, cfg.sigma, cfg.momentum, hbar)
                               : planeWave(cfg.grid, cfg.momentum, hbar);
    PropagatorConfig pc;
    pc.dt = cfg.dt;
    pc.steps = static_cast<std::size_t>(std::lround(cfg.T / cfg.dt));
    pc.hbar = hbar;
    pc.mass = cfg.mass;
    pc.snapshotStride = cfg.snapshotStride;
    const GuidanceField guidance(propagate(psi0, Potential::free(), pc).snapshots, cfg.mass, hbar);

    TrajectoryConfig tc;
    tc.dt = cfg.trajectoryDt;
    const auto bohm = kernels::integrateAll(guidance, cfg.starts, tc, exec);

    SemiclassicalRun run;
    run.hbar = hbar;
    run.times = resolvedRecordTimes(guidance, tc);
    run.error.assign(run.times.size(), 0.0);
    for (std::size_t s = 0; s < cfg.starts.size(); ++s) {
      const auto& tr = bohm[s];
      if (tr.halted()) ++run.halted;
      ClassicalState state;
      state.dim = dim;
      state.Q0 = cfg.starts[s];
      state.t0 = run.times.front();
      state.action = classical;
      for (std::size_t k = 0; k < tr.times.size() && k < run.times.size(); ++k) {
        if (tr.times[k] != run.times[k]) break;  // halt point off the record grid
        const Point qc = classicalTrajectory(state, tr.times[k], cfg.trajectoryDt, cfg.mass).end();
        double d = 0.0;
        for (int a = 0; a < dim; ++a) d += (tr.positions[k][a] - qc[a]) * (tr.positions[k][a] - qc[a]);
        run.error[k] = std::max(run.error[k], std::sqrt(d));
      }
    }
    run.maxError = *std::max_element(run.error.begin(), run.error.end());
    out.runs.push_back(std::move(run));
  }
  return out;
}

}  // namespace bohmlab
