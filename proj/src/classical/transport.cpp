#include "bohmlab/classical/transport.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bohmlab/errors.hpp"
#include "bohmlab/field/fft.hpp"
#include "bohmlab/field/interp.hpp"
#include "bohmlab/kernels/characteristic_kernels.hpp"

namespace bohmlab {

namespace {

void validate(const ClassicalDensity& d0, const ActionField& action, const TransportConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("transport dt must be positive");
  if (!(cfg.endTime >= d0.time)) throw std::invalid_argument("transport end time precedes the initial density");
  if (cfg.recordStride == 0) throw std::invalid_argument("transport record stride must be positive");
  if (!(cfg.mass > 0.0)) throw std::invalid_argument("transport mass must be positive");
  if (!(cfg.causticThreshold > 0.0)) throw std::invalid_argument("caustic threshold must be positive");
  if (d0.density.grid().dim() != action.dim()) throw std::invalid_argument("density and action dimensions differ");
  for (double v : d0.density.values())
    if (v < 0.0) throw std::invalid_argument("classical density must be non-negative");
  if (!action.defined(d0.density.grid().node(0), d0.time))
    throw UndefinedGradientError("action undefined at the initial transport time " + std::to_string(d0.time));
}

// One recorded slice from converged feet.
void store(TransportResult& r, const SpatialGrid& g, const RealField& rho0, std::span<const Foot> feet, double t,
           double mass) {
  const std::size_t n = g.size();
  const int dim = g.dim();
  std::vector<double> rho(n), s(n);
  std::vector<std::vector<double>> v(dim, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& y = feet[i].run.state;
    const double det = determinant(y.J, dim);
    r.minJacobian = std::min(r.minJacobian, det);
    // Cubic undershoot in far tails can dip below zero; a density cannot.
    rho[i] = std::max(0.0, interpolate<double>(g, rho0.values(), feet[i].q0) / det);
    s[i] = y.S;
    for (int a = 0; a < dim; ++a) v[a][i] = y.P[a] / mass;
    if (!feet[i].converged) ++r.unconvergedFeet;
  }
  r.times.push_back(t);
  r.densities.push_back({RealField(g, std::move(rho), FieldUnit::ProbabilityDensity), t});
  r.actions.emplace_back(g, std::move(s), FieldUnit::Action);
  std::vector<RealField> vel;
  for (int a = 0; a < dim; ++a) vel.emplace_back(g, std::move(v[a]), FieldUnit::Velocity);
  r.velocities.push_back(std::move(vel));
}

}  // namespace

ActionField TransportResult::action() const {
  if (actions.empty()) throw std::logic_error("empty transport result");
  return ActionField::gridTransported(actions, times, mass);
}

double TransportResult::maxMassDrift() const {
  double drift = 0.0;
  for (const auto& d : densities) drift = std::max(drift, std::abs(d.total() - densities.front().total()));
  return drift;
}

TransportResult transportClassical(const ClassicalDensity& density0, const ActionField& action,
                                   const TransportConfig& cfg) {
  validate(density0, action, cfg);
  const auto& g = density0.density.grid();
  const double t0 = density0.time;
  const double span = cfg.endTime - t0;
  const auto steps = span > 0.0 ? static_cast<std::size_t>(std::ceil(span / cfg.dt - 1e-12)) : std::size_t{0};
  const double h = steps ? span / static_cast<double>(steps) : cfg.dt;

  CharacteristicSetup setup;
  setup.action = &action;
  setup.potential = &cfg.potential;
  setup.mass = cfg.mass;
  setup.dim = g.dim();
  setup.t0 = t0;
  setup.dt = h * (1.0 + 1e-12);
  setup.causticThreshold = cfg.causticThreshold;

  std::vector<Foot> feet(g.size());
  for (std::size_t i = 0; i < feet.size(); ++i) feet[i].q0 = g.node(i);

  TransportResult r;
  r.mass = cfg.mass;
  // The initial slice is the input itself, not a resampling of it.
  {
    kernels::solveFeet(setup, g, t0, feet, cfg.execution);
    store(r, g, density0.density, feet, t0, cfg.mass);
    r.densities.front().density = density0.density;
  }

  for (std::size_t k = 1; k <= steps; ++k) {
    if (k % cfg.recordStride != 0 && k != steps) continue;
    const double t = k == steps ? cfg.endTime : t0 + static_cast<double>(k) * h;
    kernels::solveFeet(setup, g, t, feet, cfg.execution);
    bool hit = false;
    double when = t;
    for (const auto& f : feet)
      if (f.run.caustic) {
        hit = true;
        when = std::min(when, f.run.causticTime);
      }
    if (hit) {
      r.caustic = true;
      r.causticTime = when;
      break;
    }
    store(r, g, density0.density, feet, t, cfg.mass);
  }
  return r;
}

std::vector<double> classicalContinuityResidual(const TransportResult& r) {
  std::vector<double> out;
  if (r.times.size() < 3) return out;
  const auto& g = r.densities.front().density.grid();
  for (std::size_t k = 1; k + 1 < r.times.size(); ++k) {
    const auto& rm = r.densities[k - 1].density;
    const auto& rp = r.densities[k + 1].density;
    const auto& rho = r.densities[k].density;
    const double dt = r.times[k + 1] - r.times[k - 1];
    std::vector<double> res(g.size());
    for (std::size_t i = 0; i < res.size(); ++i) res[i] = (rp[i] - rm[i]) / dt;
    for (int a = 0; a < g.dim(); ++a) {
      std::vector<double> flux(g.size());
      for (std::size_t i = 0; i < flux.size(); ++i) flux[i] = rho[i] * r.velocities[k][a][i];
      const auto d = derivative(g, std::span<const double>(flux), a);
      for (std::size_t i = 0; i < res.size(); ++i) res[i] += d[i];
    }
    double m = 0.0;
    for (double x : res) m = std::max(m, std::abs(x));
    out.push_back(m);
  }
  return out;
}

}  // namespace bohmlab
