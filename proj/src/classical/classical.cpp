#include "bohmlab/classical/classical.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bohmlab/errors.hpp"

namespace bohmlab {

namespace {

Point axpy(const Point& x, double a, const Point& y) { return {x[0] + a * y[0], x[1] + a * y[1]}; }

double distance(const Point& a, const Point& b, int dim) {
  double s = 0.0;
  for (int k = 0; k < dim; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

std::size_t stepCount(double span, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("classical dt must be positive");
  if (!(span >= 0.0)) throw std::invalid_argument("classical end time precedes start time");
  return static_cast<std::size_t>(std::ceil(span / dt - 1e-12));
}

}  // namespace

Point initialMomentum(const ClassicalState& state) {
  const bool usable = state.action && state.action->defined(state.Q0, state.t0);
  if (usable) {
    const Point g = state.action->gradient(state.Q0, state.t0);
    if (state.P0) {
      const double gap = distance(g, *state.P0, state.dim);
      if (!(gap < kMomentumMatchTolerance)) {
        std::ostringstream os;
        os << "P0 disagrees with grad S at Q0 by " << gap;
        throw PreparationMismatchError(os.str());
      }
    }
    return g;
  }
  if (state.P0) return *state.P0;
  std::ostringstream os;
  os << "action gradient undefined at t0=" << state.t0 << " and no P0 given";
  throw UndefinedGradientError(os.str());
}

Trajectory classicalTrajectory(const ClassicalState& state, double T, double dt, double mass,
                               const Potential& potential) {
  if (!(mass > 0.0)) throw std::invalid_argument("classical mass must be positive");
  if (state.action && state.action->dim() != state.dim) throw std::invalid_argument("action dimension mismatch");
  const Point p0 = initialMomentum(state);
  const std::size_t steps = stepCount(T - state.t0, dt);
  const double h = steps == 0 ? 0.0 : (T - state.t0) / static_cast<double>(steps);
  const int dim = state.dim;

  Trajectory tr;
  tr.dim = dim;
  tr.times.reserve(steps + 1);
  tr.positions.reserve(steps + 1);
  tr.times.push_back(state.t0);
  tr.positions.push_back(state.Q0);

  const bool guided = state.action && state.action->defined(state.Q0, state.t0);
  Point q = state.Q0, p = p0;
  auto force = [&](const Point& x) {
    Point f = potential.gradientAt(x, dim);
    return Point{-f[0], dim == 2 ? -f[1] : 0.0};
  };
  auto velocity = [&](const Point& x, double t) {
    Point g = state.action->gradient(x, t);
    return Point{g[0] / mass, dim == 2 ? g[1] / mass : 0.0};
  };

  for (std::size_t k = 0; k < steps; ++k) {
    const double t = state.t0 + static_cast<double>(k) * h;
    if (guided) {
      const Point k1 = velocity(q, t);
      const Point k2 = velocity(axpy(q, h / 2, k1), t + h / 2);
      const Point k3 = velocity(axpy(q, h / 2, k2), t + h / 2);
      const Point k4 = velocity(axpy(q, h, k3), t + h);
      for (int a = 0; a < dim; ++a) q[a] += h / 6.0 * (k1[a] + 2 * k2[a] + 2 * k3[a] + k4[a]);
    } else {
      // Hamilton: dq = p/m, dp = -grad V.
      const Point a1 = p, f1 = force(q);
      const Point a2 = axpy(p, h / 2, f1), f2 = force(axpy(q, h / (2 * mass), a1));
      const Point a3 = axpy(p, h / 2, f2), f3 = force(axpy(q, h / (2 * mass), a2));
      const Point a4 = axpy(p, h, f3), f4 = force(axpy(q, h / mass, a3));
      for (int a = 0; a < dim; ++a) {
        q[a] += h / (6.0 * mass) * (a1[a] + 2 * a2[a] + 2 * a3[a] + a4[a]);
        p[a] += h / 6.0 * (f1[a] + 2 * f2[a] + 2 * f3[a] + f4[a]);
      }
    }
    tr.times.push_back(k + 1 == steps ? T : state.t0 + static_cast<double>(k + 1) * h);
    tr.positions.push_back(q);
  }
  return tr;
}

HollandReport hollandNonuniqueness(double P, double Q0, double mass, double t0, double T, double dt,
                                   std::size_t residualPoints, std::uint64_t seed) {
  if (!(t0 > 0.0)) throw std::invalid_argument("circular branch needs t0 > 0");
  if (!(T > t0)) throw std::invalid_argument("Holland run needs T > t0");
  const ActionField s1 = ActionField::planeWave({P, 0.0}, mass);
  const ActionField s2 = ActionField::circular({Q0, 0.0}, mass, 0.0);

  ClassicalState state;
  state.Q0 = {Q0 + P * t0 / mass, 0.0};
  state.t0 = t0;
  HollandReport r;
  state.action = s1;
  r.planeWave = classicalTrajectory(state, T, dt, mass);
  state.action = s2;
  r.circular = classicalTrajectory(state, T, dt, mass);

  for (std::size_t k = 0; k < r.planeWave.times.size(); ++k) {
    const double a = r.planeWave.positions[k][0], b = r.circular.positions[k][0];
    const double line = Q0 + P * r.planeWave.times[k] / mass;
    r.maxDeviation = std::max(r.maxDeviation, std::abs(a - b));
    r.maxLineDeviation = std::max({r.maxLineDeviation, std::abs(a - line), std::abs(b - line)});
  }
  // Residual box: a window around the realized segment.
  const double lo = std::min(Q0, Q0 + P * T / mass) - 10.0, hi = std::max(Q0, Q0 + P * T / mass) + 10.0;
  r.residualPlaneWave = sampleHjResidual(s1, residualPoints, seed, {lo, 0.0}, {hi, 0.0}, t0, T);
  r.residualCircular = sampleHjResidual(s2, residualPoints, seed + 1, {lo, 0.0}, {hi, 0.0}, t0, T);
  return r;
}

DivergenceReport classicalDivergence(const ActionField& a, const ActionField& b, const Point& q0, double t0,
                                     double T, double dt, double mass) {
  if (a.dim() != b.dim()) throw std::invalid_argument("actions differ in dimension");
  DivergenceReport r;
  r.initialGradientGap = distance(a.gradient(q0, t0), b.gradient(q0, t0), a.dim());
  if (!(r.initialGradientGap < kPreparationTolerance)) {
    std::ostringstream os;
    os << "initial action gradients differ by " << r.initialGradientGap;
    throw PreparationMismatchError(os.str());
  }
  ClassicalState s;
  s.dim = a.dim();
  s.Q0 = q0;
  s.t0 = t0;
  s.action = a;
  r.a = classicalTrajectory(s, T, dt, mass);
  s.action = b;
  r.b = classicalTrajectory(s, T, dt, mass);
  r.times = r.a.times;
  r.separation.resize(r.times.size());
  for (std::size_t k = 0; k < r.times.size(); ++k)
    r.separation[k] = distance(r.a.positions[k], r.b.positions[k], a.dim());
  return r;
}

}  // namespace bohmlab
