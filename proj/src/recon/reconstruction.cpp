#include "bohmlab/recon/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "bohmlab/errors.hpp"
#include "bohmlab/field/interp.hpp"
#include "bohmlab/field/polar.hpp"
#include "bohmlab/kernels/ensemble_kernels.hpp"

namespace bohmlab {

namespace {

// d/dt at index i of the quadratic through three neighbouring samples (one-sided at the ends).
double timeDerivative(const std::vector<double>& t, const std::vector<double>& y, std::size_t i) {
  const std::size_t n = t.size();
  if (n < 2) return 0.0;
  if (n == 2) return (y[1] - y[0]) / (t[1] - t[0]);
  const std::size_t a = std::clamp<std::size_t>(i, 1, n - 2) - 1;
  const double x = t[i], t0 = t[a], t1 = t[a + 1], t2 = t[a + 2];
  return y[a] * (2 * x - t1 - t2) / ((t0 - t1) * (t0 - t2)) + y[a + 1] * (2 * x - t0 - t2) / ((t1 - t0) * (t1 - t2)) +
         y[a + 2] * (2 * x - t0 - t1) / ((t2 - t0) * (t2 - t1));
}

// Cumulative trapezoid of f from `start`.
std::vector<double> integrate(const std::vector<double>& t, const std::vector<double>& f, double start) {
  std::vector<double> out(t.size(), start);
  for (std::size_t i = 1; i < t.size(); ++i) out[i] = out[i - 1] + 0.5 * (t[i] - t[i - 1]) * (f[i] + f[i - 1]);
  return out;
}

// Times shared by every member (halted members shorten the window).
std::size_t commonWindow(const Bundle& b) {
  const auto& c = b.center();
  std::size_t n = c.times.size();
  for (const auto& m : b.members) {
    std::size_t i = 0;
    while (i < std::min(n, m.times.size()) && m.times[i] == c.times[i]) ++i;
    n = i;
  }
  return n;
}

}  // namespace

Bundle makeBundle(const GuidanceField& guidance, double q0, int k, double delta, const TrajectoryConfig& cfg,
                  Execution exec) {
  if (guidance.dim() != 1) throw std::invalid_argument("bundles are one-dimensional");
  if (k < 0) throw std::invalid_argument("bundle half-width k must be non-negative");
  if (k > 0 && !(delta > 0.0)) throw std::invalid_argument("bundle spacing must be positive");
  Bundle b;
  b.k = k;
  b.delta = delta;
  std::vector<Point> starts;
  for (int j = -k; j <= k; ++j) starts.push_back({q0 + j * delta, 0.0});
  b.members = kernels::integrateAll(guidance, starts, cfg, exec);
  // Interpolate R itself: |interpolated psi| wobbles at O((k dx)^4) even for constant R.
  const auto& psi0 = guidance.snapshots().front();
  std::vector<double> r0(psi0.size());
  for (std::size_t i = 0; i < r0.size(); ++i) r0[i] = std::abs(psi0[i]);
  for (const auto& s : starts) b.amplitude0.push_back(interpolate<double>(psi0.grid(), r0, s));
  return b;
}

Reconstruction reconstructAlongC(const Bundle& bundle, const Potential& potential, double mass, double hbar,
                                 double S0) {
  if (bundle.k < 2) {
    std::ostringstream os;
    os << "k=" << bundle.k << ": one trajectory (plus " << 2 * bundle.k
       << " neighbours) gives no transverse second derivative; k >= 2 is needed";
    throw InsufficientBundleError(os.str());
  }
  const auto k = static_cast<std::size_t>(bundle.k);
  if (bundle.members.size() != 2 * k + 1 || bundle.amplitude0.size() != 2 * k + 1)
    throw std::invalid_argument("bundle must hold 2k + 1 members and start amplitudes");
  if (!(mass > 0.0) || !(hbar > 0.0)) throw std::invalid_argument("mass and hbar must be positive");

  const std::size_t n = commonWindow(bundle);
  Reconstruction r;
  r.times.assign(bundle.center().times.begin(), bundle.center().times.begin() + static_cast<std::ptrdiff_t>(n));
  std::vector<double> xc(n), jc(n);
  r.R.resize(n);
  r.quantumPotential.resize(n);
  auto x = [&](std::size_t i, int j) { return bundle.members[k + j].positions[i][0]; };
  auto amp = [&](int j) { return bundle.amplitude0[k + j]; };
  const double d = bundle.delta;

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t m = 0; m + 1 < bundle.members.size(); ++m)
      if (!(bundle.members[m + 1].positions[i][0] > bundle.members[m].positions[i][0])) {
        std::ostringstream os;
        os << "bundle members " << m << " and " << m + 1 << " crossed by t=" << r.times[i];
        throw BundleCrossingError(os.str());
      }
    // Continuity along each path: R = R0 / sqrt(dx/dx0).
    std::array<double, 3> R{};
    for (int j = -1; j <= 1; ++j) R[j + 1] = amp(j) / std::sqrt((x(i, j + 1) - x(i, j - 1)) / (2 * d));
    const double h1 = x(i, 0) - x(i, -1), h2 = x(i, 1) - x(i, 0);
    const double lap = 2.0 * (h1 * R[2] - (h1 + h2) * R[1] + h2 * R[0]) / (h1 * h2 * (h1 + h2));
    xc[i] = x(i, 0);
    jc[i] = (x(i, 1) - x(i, -1)) / (2 * d);
    r.R[i] = R[1];
    r.quantumPotential[i] = -(hbar * hbar / (2 * mass)) * lap / R[1];
  }

  r.velocity.resize(n);
  r.divergence.resize(n);
  std::vector<double> lnj(n), rate(n);
  for (std::size_t i = 0; i < n; ++i) lnj[i] = std::log(jc[i]);
  for (std::size_t i = 0; i < n; ++i) {
    r.velocity[i] = timeDerivative(r.times, xc, i);
    r.divergence[i] = timeDerivative(r.times, lnj, i);  // div v = d ln J / dt along C
    rate[i] = 0.5 * mass * r.velocity[i] * r.velocity[i] - potential.valueAt({xc[i], 0.0}, 1) - r.quantumPotential[i];
  }
  r.S = integrate(r.times, rate, S0);
  return r;
}

std::vector<double> classicalReconstructAlongC(const Trajectory& trajectory, const Potential& potential, double mass,
                                               double S0) {
  if (!(mass > 0.0)) throw std::invalid_argument("mass must be positive");
  if (trajectory.dim != 1) throw std::invalid_argument("classical reconstruction is one-dimensional");
  const auto& t = trajectory.times;
  std::vector<double> x(t.size()), lag(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) x[i] = trajectory.positions[i][0];
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double v = timeDerivative(t, x, i);
    lag[i] = 0.5 * mass * v * v - potential.valueAt({x[i], 0.0}, 1);
  }
  return integrate(t, lag, S0);
}

AlongC solverAlongC(const GuidanceField& guidance, const Trajectory& path) {
  AlongC out;
  const auto snaps = guidance.snapshots();
  const auto gt = guidance.times();
  const double twoPiHbar = 2.0 * std::numbers::pi * guidance.hbar();
  for (std::size_t i = 0; i < path.times.size(); ++i) {
    const double t = path.times[i];
    const auto it = std::find_if(gt.begin(), gt.end(), [&](double s) { return std::abs(s - t) <= 1e-9 * std::max(1.0, std::abs(t)); });
    if (it == gt.end()) break;  // off the snapshot grid (e.g. a halt point)
    const auto polar = toPolar(snaps[static_cast<std::size_t>(it - gt.begin())], kDefaultNodeEps, guidance.hbar());
    double s = interpolate<double>(polar.grid(), polar.phase(), path.positions[i]);
    if (!out.S.empty()) s += twoPiHbar * std::round((out.S.back() - s) / twoPiHbar);
    out.times.push_back(t);
    out.S.push_back(s);
    out.R.push_back(interpolate<double>(polar.grid(), polar.amplitude(), path.positions[i]));
  }
  return out;
}

double relativeWindowError(const std::vector<double>& estimate, const std::vector<double>& oracle) {
  const std::size_t n = std::min(estimate.size(), oracle.size());
  if (n == 0) return std::numeric_limits<double>::quiet_NaN();
  double sum = 0.0, lo = oracle[0], hi = oracle[0], peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += (estimate[i] - oracle[i]) * (estimate[i] - oracle[i]);
    lo = std::min(lo, oracle[i]);
    hi = std::max(hi, oracle[i]);
    peak = std::max(peak, std::abs(oracle[i]));
  }
  double scale = hi - lo;
  if (!(scale > 1e-12 * peak)) scale = peak;
  if (!(scale > 0.0)) scale = 1.0;
  return std::sqrt(sum / static_cast<double>(n)) / scale;
}

std::vector<ConvergenceRow> bundleConvergence(const ReconstructionScenario& sc, int k,
                                              const std::vector<double>& deltas, Execution exec) {
  if (sc.guidance == nullptr) throw std::invalid_argument("scenario has no guidance field");
  if (deltas.empty()) throw std::invalid_argument("need at least one delta");
  const double dx = sc.guidance->grid().spacing(0);
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] >= 2.0 * dx)) throw std::invalid_argument("delta below two grid spacings");
    if (i > 0 && !(deltas[i] < deltas[i - 1])) throw std::invalid_argument("deltas must decrease");
  }
  std::vector<ConvergenceRow> rows;
  AlongC oracle;
  for (double d : deltas) {
    const Bundle b = makeBundle(*sc.guidance, sc.q0, k, d, sc.trajectory, exec);
    if (oracle.times.empty()) oracle = solverAlongC(*sc.guidance, b.center());
    const auto rec = reconstructAlongC(b, sc.potential, sc.guidance->mass(), sc.guidance->hbar(), oracle.S.front());
    ConvergenceRow row;
    row.delta = d;
    row.k = k;
    row.errS = relativeWindowError(rec.S, oracle.S);
    row.errR = relativeWindowError(rec.R, oracle.R);
    rows.push_back(row);
  }
  double slope = std::numeric_limits<double>::quiet_NaN();
  if (rows.size() >= 2 && std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.errS > 0.0; })) {
    double mx = 0, my = 0;
    for (const auto& r : rows) {
      mx += std::log(r.delta);
      my += std::log(r.errS);
    }
    mx /= static_cast<double>(rows.size());
    my /= static_cast<double>(rows.size());
    double sxy = 0, sxx = 0;
    for (const auto& r : rows) {
      sxy += (std::log(r.delta) - mx) * (std::log(r.errS) - my);
      sxx += (std::log(r.delta) - mx) * (std::log(r.delta) - mx);
    }
    slope = sxy / sxx;
  }
  for (auto& r : rows) r.slope = slope;
  return rows;
}

}  // namespace bohmlab
