#include "bohmlab/classical/action.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "bohmlab/errors.hpp"

namespace bohmlab {

namespace {

// Lagrange weights on nodes at offsets -1..2 for value, first and second derivative.
std::array<double, 4> lagrange(double x, int order) {
  switch (order) {
    case 0:
      return {-x * (x - 1.0) * (x - 2.0) / 6.0, (x + 1.0) * (x - 1.0) * (x - 2.0) / 2.0,
              -(x + 1.0) * x * (x - 2.0) / 2.0, (x + 1.0) * x * (x - 1.0) / 6.0};
    case 1:
      return {-(3.0 * x * x - 6.0 * x + 2.0) / 6.0, (3.0 * x * x - 4.0 * x - 1.0) / 2.0,
              -(3.0 * x * x - 2.0 * x - 2.0) / 2.0, (3.0 * x * x - 1.0) / 6.0};
    default:
      return {1.0 - x, 3.0 * x - 2.0, 1.0 - 3.0 * x, x};
  }
}

// Stencil kept inside the grid: near the edges the cubic extrapolates rather than wraps.
struct Clamped {
  std::array<std::size_t, 4> nodes;
  std::array<double, 4> weights;
};

Clamped clamped(const SpatialGrid& g, int axis, double q, int order) {
  const auto n = static_cast<std::ptrdiff_t>(g.points(axis));
  const double u = g.fractionalIndex(axis, q);
  const auto base = std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(std::floor(u)) - 1, 0, n - 4);
  Clamped c;
  c.weights = lagrange(u - static_cast<double>(base) - 1.0, order);
  const double scale = std::pow(g.spacing(axis), -order);
  for (int k = 0; k < 4; ++k) {
    c.nodes[k] = static_cast<std::size_t>(base + k);
    c.weights[k] *= scale;
  }
  return c;
}

double sliceValue(const RealField& f, const Point& q, std::array<int, 2> order) {
  const auto& g = f.grid();
  const auto s0 = clamped(g, 0, q[0], order[0]);
  if (g.dim() == 1) {
    double acc = 0.0;
    for (int k = 0; k < 4; ++k) acc += s0.weights[k] * f[s0.nodes[k]];
    return acc;
  }
  const auto s1 = clamped(g, 1, q[1], order[1]);
  double acc = 0.0;
  for (int i = 0; i < 4; ++i) {
    double row = 0.0;
    for (int j = 0; j < 4; ++j) row += s1.weights[j] * f[g.flat(s0.nodes[i], s1.nodes[j])];
    acc += s0.weights[i] * row;
  }
  return acc;
}

double norm2(const Point& p, int dim) {
  double s = 0.0;
  for (int a = 0; a < dim; ++a) s += p[a] * p[a];
  return s;
}

}  // namespace

ActionField ActionField::planeWave(Point momentum, double mass, double s0, int dim) {
  if (!(mass > 0.0)) throw std::invalid_argument("action mass must be positive");
  if (dim != 1 && dim != 2) throw std::invalid_argument("action dimension must be 1 or 2");
  ActionField a;
  a.form_ = ActionForm::PlaneWave;
  a.dim_ = dim;
  a.mass_ = mass;
  a.p_ = momentum;
  if (dim == 1) a.p_[1] = 0.0;
  a.s0_ = s0;
  return a;
}

ActionField ActionField::circular(Point center, double mass, double emission, int dim) {
  if (!(mass > 0.0)) throw std::invalid_argument("action mass must be positive");
  if (dim != 1 && dim != 2) throw std::invalid_argument("action dimension must be 1 or 2");
  ActionField a;
  a.form_ = ActionForm::Circular;
  a.dim_ = dim;
  a.mass_ = mass;
  a.center_ = center;
  if (dim == 1) a.center_[1] = 0.0;
  a.emission_ = emission;
  return a;
}

ActionField ActionField::gridTransported(std::vector<RealField> slices, std::vector<double> times, double mass) {
  if (slices.empty() || slices.size() != times.size())
    throw std::invalid_argument("grid action needs one time per slice");
  if (!(mass > 0.0)) throw std::invalid_argument("action mass must be positive");
  for (std::size_t i = 1; i < slices.size(); ++i) {
    if (slices[i].grid() != slices[0].grid()) throw std::invalid_argument("grid action slices must share a grid");
    if (!(times[i] > times[i - 1])) throw std::invalid_argument("grid action times must increase");
  }
  for (int a = 0; a < slices[0].grid().dim(); ++a)
    if (slices[0].grid().points(a) < 4) throw std::invalid_argument("grid action needs 4 points per axis");
  ActionField a;
  a.form_ = ActionForm::GridTransported;
  a.dim_ = slices[0].grid().dim();
  a.mass_ = mass;
  a.slices_ = std::move(slices);
  a.times_ = std::move(times);
  return a;
}

std::string ActionField::describe() const {
  std::ostringstream os;
  switch (form_) {
    case ActionForm::PlaneWave:
      os << "planeWave(P=" << p_[0];
      if (dim_ == 2) os << "," << p_[1];
      os << ", S0=" << s0_ << ")";
      break;
    case ActionForm::Circular:
      os << "circular(Q0=" << center_[0];
      if (dim_ == 2) os << "," << center_[1];
      os << ", te=" << emission_ << ")";
      break;
    case ActionForm::GridTransported:
      os << "gridTransported(" << slices_.size() << " slices)";
      break;
  }
  return os.str();
}

std::vector<std::string> ActionField::domainWarnings() const {
  std::vector<std::string> w;
  if (form_ == ActionForm::Circular) {
    std::ostringstream os;
    os << "circular action undefined for t <= " << emission_ << "; its gradient is singular at the emission time";
    w.push_back(os.str());
  } else if (form_ == ActionForm::GridTransported) {
    w.push_back("grid action extrapolates near box edges");
    if (times_.size() > 1) {
      std::ostringstream os;
      os << "grid action only defined for t in [" << times_.front() << ", " << times_.back() << "]";
      w.push_back(os.str());
    }
  }
  return w;
}

bool ActionField::defined(const Point&, double t) const {
  if (!std::isfinite(t)) return false;
  switch (form_) {
    case ActionForm::PlaneWave:
      return true;
    case ActionForm::Circular:
      return t > emission_;
    case ActionForm::GridTransported: {
      if (times_.size() == 1) return true;
      const double tol = 1e-9 * std::max(1.0, std::abs(times_.back()));
      return t >= times_.front() - tol && t <= times_.back() + tol;
    }
  }
  return false;
}

void ActionField::requireDefined(const Point& q, double t) const {
  if (defined(q, t)) return;
  std::ostringstream os;
  os << describe() << " is undefined at t=" << t;
  throw UndefinedGradientError(os.str());
}

double ActionField::gridValue(const Point& q, double t, std::array<int, 2> order, bool dt) const {
  if (times_.size() == 1) return dt ? 0.0 : sliceValue(slices_[0], q, order);
  const std::size_t n = times_.size();
  std::size_t i = static_cast<std::size_t>(std::upper_bound(times_.begin(), times_.end(), t) - times_.begin());
  i = std::clamp<std::size_t>(i, 1, n - 1) - 1;
  // Values on slices i-1 .. i+2 (shifted inward at the ends), then Hermite.
  const std::size_t lo = n < 4 ? 0 : std::min(i == 0 ? 0 : i - 1, n - 4);
  const std::size_t hi = std::min(n - 1, lo + 3);
  std::array<double, 4> y{};
  for (std::size_t k = lo; k <= hi; ++k) y[k - lo] = sliceValue(slices_[k], q, order);
  auto at = [&](std::size_t k) { return y[k - lo]; };
  // Slope from the quadratic through three neighbouring slices (one-sided at the ends).
  auto slope = [&](std::size_t k) {
    if (n == 2) return (at(1) - at(0)) / (times_[1] - times_[0]);
    const std::size_t a = std::clamp<std::size_t>(k, 1, n - 2) - 1;
    const double x = times_[k], t0 = times_[a], t1 = times_[a + 1], t2 = times_[a + 2];
    return at(a) * (2 * x - t1 - t2) / ((t0 - t1) * (t0 - t2)) + at(a + 1) * (2 * x - t0 - t2) / ((t1 - t0) * (t1 - t2)) +
           at(a + 2) * (2 * x - t0 - t1) / ((t2 - t0) * (t2 - t1));
  };
  const double t0 = times_[i], t1 = times_[i + 1], h = t1 - t0;
  const double s = (t - t0) / h, s2 = s * s, s3 = s2 * s;
  const double y0 = at(i), y1 = at(i + 1), m0 = slope(i), m1 = slope(i + 1);
  if (!dt) return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * m0 + (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * m1;
  return ((6 * s2 - 6 * s) * y0 + (3 * s2 - 4 * s + 1) * h * m0 + (-6 * s2 + 6 * s) * y1 + (3 * s2 - 2 * s) * h * m1) / h;
}

double ActionField::evaluate(const Point& q, double t) const {
  requireDefined(q, t);
  switch (form_) {
    case ActionForm::PlaneWave: {
      double s = s0_ - norm2(p_, dim_) * t / (2.0 * mass_);
      for (int a = 0; a < dim_; ++a) s += p_[a] * q[a];
      return s;
    }
    case ActionForm::Circular: {
      Point d{q[0] - center_[0], dim_ == 2 ? q[1] - center_[1] : 0.0};
      return mass_ * norm2(d, dim_) / (2.0 * (t - emission_));
    }
    case ActionForm::GridTransported:
      return gridValue(q, t, {0, 0}, false);
  }
  return 0.0;
}

Point ActionField::gradient(const Point& q, double t) const {
  requireDefined(q, t);
  Point g{0.0, 0.0};
  for (int a = 0; a < dim_; ++a) {
    switch (form_) {
      case ActionForm::PlaneWave:
        g[a] = p_[a];
        break;
      case ActionForm::Circular:
        g[a] = mass_ * (q[a] - center_[a]) / (t - emission_);
        break;
      case ActionForm::GridTransported: {
        std::array<int, 2> order{0, 0};
        order[a] = 1;
        g[a] = gridValue(q, t, order, false);
        break;
      }
    }
  }
  return g;
}

Matrix2 ActionField::hessian(const Point& q, double t) const {
  requireDefined(q, t);
  Matrix2 h{};
  if (form_ == ActionForm::Circular) {
    for (int a = 0; a < dim_; ++a) h[a][a] = mass_ / (t - emission_);
  } else if (form_ == ActionForm::GridTransported) {
    for (int a = 0; a < dim_; ++a)
      for (int b = a; b < dim_; ++b) {
        std::array<int, 2> order{0, 0};
        ++order[a];
        ++order[b];
        h[a][b] = h[b][a] = gridValue(q, t, order, false);
      }
  }
  return h;
}

double ActionField::laplacian(const Point& q, double t) const {
  const auto h = hessian(q, t);
  return dim_ == 2 ? h[0][0] + h[1][1] : h[0][0];
}

double ActionField::timeDerivative(const Point& q, double t) const {
  requireDefined(q, t);
  switch (form_) {
    case ActionForm::PlaneWave:
      return -norm2(p_, dim_) / (2.0 * mass_);
    case ActionForm::Circular: {
      Point d{q[0] - center_[0], dim_ == 2 ? q[1] - center_[1] : 0.0};
      const double tau = t - emission_;
      return -mass_ * norm2(d, dim_) / (2.0 * tau * tau);
    }
    case ActionForm::GridTransported:
      return gridValue(q, t, {0, 0}, true);
  }
  return 0.0;
}

double ActionField::hjResidual(const Point& q, double t, const Potential& potential) const {
  return timeDerivative(q, t) + norm2(gradient(q, t), dim_) / (2.0 * mass_) + potential.valueAt(q, dim_);
}

ResidualSample sampleHjResidual(const ActionField& action, std::size_t count, std::uint64_t seed, Point qmin,
                                Point qmax, double tmin, double tmax, const Potential& potential) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double tlo = action.form() == ActionForm::Circular ? std::max(tmin, action.emission()) : tmin;
  if (!(tmax > tlo)) throw std::invalid_argument("residual sample window is empty");
  ResidualSample out;
  for (std::size_t k = 0; k < count; ++k) {
    Point q{0.0, 0.0};
    for (int a = 0; a < action.dim(); ++a) q[a] = qmin[a] + unit(rng) * (qmax[a] - qmin[a]);
    const double t = tmax - unit(rng) * (tmax - tlo);
    out.maxAbs = std::max(out.maxAbs, std::abs(action.hjResidual(q, t, potential)));
    ++out.points;
  }
  return out;
}

}  // namespace bohmlab
