#include "bohmlab/classical/characteristics.hpp"

#include <algorithm>
#include <cmath>

namespace bohmlab {

namespace {

Matrix2 identity(int dim) {
  Matrix2 m{};
  m[0][0] = 1.0;
  if (dim == 2) m[1][1] = 1.0;
  return m;
}

Matrix2 mul(const Matrix2& a, const Matrix2& b) {
  Matrix2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}

Matrix2 potentialHessian(const Potential& v, const Point& x, int dim) {
  Matrix2 h{};
  switch (v.kind()) {
    case Potential::Kind::Free:
      return h;
    case Potential::Kind::Harmonic:
      for (int a = 0; a < dim; ++a) h[a][a] = v.mass() * v.omega() * v.omega();
      return h;
    case Potential::Kind::CustomGrid:
      break;
  }
  const double e = 1e-5;
  for (int b = 0; b < dim; ++b) {
    Point xp = x, xm = x;
    xp[b] += e;
    xm[b] -= e;
    const Point gp = v.gradientAt(xp, dim), gm = v.gradientAt(xm, dim);
    for (int a = 0; a < dim; ++a) h[a][b] = (gp[a] - gm[a]) / (2 * e);
  }
  return h;
}

struct Rate {
  Point dX, dP;
  Matrix2 dJ, dK;
  double dS;
};

Rate rate(const CharacteristicSetup& s, const CharacteristicState& y) {
  Rate r{};
  const Point grad = s.potential->gradientAt(y.X, s.dim);
  const Matrix2 hess = potentialHessian(*s.potential, y.X, s.dim);
  const Matrix2 hj = mul(hess, y.J);
  double ke = 0.0;
  for (int a = 0; a < s.dim; ++a) {
    r.dX[a] = y.P[a] / s.mass;
    r.dP[a] = -grad[a];
    ke += y.P[a] * y.P[a];
    for (int b = 0; b < s.dim; ++b) {
      r.dJ[a][b] = y.K[a][b] / s.mass;
      r.dK[a][b] = -hj[a][b];
    }
  }
  r.dS = ke / (2.0 * s.mass) - s.potential->valueAt(y.X, s.dim);
  return r;
}

CharacteristicState advance(const CharacteristicState& y, double h, const Rate& r) {
  CharacteristicState z = y;
  for (int a = 0; a < 2; ++a) {
    z.X[a] += h * r.dX[a];
    z.P[a] += h * r.dP[a];
    for (int b = 0; b < 2; ++b) {
      z.J[a][b] += h * r.dJ[a][b];
      z.K[a][b] += h * r.dK[a][b];
    }
  }
  z.S += h * r.dS;
  return z;
}

}  // namespace

double determinant(const Matrix2& m, int dim) {
  return dim == 2 ? m[0][0] * m[1][1] - m[0][1] * m[1][0] : m[0][0];
}

CharacteristicRun integrateCharacteristic(const CharacteristicSetup& s, const Point& q0, double t) {
  CharacteristicRun run;
  auto& y = run.state;
  y.X = q0;
  y.P = s.action->gradient(q0, s.t0);
  y.J = identity(s.dim);
  y.K = s.action->hessian(q0, s.t0);
  y.S = s.action->evaluate(q0, s.t0);
  const double span = t - s.t0;
  if (span <= 0.0) return run;
  const auto steps = static_cast<std::size_t>(std::ceil(span / s.dt - 1e-12));
  const double h = span / static_cast<double>(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    const Rate k1 = rate(s, y);
    const Rate k2 = rate(s, advance(y, h / 2, k1));
    const Rate k3 = rate(s, advance(y, h / 2, k2));
    const Rate k4 = rate(s, advance(y, h, k3));
    Rate sum{};
    for (int a = 0; a < 2; ++a) {
      sum.dX[a] = (k1.dX[a] + 2 * k2.dX[a] + 2 * k3.dX[a] + k4.dX[a]) / 6.0;
      sum.dP[a] = (k1.dP[a] + 2 * k2.dP[a] + 2 * k3.dP[a] + k4.dP[a]) / 6.0;
      for (int b = 0; b < 2; ++b) {
        sum.dJ[a][b] = (k1.dJ[a][b] + 2 * k2.dJ[a][b] + 2 * k3.dJ[a][b] + k4.dJ[a][b]) / 6.0;
        sum.dK[a][b] = (k1.dK[a][b] + 2 * k2.dK[a][b] + 2 * k3.dK[a][b] + k4.dK[a][b]) / 6.0;
      }
    }
    sum.dS = (k1.dS + 2 * k2.dS + 2 * k3.dS + k4.dS) / 6.0;
    y = advance(y, h, sum);
    const double det = determinant(y.J, s.dim);
    run.minDetJ = std::min(run.minDetJ, det);
    if (det < s.causticThreshold) {
      run.caustic = true;
      run.causticTime = s.t0 + static_cast<double>(k + 1) * h;
      return run;
    }
  }
  return run;
}

Foot solveFoot(const CharacteristicSetup& s, const Point& q, double t, const Point& guess) {
  Foot f;
  f.q0 = guess;
  double scale = 1.0;
  for (int a = 0; a < s.dim; ++a) scale = std::max(scale, std::abs(q[a]));
  for (f.iterations = 1; f.iterations <= 50; ++f.iterations) {
    f.run = integrateCharacteristic(s, f.q0, t);
    if (f.run.caustic) return f;
    const auto& y = f.run.state;
    Point r{y.X[0] - q[0], s.dim == 2 ? y.X[1] - q[1] : 0.0};
    double err = 0.0;
    for (int a = 0; a < s.dim; ++a) err = std::max(err, std::abs(r[a]));
    if (err <= 1e-11 * scale) {
      f.converged = true;
      return f;
    }
    // q0 -= J^-1 r
    const double det = determinant(y.J, s.dim);
    if (s.dim == 1) {
      f.q0[0] -= r[0] / det;
    } else {
      f.q0[0] -= (y.J[1][1] * r[0] - y.J[0][1] * r[1]) / det;
      f.q0[1] -= (-y.J[1][0] * r[0] + y.J[0][0] * r[1]) / det;
    }
  }
  return f;
}

}  // namespace bohmlab
