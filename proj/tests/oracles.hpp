#pragma once

// Closed-form reference solutions, written independently of the library's
// numerics. Tests compare library output against these.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "bohmlab/field/fields.hpp"

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

// Free Gaussian packet: position std sigma0 at t=0, centred at x0, momentum p.
struct FreeGaussian {
  double sigma0 = 1.0, x0 = 0.0, p = 0.0, hbar = 1.0, mass = 1.0;

  cplx spread(double t) const { return {1.0, hbar * t / (2.0 * mass * sigma0 * sigma0)}; }
  double width(double t) const {
    const double s = hbar * t / (2.0 * mass * sigma0 * sigma0);
    return sigma0 * std::sqrt(1.0 + s * s);
  }
  double centre(double t) const { return x0 + p * t / mass; }
  cplx psi(double x, double t) const {
    const cplx a = spread(t);
    const double d = x - centre(t);
    const cplx env = std::exp(-d * d / (4.0 * sigma0 * sigma0 * a));
    const double phase = (p * x - p * p * t / (2.0 * mass)) / hbar;
    return std::pow(2.0 * pi * sigma0 * sigma0, -0.25) / std::sqrt(a) * env * std::polar(1.0, phase);
  }
  double density(double x, double t) const { return std::norm(psi(x, t)); }
  // Guidance velocity, from differentiating the analytic phase.
  double velocity(double x, double t) const {
    const double h2 = hbar * hbar;
    return p / mass + (x - centre(t)) * h2 * t / (4.0 * mass * mass * std::pow(sigma0, 4) + h2 * t * t);
  }
  // Bohmian trajectory from q0: rides the packet's scaling.
  double trajectory(double q0, double t) const { return centre(t) + (q0 - x0) * width(t) / sigma0; }
  double cdf(double x, double t) const { return 0.5 * std::erfc(-(x - centre(t)) / (std::sqrt(2.0) * width(t))); }
};

// Harmonic oscillator ground state.
inline double harmonicGround(double x, double omega, double mass = 1.0, double hbar = 1.0) {
  const double a = mass * omega / hbar;
  return std::pow(a / pi, 0.25) * std::exp(-a * x * x / 2.0);
}

// U = -(hbar^2 / 2m) R''/R for R = exp(-q^2 / (4 sigma^2)).
inline double gaussianQuantumPotential(double q, double sigma, double mass = 1.0, double hbar = 1.0) {
  const double s2 = sigma * sigma;
  return -(hbar * hbar / (2.0 * mass)) * (q * q / (4.0 * s2 * s2) - 1.0 / (2.0 * s2));
}

// Sample psi(x, t) of a FreeGaussian on a 1D grid.
inline bohmlab::WaveField sampled(const bohmlab::SpatialGrid& g, const FreeGaussian& fg, double t) {
  std::vector<cplx> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fg.psi(g.coord(0, i), t);
  return bohmlab::WaveField(g, std::move(v), t);
}

inline double maxAbs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace oracle
