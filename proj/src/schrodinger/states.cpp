#include "bohmlab/schrodinger/states.hpp"

#include <cmath>
#include <stdexcept>

#include "bohmlab/errors.hpp"

namespace bohmlab {

WaveField gaussianPacket(const SpatialGrid& grid, Point center, double sigma, Point momentum, double hbar,
                         double time) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian sigma must be positive");
  std::vector<Complex> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point q = grid.node(i);
    double env = 0.0, phase = 0.0;
    for (int a = 0; a < grid.dim(); ++a) {
      const double d = q[a] - center[a];
      env += d * d / (4.0 * sigma * sigma);
      phase += momentum[a] * q[a] / hbar;
    }
    v[i] = std::polar(std::exp(-env), phase);
  }
  return WaveField::normalized(grid, std::move(v), time);
}

WaveField planeWave(const SpatialGrid& grid, Point momentum, double hbar) {
  std::vector<Complex> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point q = grid.node(i);
    double phase = 0.0;
    for (int a = 0; a < grid.dim(); ++a) phase += momentum[a] * q[a] / hbar;
    v[i] = std::polar(1.0, phase);
  }
  return WaveField::normalized(grid, std::move(v));
}

WaveField coherentState(const SpatialGrid& grid, Point center, double omega, double mass, double hbar,
                        Point momentum) {
  if (!(omega > 0.0) || !(mass > 0.0)) throw std::invalid_argument("coherent state needs omega, mass > 0");
  return gaussianPacket(grid, center, std::sqrt(hbar / (2.0 * mass * omega)), momentum, hbar);
}

WaveField makeDoubleSlitState(const SpatialGrid& grid, const DoubleSlitGeometry& g, double hbar) {
  const int transverse = grid.dim() == 1 ? 0 : 1;
  if (g.width < 2.0 * grid.spacing(transverse))
    throw GridTooCoarseError("slit width must be at least two grid cells");
  if (g.separation < 0.0 || (g.separation > 0.0 && g.separation <= g.width))
    throw std::invalid_argument("slit separation must exceed the slit width");
  const double half = 0.5 * g.separation;
  std::vector<Complex> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point q = grid.node(i);
    const double y = q[transverse];
    auto packet = [&](double c) { return std::exp(-(y - c) * (y - c) / (4.0 * g.width * g.width)); };
    double amp = g.separation == 0.0 ? packet(0.0) : packet(half) + packet(-half);
    double phase = 0.0;
    if (grid.dim() == 2) {
      const double x = q[0] - g.forwardCenter;
      amp *= std::exp(-x * x / (4.0 * g.forwardWidth * g.forwardWidth));
      phase = g.forwardMomentum * q[0] / hbar;
    }
    v[i] = std::polar(amp, phase);
  }
  return WaveField::normalized(grid, std::move(v));
}

}  // namespace bohmlab
