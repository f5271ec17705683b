#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bohmlab/field/fields.hpp"

namespace bohmlab {

/// In-place complex FFT over a whole grid (1D or 2D).
///
/// Plans are created once per shape and shared; executing a plan is
/// thread-safe, so one instance can serve concurrent callers. `backward`
/// includes the 1/N normalisation.
class FourierTransform {
 public:
  explicit FourierTransform(const SpatialGrid& grid);
  // Transform of a single line of length n.
  explicit FourierTransform(std::size_t n);

  void forward(std::span<Complex> data) const;
  void backward(std::span<Complex> data) const;

  std::size_t size() const { return size_; }

 private:
  void* forward_plan_;
  void* backward_plan_;
  std::size_t size_;
};

enum class DiffMethod {
  Spectral,           // exact for band-limited periodic data
  FiniteDifference4,  // 4th-order central stencil, error O(dx^4)
};

// d/dq_axis of periodic samples.
std::vector<Complex> derivative(const SpatialGrid& grid, std::span<const Complex> f, int axis,
                                DiffMethod method = DiffMethod::Spectral);
std::vector<double> derivative(const SpatialGrid& grid, std::span<const double> f, int axis,
                               DiffMethod method = DiffMethod::Spectral);

// Sum of second derivatives over all axes.
std::vector<Complex> laplacian(const SpatialGrid& grid, std::span<const Complex> f,
                               DiffMethod method = DiffMethod::Spectral);
std::vector<double> laplacian(const SpatialGrid& grid, std::span<const double> f,
                              DiffMethod method = DiffMethod::Spectral);

/// Gradient of a real field, one component field per axis.
///
/// Spectral differentiation converges exponentially for smooth periodic
/// data; non-periodic data (e.g. q^2 on a periodic box) shows Gibbs ringing
/// over the whole box, worst at the seam. The 4th-order stencil keeps such
/// errors local to the two cells either side of the seam.
std::vector<RealField> gradient(const RealField& field, DiffMethod method = DiffMethod::Spectral);

}  // namespace bohmlab
