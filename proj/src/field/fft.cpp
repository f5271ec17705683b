#include "bohmlab/field/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace bohmlab {

namespace {

using PlanKey = std::tuple<int, std::size_t, std::size_t, int>;

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int rank, std::size_t n0, std::size_t n1, int sign) {
    std::lock_guard lock(mutex_);
    const PlanKey key{rank, n0, n1, sign};
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    const std::size_t total = rank == 1 ? n0 : n0 * n1;
    fftw_complex* scratch = fftw_alloc_complex(total);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = rank == 1
                         ? fftw_plan_dft_1d(static_cast<int>(n0), scratch, scratch, sign, flags)
                         : fftw_plan_dft_2d(static_cast<int>(n0), static_cast<int>(n1), scratch, scratch, sign, flags);
    fftw_free(scratch);
    if (plan == nullptr) throw std::runtime_error("FFTW plan creation failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& planCache() {
  static PlanCache cache;
  return cache;
}

fftw_complex* asFftw(std::span<Complex> data) { return reinterpret_cast<fftw_complex*>(data.data()); }

template <typename T>
std::vector<T> fd4Derivative(const SpatialGrid& grid, std::span<const T> f, int axis, int order) {
  const std::size_t stride = grid.stride(axis);
  const double h = grid.spacing(axis);
  std::vector<T> out(f.size());
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    const auto idx = grid.index(flat);
    const auto i = static_cast<std::ptrdiff_t>(idx[axis]);
    const std::size_t base = flat - idx[axis] * stride;
    auto at = [&](std::ptrdiff_t d) { return f[base + grid.wrap(i + d, axis) * stride]; };
    if (order == 1) {
      out[flat] = (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * h);
    } else {
      out[flat] = (-at(2) + 16.0 * at(1) - 30.0 * at(0) + 16.0 * at(-1) - at(-2)) / (12.0 * h * h);
    }
  }
  return out;
}

// Multiplies the spectrum by (i k_axis)^order.
std::vector<Complex> spectralDerivative(const SpatialGrid& grid, std::span<const Complex> f, int axis, int order) {
  // Derivatives ignore constants; shifting by f[0] makes constant input give exact zeros.
  std::vector<Complex> work(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) work[i] = f[i] - f[0];
  const FourierTransform fft(grid);
  fft.forward(work);
  const std::size_t n = grid.points(axis);
  const auto k = grid.wavenumbers(axis);
  for (std::size_t flat = 0; flat < work.size(); ++flat) {
    const std::size_t j = grid.index(flat)[axis];
    if (order == 1) {
      work[flat] *= (j == n / 2) ? Complex(0.0) : Complex(0.0, k[j]);
    } else {
      work[flat] *= -k[j] * k[j];
    }
  }
  fft.backward(work);
  return work;
}

std::vector<Complex> toComplex(std::span<const double> f) { return {f.begin(), f.end()}; }

std::vector<double> realPart(const std::vector<Complex>& f) {
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i].real();
  return out;
}

}  // namespace

FourierTransform::FourierTransform(const SpatialGrid& grid) : size_(grid.size()) {
  const int rank = grid.dim();
  forward_plan_ = planCache().get(rank, grid.points(0), rank == 2 ? grid.points(1) : 1, FFTW_FORWARD);
  backward_plan_ = planCache().get(rank, grid.points(0), rank == 2 ? grid.points(1) : 1, FFTW_BACKWARD);
}

FourierTransform::FourierTransform(std::size_t n) : size_(n) {
  forward_plan_ = planCache().get(1, n, 1, FFTW_FORWARD);
  backward_plan_ = planCache().get(1, n, 1, FFTW_BACKWARD);
}

void FourierTransform::forward(std::span<Complex> data) const {
  if (data.size() != size_) throw std::invalid_argument("FFT size mismatch");
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), asFftw(data), asFftw(data));
}

void FourierTransform::backward(std::span<Complex> data) const {
  if (data.size() != size_) throw std::invalid_argument("FFT size mismatch");
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), asFftw(data), asFftw(data));
  const double scale = 1.0 / static_cast<double>(size_);
  for (auto& v : data) v *= scale;
}

std::vector<Complex> derivative(const SpatialGrid& grid, std::span<const Complex> f, int axis, DiffMethod method) {
  if (method == DiffMethod::FiniteDifference4) return fd4Derivative<Complex>(grid, f, axis, 1);
  return spectralDerivative(grid, f, axis, 1);
}

std::vector<double> derivative(const SpatialGrid& grid, std::span<const double> f, int axis, DiffMethod method) {
  if (method == DiffMethod::FiniteDifference4) return fd4Derivative<double>(grid, f, axis, 1);
  return realPart(spectralDerivative(grid, toComplex(f), axis, 1));
}

std::vector<Complex> laplacian(const SpatialGrid& grid, std::span<const Complex> f, DiffMethod method) {
  std::vector<Complex> sum(f.size(), Complex(0.0));
  for (int a = 0; a < grid.dim(); ++a) {
    const auto d2 = method == DiffMethod::FiniteDifference4 ? fd4Derivative<Complex>(grid, f, a, 2)
                                                            : spectralDerivative(grid, f, a, 2);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += d2[i];
  }
  return sum;
}

std::vector<double> laplacian(const SpatialGrid& grid, std::span<const double> f, DiffMethod method) {
  if (method == DiffMethod::FiniteDifference4) {
    std::vector<double> sum(f.size(), 0.0);
    for (int a = 0; a < grid.dim(); ++a) {
      const auto d2 = fd4Derivative<double>(grid, f, a, 2);
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += d2[i];
    }
    return sum;
  }
  return realPart(laplacian(grid, std::span<const Complex>(toComplex(f)), method));
}

std::vector<RealField> gradient(const RealField& field, DiffMethod method) {
  const auto& grid = field.grid();
  std::vector<RealField> out;
  for (int a = 0; a < grid.dim(); ++a) {
    auto d = derivative(grid, field.values(), a, method);
    std::vector<std::uint8_t> mask;
    if (field.hasMask()) {
      // A derivative is only trusted where its whole stencil is unmasked.
      mask.assign(field.size(), 0);
      const std::ptrdiff_t reach = 2;
      for (std::size_t flat = 0; flat < field.size(); ++flat) {
        if (!field.masked(flat)) continue;
        const auto idx = grid.index(flat);
        const std::size_t base = flat - idx[a] * grid.stride(a);
        for (std::ptrdiff_t s = -reach; s <= reach; ++s)
          mask[base + grid.wrap(static_cast<std::ptrdiff_t>(idx[a]) + s, a) * grid.stride(a)] = 1;
      }
    }
    out.emplace_back(grid, std::move(d), field.unit(), std::move(mask));
  }
  return out;
}

}  // namespace bohmlab
