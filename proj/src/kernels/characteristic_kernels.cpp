#include "bohmlab/kernels/characteristic_kernels.hpp"

namespace bohmlab::kernels {

namespace serial {

void solveFeet(const CharacteristicSetup& setup, const SpatialGrid& grid, double t, std::span<Foot> feet) {
  for (std::size_t i = 0; i < feet.size(); ++i) feet[i] = solveFoot(setup, grid.node(i), t, feet[i].q0);
}

}  // namespace serial

namespace omp {

void solveFeet(const CharacteristicSetup& setup, const SpatialGrid& grid, double t, std::span<Foot> feet) {
  const auto n = static_cast<std::ptrdiff_t>(feet.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) feet[i] = solveFoot(setup, grid.node(i), t, feet[i].q0);
}

}  // namespace omp

void solveFeet(const CharacteristicSetup& setup, const SpatialGrid& grid, double t, std::span<Foot> feet,
               Execution exec) {
  if (exec == Execution::Parallel)
    omp::solveFeet(setup, grid, t, feet);
  else
    serial::solveFeet(setup, grid, t, feet);
}

}  // namespace bohmlab::kernels
