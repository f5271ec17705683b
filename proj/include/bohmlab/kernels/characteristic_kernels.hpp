#pragma once

#include <span>

#include "bohmlab/classical/characteristics.hpp"
#include "bohmlab/field/grid.hpp"
#include "bohmlab/kernels/execution.hpp"

namespace bohmlab::kernels {

// Foot of every grid node at time t; `feet` holds the Newton guesses on entry.
namespace serial {
void solveFeet(const CharacteristicSetup& setup, const SpatialGrid& grid, double t, std::span<Foot> feet);
}  // namespace serial

namespace omp {
void solveFeet(const CharacteristicSetup& setup, const SpatialGrid& grid, double t, std::span<Foot> feet);
}  // namespace omp

void solveFeet(const CharacteristicSetup& setup, const SpatialGrid& grid, double t, std::span<Foot> feet,
               Execution exec);

}  // namespace bohmlab::kernels
