#pragma once

#include <memory>

#include "bohmlab/scenario/registry.hpp"

namespace bohmlab::scenario::builtin {

std::unique_ptr<Scenario> continuityResidual();
std::unique_ptr<Scenario> doubleSlitNoCross();
std::unique_ptr<Scenario> equivarianceFreeGaussian();
std::unique_ptr<Scenario> hollandNonuniqueness();
std::unique_ptr<Scenario> p2Divergence();
std::unique_ptr<Scenario> reconstructionBundle();
std::unique_ptr<Scenario> semiclassicalSweep();

}  // namespace bohmlab::scenario::builtin
