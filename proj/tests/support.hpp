#pragma once

#include <memory>
#include <random>

#include "friedrichs/form_factor.hpp"
#include "friedrichs/grid.hpp"
#include "friedrichs/model.hpp"

namespace testing {

inline friedrichs::GridPtr uniform_grid(double cutoff, std::size_t cells) {
  return std::make_shared<const friedrichs::FrequencyGrid>(
      friedrichs::FrequencyGrid::uniform_midpoint(cutoff, cells));
}

inline friedrichs::GridPtr resonance_grid(double cutoff, std::size_t cells, double m) {
  return std::make_shared<const friedrichs::FrequencyGrid>(friedrichs::FrequencyGrid::for_resonance(
      friedrichs::QuadratureRule::Midpoint, cutoff, cells, m));
}

// m = 1, Λ = 2 on an anchored midpoint grid.
inline friedrichs::ModelConfig flat_model(double lambda, std::size_t cells) {
  return friedrichs::ModelConfig(1.0, lambda, friedrichs::FormFactor::flat(), resonance_grid(2.0, cells, 1.0));
}

// Small model with a non-trivial form factor and a resonance away from the grid centre.
inline friedrichs::ModelConfig bumpy_model(double lambda, std::size_t cells) {
  return friedrichs::ModelConfig(0.9, lambda, friedrichs::FormFactor::gaussian(0.8, 0.6),
                                 resonance_grid(2.0, cells, 0.9));
}

}  // namespace testing
