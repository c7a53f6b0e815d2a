#pragma once

#include "friedrichs/model.hpp"
#include "friedrichs/observable.hpp"

namespace friedrichs {

// β = ∫ dω λ²V(ω)² / (ω − m + i0).
struct SelfEnergyBeta {
  Complex value;
  double re_part;
  double im_part;  // −π λ² V(m)²
};

// Re β by the subtraction method on the model grid plus the analytic log
// term; Im β set from V(m).
SelfEnergyBeta compute_beta(const ModelConfig& cfg);

}  // namespace friedrichs
