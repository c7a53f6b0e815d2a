#pragma once

#include <optional>

#include "friedrichs/model.hpp"
#include "friedrichs/observable.hpp"
#include "friedrichs/superoperator.hpp"

namespace friedrichs {

// L₀† O = [H₀, O] on components: (m−ω) on |1ω), (ω−m) on |ω1), (ω−ω′) on |ωω′).
Observable apply_L0_dagger(const Observable& obs, const ModelConfig& cfg);

// L₁† O = [λV, O] on components, continuum integrals as w-weighted sums.
Observable apply_L1_dagger(const Observable& obs, const ModelConfig& cfg);

// Keeps the components of correlation degree n ∈ {0, 1, 2}.
Observable project(const Observable& obs, int degree);

// Block forms of the same maps. `degree` restricts L₀† to one diagonal block.
SuperOperator build_L0(const ModelConfig& cfg, std::optional<int> degree = std::nullopt);
SuperOperator build_L1(const ModelConfig& cfg);
SuperOperator build_projector(GridPtr grid, int degree);
// Q_n = 1 − P_n.
SuperOperator build_complement(GridPtr grid, int degree);

// Zeroes every block except those mapping degree `source_degree` into `target_degree`.
SuperOperator restrict_degrees(const SuperOperator& op, int target_degree, int source_degree);

void require_degree(int degree);

}  // namespace friedrichs
