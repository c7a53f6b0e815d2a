#pragma once

#include <array>
#include <cstdint>
#include <utility>

#include "friedrichs/model.hpp"
#include "friedrichs/superoperator.hpp"

namespace friedrichs {

// First-order creation C_n† = P_n† C_n† Q_n† and destruction D_n† = Q_n† D_n† P_n†.
SuperOperator build_C1(int degree, const ModelConfig& cfg);
SuperOperator build_D1(int degree, const ModelConfig& cfg);

struct CorrelationOperators {
  std::array<SuperOperator, 3> C;
  std::array<SuperOperator, 3> D;
};

CorrelationOperators zero_correlations(GridPtr grid);
CorrelationOperators first_order_correlations(const ModelConfig& cfg);

// One sweep of the matrix-element fixed point
//   (α|C_n|β) = R_αβ (α|(P_n + C)L₁(C − Q_n)|β),  (α,β) ∈ P_n × Q_n
//   (α|D_n|β) = R_αβ (α|(Q_n − D)L₁(P_n + D)|β),  (α,β) ∈ Q_n × P_n
// with R_αβ = 1/(ω_β − ω_α ± i0) on the time-ordered branch. Dense; grids of
// at most max_dense_nodes nodes.
CorrelationOperators refine_CD(const CorrelationOperators& prev, const ModelConfig& cfg);

// Θ_n†⁽²⁾ = P_n† L† P_n† + P_n† C_n†⁽¹⁾ L₁† P_n†.
SuperOperator build_theta2(int degree, const ModelConfig& cfg);
// Σ_n Θ_n†⁽²⁾.
SuperOperator build_theta2(const ModelConfig& cfg);

// (Ω†⁽¹⁾, (Ω†)⁻¹⁽¹⁾) = (Σ_n P_n† + C_n†⁽¹⁾, Σ_n P_n† + D_n†⁽¹⁾).
std::pair<SuperOperator, SuperOperator> build_omega1(const ModelConfig& cfg);

// Sum of the Diagonal / Scalar terms of a square block: the part of a
// continuum-to-continuum map proportional to δ(ω − ω′).
Eigen::VectorXcd singular_diagonal(const Block& b);

enum class SandwichOrder {
  InverseFirst,  // (Ω†)⁻¹ L† Ω†
  OmegaFirst,    // Ω† L† (Ω†)⁻¹
};

struct SandwichResidual {
  double max_relative = 0.0;   // max over samples of ‖(S − Θ)O‖ / ‖O‖
  double mean_relative = 0.0;
};

// ‖S O − Θ†⁽²⁾ O‖ / ‖O‖ in the weighted norm, over `samples` random observables.
SandwichResidual isospectral_residual(const ModelConfig& cfg, SandwichOrder order, int samples,
                                      std::uint64_t seed);

// ‖Ω†⁽¹⁾(Ω†)⁻¹⁽¹⁾ O − O‖ / ‖O‖, max over random observables.
double omega_inverse_defect(const ModelConfig& cfg, int samples, std::uint64_t seed);

}  // namespace friedrichs
