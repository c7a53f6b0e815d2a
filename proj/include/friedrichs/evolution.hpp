#pragma once

#include <string>
#include <vector>

#include "friedrichs/model.hpp"
#include "friedrichs/observable.hpp"
#include "friedrichs/self_energy.hpp"
#include "friedrichs/spectral.hpp"

namespace friedrichs {

// Validity of the λ²t truncation at time t: λ ≪ 1 and 0 ≤ t ≲ λ⁻².
struct RegimeCheck {
  bool coupling_small = true;   // λ < 0.3
  bool time_in_window = true;   // t ≤ λ⁻²
  bool time_nonnegative = true;
  std::vector<std::string> warnings;

  bool ok() const { return coupling_small && time_in_window && time_nonnegative; }
};

RegimeCheck check_regime(const ModelConfig& cfg, double t);

// (ρ_t| = Σ_α e^{i z_α t} (ρ₀|ũ_α) μ_α (u_α|, mode by mode. Degree 0 and 1
// components are cross-checked against evolve_closed_form (NumericError on
// mismatch). Regime warnings are appended to `warnings` when given.
StateFunctional evolve_lambda2t(const SpectralDecomposition& spectrum, const StateFunctional& rho0,
                                double t, std::vector<std::string>* warnings = nullptr);
StateFunctional evolve_lambda2t(const StateFunctional& rho0, double t, const ModelConfig& cfg,
                                std::vector<std::string>* warnings = nullptr);

// Closed forms on the stored components, Γ = 2πλ²V(m)²:
//   ρ₁(t)  = e^{−Γt} ρ₁(0)
//   ρ_ω(t) = ρ_ω(0) + (1 − e^{−Γt}) ρ₁(0) δ_grid(ω − m)
//   ρ_1ω(t) = e^{−i(m−ω−β*)t} ρ_1ω(0),  ρ_ω1(t) = e^{i(m−ω−β)t} ρ_ω1(0)
//   ρ_ωω′(t) = e^{−i(ω−ω′)t} ρ_ωω′(0)
StateFunctional evolve_closed_form(const StateFunctional& rho0, double t, const ModelConfig& cfg,
                                   const SelfEnergyBeta& beta);

}  // namespace friedrichs
