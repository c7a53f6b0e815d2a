#pragma once

#include <memory>
#include <string>
#include <vector>

#include "friedrichs/model.hpp"
#include "friedrichs/oracle.hpp"

namespace friedrichs {

// Sup over the time grid of |engine − oracle| in density-matrix units
// (ρ[0,0], w_k ρ_ω, √w_k ρ_1ω, √w_k ρ_ω1, √(w_k w_l) ρ_ωω′).
struct ComponentDeviations {
  double discrete = 0.0;
  double singular = 0.0;
  double one_omega = 0.0;
  double omega_one = 0.0;
  double kernel = 0.0;

  double max() const;
};

struct ComparisonReport {
  ComponentDeviations sup_deviation;

  double gamma_theory = 0.0;
  bool gamma_fit_available = false;
  double gamma_fit = 0.0;
  double rate_error = 0.0;  // |Γ_fit − Γ_theory| / Γ_theory (absolute when Γ_theory = 0)

  // |ρ_1ω| at the node nearest m, engine vs oracle, t ≤ 50.
  bool offdiag_available = false;
  Eigen::Index offdiag_node = 0;
  double offdiag_error = 0.0;  // max relative deviation of the magnitudes

  double engine_trace_drift = 0.0;
  double oracle_trace_drift = 0.0;

  bool in_window = true;  // λ < 0.3 and every t ≤ λ⁻²
  std::vector<std::string> warnings;

  // run description
  Eigen::Index grid_nodes = 0;
  std::size_t time_samples = 0;
  double t_min = 0.0;
  double t_max = 0.0;
};

inline constexpr double offdiag_check_horizon = 50.0;

// Engine (evolve_lambda2t) against exact propagation from the same initial state.
// `propagator` may be shared across calls on the same configuration.
ComparisonReport compare_evolutions(const ModelConfig& cfg, const StateEnsemble& initial,
                                    const std::vector<double>& times,
                                    std::shared_ptr<const Propagator> propagator = nullptr);
ComparisonReport compare_evolutions(const ModelConfig& cfg, const DensityMatrix& rho0,
                                    const std::vector<double>& times,
                                    std::shared_ptr<const Propagator> propagator = nullptr);

}  // namespace friedrichs
