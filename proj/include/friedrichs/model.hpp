#pragma once

#include <Eigen/Dense>

#include "friedrichs/form_factor.hpp"
#include "friedrichs/grid.hpp"

namespace friedrichs {

// One discrete level at energy m coupled with strength λ·V(ω) to the continuum.
class ModelConfig {
public:
  ModelConfig(double m, double lambda, FormFactor form_factor, GridPtr grid);

  double m() const { return m_; }
  double lambda() const { return lambda_; }
  const FormFactor& form_factor() const { return form_factor_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const FrequencyGrid& grid() const { return *grid_; }
  std::size_t size() const { return grid_->size(); }

  // Node k_m with ω_{k_m} = m.
  Eigen::Index resonance_index() const { return resonance_index_; }

  // λ·V(ω_k) on every node.
  const Eigen::VectorXd& coupling() const { return coupling_; }
  // λ·V(m).
  double coupling_at_resonance() const { return lambda_ * form_factor_(m_); }

  // Γ = 2π λ² V(m)².
  double decay_rate() const;

  ModelConfig with_lambda(double lambda) const;

private:
  double m_;
  double lambda_;
  FormFactor form_factor_;
  GridPtr grid_;
  Eigen::Index resonance_index_;
  Eigen::VectorXd coupling_;
};

}  // namespace friedrichs
