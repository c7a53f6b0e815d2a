#include "friedrichs/model.hpp"

#include <cmath>
#include <numbers>

#include "friedrichs/error.hpp"

namespace friedrichs {

ModelConfig::ModelConfig(double m, double lambda, FormFactor form_factor, GridPtr grid)
    : m_(m), lambda_(lambda), form_factor_(form_factor), grid_(std::move(grid)) {
  if (!grid_) throw DomainError("model needs a frequency grid");
  if (!(m_ > 0.0 && m_ < grid_->cutoff())) throw DomainError("resonance energy m must lie in (0, cutoff)");
  if (!(lambda_ >= 0.0) || !std::isfinite(lambda_)) throw DomainError("coupling lambda must be >= 0");
  form_factor_.validate(grid_->cutoff());
  const auto k = grid_->find_node(m_);
  if (!k) throw DomainError("resonance energy m must coincide with a grid node");
  resonance_index_ = *k;
  coupling_ = grid_->nodes().unaryExpr([&](double w) { return lambda_ * form_factor_(w); });
}

double ModelConfig::decay_rate() const {
  const double v = coupling_at_resonance();
  return 2.0 * std::numbers::pi * v * v;
}

ModelConfig ModelConfig::with_lambda(double lambda) const {
  return ModelConfig(m_, lambda, form_factor_, grid_);
}

}  // namespace friedrichs
