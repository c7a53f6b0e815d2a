#include "friedrichs/self_energy.hpp"

#include <numbers>

#include "friedrichs/resolvent.hpp"

namespace friedrichs {

SelfEnergyBeta compute_beta(const ModelConfig& cfg) {
  const ResolventKernel k(cfg, Branch::Plus);
  const Eigen::VectorXd g = cfg.coupling().cwiseAbs2();
  const double re = cfg.grid().weights().cwiseProduct(k.pv_weights()).dot(g);
  const double vm = cfg.coupling_at_resonance();
  const double im = -std::numbers::pi * vm * vm;
  return {Complex(re, im), re, im};
}

}  // namespace friedrichs
