#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "friedrichs/model.hpp"
#include "friedrichs/observable.hpp"
#include "friedrichs/self_energy.hpp"

namespace friedrichs {

// Few nonzero flat coordinates of an observable or functional.
using SparseCoordinates = std::vector<std::pair<Eigen::Index, Complex>>;

enum class ModeFamily { Discrete, Continuum, OneOmega, OmegaOne, Kernel };

struct SpectralMode {
  int degree = 0;
  ModeFamily family = ModeFamily::Discrete;
  Eigen::Index k = 0;
  Eigen::Index l = 0;
  Complex z;
  double measure = 1.0;     // 1, w_k or w_k·w_l: the weight of the mode in Σ_α
  SparseCoordinates right;  // |ũ)
  SparseCoordinates left;   // (u|

  std::string label() const;
};

// Generalized eigenvectors of Θ†⁽²⁾: second-order eigenvalues, zeroth-order
// eigenvectors. Mode i carries the same index as flat coordinate i.
//
//   |1)              z = 2πiλ²V(m)²   (u| = (1| − (m|
//   δ(ω−m)|1) + |ω)  z = 0            (u| = (ω|
//   |1ω)             z = m − ω − β
//   |ω1)             z = ω − m + β*
//   |ωω′)            z = ω − ω′
//
// (u_α|ũ_β) = δ_αβ / μ_α and Σ_α μ_α |ũ_α)(u_α| = 1.
class SpectralDecomposition {
public:
  explicit SpectralDecomposition(const ModelConfig& cfg);

  const ModelConfig& config() const { return cfg_; }
  const SelfEnergyBeta& beta() const { return beta_; }
  std::size_t size() const { return static_cast<std::size_t>(flat_dimension(cfg_.grid().ssize())); }

  Complex eigenvalue(std::size_t i) const;
  SpectralMode mode(std::size_t i) const;

  Observable right_observable(std::size_t i) const;
  StateFunctional left_functional(std::size_t i) const;

  // max |μ_α (u_α|ũ_β) − δ_αβ| over all pairs with overlapping support.
  double biorthogonality_residual() const;

  // Σ_{α of degree n} μ_α |ũ_α)(u_α|O).
  Observable reconstruct(const Observable& obs, int degree) const;

  // max over degrees and random observables of ‖reconstruct(O,n) − P_n O‖ / ‖O‖.
  double completeness_residual(int samples, std::uint64_t seed) const;

private:
  ModelConfig cfg_;
  SelfEnergyBeta beta_;
  Complex z_discrete_;
};

// Σ_i μ_i conj(f_i) o_i over sparse coordinates.
Complex sparse_pair(const SparseCoordinates& left, const Observable& obs);
Complex sparse_pair(const StateFunctional& rho, const SparseCoordinates& right);

}  // namespace friedrichs
