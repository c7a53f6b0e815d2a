#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "friedrichs/model.hpp"
#include "friedrichs/observable.hpp"

namespace friedrichs {

// Friedrichs Hamiltonian on the grid: index 0 ↔ |1⟩, index k+1 ↔ √w_k-normalized
// continuum node. H[0,0] = m, H[k,k] = ω_k, H[0,k] = H[k,0] = λV(ω_k)√w_k.
// Real symmetric because V is real.
struct DiscreteHamiltonian {
  Eigen::MatrixXd matrix;
};

DiscreteHamiltonian build_hamiltonian(const ModelConfig& cfg);

// Hermitian, unit trace, positive semidefinite (N+1)×(N+1) matrix.
class DensityMatrix {
public:
  // Throws DomainError unless Hermitian (1e-12), trace 1 (1e-12) and λ_min ≥ −1e-10.
  explicit DensityMatrix(Eigen::MatrixXcd matrix);

  static DensityMatrix pure(const Eigen::VectorXcd& psi);

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  Eigen::Index dimension() const { return matrix_.rows(); }

private:
  struct Unchecked {};
  DensityMatrix(Eigen::MatrixXcd matrix, Unchecked) : matrix_(std::move(matrix)) {}
  friend class Propagator;

  Eigen::MatrixXcd matrix_;
};

// ρ = Σ_i p_i |ψ_i⟩⟨ψ_i| with p_i > 0.
struct StateEnsemble {
  Eigen::VectorXd probabilities;
  Eigen::MatrixXcd states;  // columns ψ_i

  static StateEnsemble from_density(const DensityMatrix& rho, double cutoff = 1e-14);
  Eigen::MatrixXcd density() const;
};

// e^{−iHt} from one eigendecomposition H = U diag(E) U†.
class Propagator {
public:
  explicit Propagator(const DiscreteHamiltonian& h);

  const Eigen::VectorXd& energies() const { return energies_; }
  const Eigen::MatrixXd& eigenvectors() const { return vectors_; }

  Eigen::VectorXcd evolve(const Eigen::VectorXcd& psi, double t) const;
  StateEnsemble evolve(const StateEnsemble& ensemble, double t) const;
  DensityMatrix evolve(const DensityMatrix& rho, double t) const;

  // ⟨1|ρ_t|1⟩ for ρ₀ = |ψ⟩⟨ψ|.
  double survival(const Eigen::VectorXcd& psi, double t) const;
  std::vector<double> survival_curve(const Eigen::VectorXcd& psi, const std::vector<double>& times) const;

private:
  Eigen::VectorXd energies_;
  Eigen::MatrixXd vectors_;
};

DensityMatrix exact_evolve(const DensityMatrix& rho, const DiscreteHamiltonian& h, double t);

// ρ₁ = ρ[0,0], ρ_ω = ρ[k,k]/w_k, ρ_1ω = ρ[0,k]/√w_k, ρ_ω1 = ρ[k,0]/√w_k,
// ρ_ωω′ = ρ[k,l]/√(w_k w_l) off the diagonal; the kernel diagonal is zero.
StateFunctional matrix_to_functional(const Eigen::MatrixXcd& rho, GridPtr grid);
StateFunctional matrix_to_functional(const DensityMatrix& rho, GridPtr grid);
Eigen::MatrixXcd functional_to_matrix(const StateFunctional& rho);

// O[0,0] = o₁, O[k,k] = o_ω + w_k o_ωω, O[0,k] = √w_k o_1ω, O[k,0] = √w_k o_ω1,
// O[k,l] = √(w_k w_l) o_ωω′.
Eigen::MatrixXcd observable_to_matrix(const Observable& obs);
// Inverse on observables with zero kernel diagonal: the matrix diagonal goes to o_ω.
Observable matrix_to_observable(const Eigen::MatrixXcd& o, GridPtr grid);

// −slope of the least-squares line through ln(survival) vs t on
// [0.1/Γ_guess, 1/Γ_guess]; all samples when Γ_guess = 0.
double fit_decay_rate(const std::vector<std::pair<double, double>>& samples, double gamma_guess);

// (s(δ) − s(0))/δ of the exact survival from |1⟩.
double oracle_initial_slope(const Propagator& propagator, double delta);

}  // namespace friedrichs
