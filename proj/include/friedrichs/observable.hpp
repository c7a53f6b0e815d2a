#pragma once

#include <complex>
#include <cstddef>
#include <random>

#include <Eigen/Dense>

#include "friedrichs/grid.hpp"

namespace friedrichs {

using Complex = std::complex<double>;
using KernelMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// The five component spaces: |1), |ω), |1ω), |ω1), |ωω′).
enum class Component { Discrete = 0, Singular = 1, OneOmega = 2, OmegaOne = 3, Kernel = 4 };

inline constexpr int component_count = 5;

// Degree of correlation of a component: 0 for |1), |ω); 1 for the cross terms; 2 for |ωω′).
int degree(Component c);
Eigen::Index component_dimension(Component c, Eigen::Index n);

// Flat coordinate layout over all components for a grid of n nodes:
//   0 | 1+k | 1+n+k | 1+2n+k | 1+3n+k·n+l
Eigen::Index flat_dimension(Eigen::Index n);
Eigen::Index component_offset(Component c, Eigen::Index n);
Component component_of(Eigen::Index flat, Eigen::Index n);

// Pairing weight of a flat coordinate: 1, w_k, w_k, w_k, w_k·w_l.
double coordinate_measure(const FrequencyGrid& grid, Eigen::Index flat);

struct ObservableTag {};
struct StateTag {};

// Coefficients of an element of the operator space (or of its dual) on a grid.
// Continuum components carry continuum normalization: the basis element |ω_k)
// has coefficient array δ_grid(ω − ω_k), i.e. 1/w_k at node k.
template <class Tag>
struct ComponentVector {
  GridPtr grid;
  Complex discrete{0.0, 0.0};
  Eigen::VectorXcd singular;
  Eigen::VectorXcd one_omega;
  Eigen::VectorXcd omega_one;
  KernelMatrix kernel;

  ComponentVector() = default;
  explicit ComponentVector(GridPtr g);

  Eigen::Index size() const { return singular.size(); }

  // Coordinate view of one component; the kernel is exposed row-major as k·n + l.
  Eigen::Map<Eigen::VectorXcd> component(Component c);
  Eigen::Map<const Eigen::VectorXcd> component(Component c) const;

  Eigen::VectorXcd to_flat() const;
  static ComponentVector from_flat(GridPtr g, const Eigen::Ref<const Eigen::VectorXcd>& flat);

  ComponentVector& operator+=(const ComponentVector& other);
  ComponentVector& operator-=(const ComponentVector& other);
  ComponentVector& operator*=(Complex s);
};

using Observable = ComponentVector<ObservableTag>;
using StateFunctional = ComponentVector<StateTag>;

template <class Tag>
ComponentVector<Tag> operator+(ComponentVector<Tag> a, const ComponentVector<Tag>& b) {
  return a += b;
}
template <class Tag>
ComponentVector<Tag> operator-(ComponentVector<Tag> a, const ComponentVector<Tag>& b) {
  return a -= b;
}
template <class Tag>
ComponentVector<Tag> operator*(Complex s, ComponentVector<Tag> a) {
  return a *= s;
}

// Throws DimensionError unless both live on the same grid.
void require_same_grid(const GridPtr& a, const GridPtr& b);

// (ρ|O): antilinear in ρ, linear in O, continuum sums weighted by w_k.
Complex pair(const StateFunctional& rho, const Observable& obs);

Observable identity_observable(GridPtr grid);
Complex trace(const StateFunctional& rho);

// ρ₁ = 1, all other components 0.
StateFunctional pure_discrete_state(GridPtr grid);

// Continuum-normalized basis elements |1), |ω_k), |1ω_k), |ω_k1), |ω_kω_l).
Observable basis_observable(GridPtr grid, Component c, Eigen::Index k = 0, Eigen::Index l = 0);
// Dual functionals (1|, (ω_k|, ... with (α|β) = δ_grid.
StateFunctional basis_functional(GridPtr grid, Component c, Eigen::Index k = 0, Eigen::Index l = 0);

// o1, o_ω real; o_1ω = conj(o_ω1); kernel Hermitian. Tolerance is absolute.
template <class Tag>
bool is_self_adjoint(const ComponentVector<Tag>& x, double tol = 1e-12);
bool is_physical(const StateFunctional& rho, double tol = 1e-12);

// Norm of the matrix image under the √w correspondence (Hilbert–Schmidt):
// coordinates scaled by 1, 1, √w_k, √w_k, √(w_k w_l).
template <class Tag>
double weighted_norm(const ComponentVector<Tag>& x);

// Independent complex normal entries in every component.
Observable random_observable(GridPtr grid, std::mt19937_64& rng);
// Random self-adjoint observable.
Observable random_self_adjoint(GridPtr grid, std::mt19937_64& rng);

// Coefficient-wise conversion between the two roles.
StateFunctional as_state(const Observable& x);
Observable as_observable(const StateFunctional& x);

}  // namespace friedrichs
