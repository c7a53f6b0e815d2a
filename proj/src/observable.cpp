#include "friedrichs/observable.hpp"

#include <cmath>

#include "friedrichs/error.hpp"

namespace friedrichs {

int degree(Component c) {
  switch (c) {
    case Component::Discrete:
    case Component::Singular: return 0;
    case Component::OneOmega:
    case Component::OmegaOne: return 1;
    case Component::Kernel: return 2;
  }
  return -1;
}

Eigen::Index component_dimension(Component c, Eigen::Index n) {
  if (c == Component::Discrete) return 1;
  if (c == Component::Kernel) return n * n;
  return n;
}

Eigen::Index flat_dimension(Eigen::Index n) { return 1 + 3 * n + n * n; }

Eigen::Index component_offset(Component c, Eigen::Index n) {
  switch (c) {
    case Component::Discrete: return 0;
    case Component::Singular: return 1;
    case Component::OneOmega: return 1 + n;
    case Component::OmegaOne: return 1 + 2 * n;
    case Component::Kernel: return 1 + 3 * n;
  }
  return 0;
}

Component component_of(Eigen::Index flat, Eigen::Index n) {
  if (flat < 0 || flat >= flat_dimension(n)) throw DimensionError("flat index out of range");
  if (flat == 0) return Component::Discrete;
  if (flat < 1 + n) return Component::Singular;
  if (flat < 1 + 2 * n) return Component::OneOmega;
  if (flat < 1 + 3 * n) return Component::OmegaOne;
  return Component::Kernel;
}

double coordinate_measure(const FrequencyGrid& grid, Eigen::Index flat) {
  const Eigen::Index n = grid.ssize();
  const Component c = component_of(flat, n);
  const Eigen::Index local = flat - component_offset(c, n);
  switch (c) {
    case Component::Discrete: return 1.0;
    case Component::Kernel: return grid.weight(local / n) * grid.weight(local % n);
    default: return grid.weight(local);
  }
}

template <class Tag>
ComponentVector<Tag>::ComponentVector(GridPtr g) : grid(std::move(g)) {
  if (!grid) throw DimensionError("component vector needs a grid");
  const Eigen::Index n = grid->ssize();
  singular = Eigen::VectorXcd::Zero(n);
  one_omega = Eigen::VectorXcd::Zero(n);
  omega_one = Eigen::VectorXcd::Zero(n);
  kernel = KernelMatrix::Zero(n, n);
}

template <class Tag>
Eigen::Map<Eigen::VectorXcd> ComponentVector<Tag>::component(Component c) {
  switch (c) {
    case Component::Discrete: return {&discrete, 1};
    case Component::Singular: return {singular.data(), singular.size()};
    case Component::OneOmega: return {one_omega.data(), one_omega.size()};
    case Component::OmegaOne: return {omega_one.data(), omega_one.size()};
    case Component::Kernel: break;
  }
  return {kernel.data(), kernel.size()};
}

template <class Tag>
Eigen::Map<const Eigen::VectorXcd> ComponentVector<Tag>::component(Component c) const {
  switch (c) {
    case Component::Discrete: return {&discrete, 1};
    case Component::Singular: return {singular.data(), singular.size()};
    case Component::OneOmega: return {one_omega.data(), one_omega.size()};
    case Component::OmegaOne: return {omega_one.data(), omega_one.size()};
    case Component::Kernel: break;
  }
  return {kernel.data(), kernel.size()};
}

template <class Tag>
Eigen::VectorXcd ComponentVector<Tag>::to_flat() const {
  const Eigen::Index n = size();
  Eigen::VectorXcd flat(flat_dimension(n));
  for (int c = 0; c < component_count; ++c) {
    const auto comp = static_cast<Component>(c);
    flat.segment(component_offset(comp, n), component_dimension(comp, n)) = component(comp);
  }
  return flat;
}

template <class Tag>
ComponentVector<Tag> ComponentVector<Tag>::from_flat(GridPtr g,
                                                     const Eigen::Ref<const Eigen::VectorXcd>& flat) {
  ComponentVector x(std::move(g));
  const Eigen::Index n = x.size();
  if (flat.size() != flat_dimension(n)) throw DimensionError("flat vector has the wrong length");
  for (int c = 0; c < component_count; ++c) {
    const auto comp = static_cast<Component>(c);
    x.component(comp) = flat.segment(component_offset(comp, n), component_dimension(comp, n));
  }
  return x;
}

template <class Tag>
ComponentVector<Tag>& ComponentVector<Tag>::operator+=(const ComponentVector& other) {
  require_same_grid(grid, other.grid);
  discrete += other.discrete;
  singular += other.singular;
  one_omega += other.one_omega;
  omega_one += other.omega_one;
  kernel += other.kernel;
  return *this;
}

template <class Tag>
ComponentVector<Tag>& ComponentVector<Tag>::operator-=(const ComponentVector& other) {
  require_same_grid(grid, other.grid);
  discrete -= other.discrete;
  singular -= other.singular;
  one_omega -= other.one_omega;
  omega_one -= other.omega_one;
  kernel -= other.kernel;
  return *this;
}

template <class Tag>
ComponentVector<Tag>& ComponentVector<Tag>::operator*=(Complex s) {
  discrete *= s;
  singular *= s;
  one_omega *= s;
  omega_one *= s;
  kernel *= s;
  return *this;
}

template struct ComponentVector<ObservableTag>;
template struct ComponentVector<StateTag>;

void require_same_grid(const GridPtr& a, const GridPtr& b) {
  if (!a || !b) throw DimensionError("missing grid");
  if (a != b && !(*a == *b)) throw DimensionError("operands live on different grids");
}

Complex pair(const StateFunctional& rho, const Observable& obs) {
  require_same_grid(rho.grid, obs.grid);
  const Eigen::VectorXd& w = rho.grid->weights();
  Complex s = std::conj(rho.discrete) * obs.discrete;
  s += (w.cast<Complex>().array() * rho.singular.conjugate().array() * obs.singular.array()).sum();
  s += (w.cast<Complex>().array() * rho.one_omega.conjugate().array() * obs.one_omega.array()).sum();
  s += (w.cast<Complex>().array() * rho.omega_one.conjugate().array() * obs.omega_one.array()).sum();
  const Eigen::VectorXcd row_sums =
      (rho.kernel.conjugate().array() * obs.kernel.array()).matrix() * w.cast<Complex>();
  s += w.cast<Complex>().dot(row_sums);
  return s;
}

Observable identity_observable(GridPtr grid) {
  Observable id(std::move(grid));
  id.discrete = 1.0;
  id.singular.setOnes();
  return id;
}

// (ρ|I) with I = |1) + Σ_k w_k |ω_k).
Complex trace(const StateFunctional& rho) {
  return std::conj(rho.discrete) + rho.grid->weights().cast<Complex>().dot(rho.singular);
}

StateFunctional pure_discrete_state(GridPtr grid) {
  StateFunctional rho(std::move(grid));
  rho.discrete = 1.0;
  return rho;
}

namespace {

template <class Tag>
ComponentVector<Tag> basis_element(GridPtr grid, Component c, Eigen::Index k, Eigen::Index l) {
  ComponentVector<Tag> x(std::move(grid));
  const Eigen::Index n = x.size();
  const auto in_range = [n](Eigen::Index i) { return i >= 0 && i < n; };
  const auto& w = x.grid->weights();
  switch (c) {
    case Component::Discrete:
      x.discrete = 1.0;
      break;
    case Component::Singular:
    case Component::OneOmega:
    case Component::OmegaOne:
      if (!in_range(k)) throw DimensionError("node index out of range");
      x.component(c)[k] = 1.0 / w[k];
      break;
    case Component::Kernel:
      if (!in_range(k) || !in_range(l)) throw DimensionError("node index out of range");
      x.kernel(k, l) = 1.0 / (w[k] * w[l]);
      break;
  }
  return x;
}

}  // namespace

Observable basis_observable(GridPtr grid, Component c, Eigen::Index k, Eigen::Index l) {
  return basis_element<ObservableTag>(std::move(grid), c, k, l);
}

StateFunctional basis_functional(GridPtr grid, Component c, Eigen::Index k, Eigen::Index l) {
  return basis_element<StateTag>(std::move(grid), c, k, l);
}

template <class Tag>
bool is_self_adjoint(const ComponentVector<Tag>& x, double tol) {
  if (std::abs(x.discrete.imag()) > tol) return false;
  if (x.singular.imag().cwiseAbs().maxCoeff() > tol) return false;
  if ((x.one_omega - x.omega_one.conjugate()).cwiseAbs().maxCoeff() > tol) return false;
  const Eigen::Index n = x.kernel.rows();
  constexpr Eigen::Index tile = 64;
  for (Eigen::Index r0 = 0; r0 < n; r0 += tile)
    for (Eigen::Index c0 = r0; c0 < n; c0 += tile) {
      const Eigen::Index rows = std::min(tile, n - r0), cols = std::min(tile, n - c0);
      if ((x.kernel.block(r0, c0, rows, cols) - x.kernel.block(c0, r0, cols, rows).adjoint()).cwiseAbs2().maxCoeff() >
          tol * tol)
        return false;
    }
  return true;
}

template bool is_self_adjoint(const ComponentVector<ObservableTag>&, double);
template bool is_self_adjoint(const ComponentVector<StateTag>&, double);

bool is_physical(const StateFunctional& rho, double tol) { return is_self_adjoint(rho, tol); }

template <class Tag>
double weighted_norm(const ComponentVector<Tag>& x) {
  const Eigen::VectorXd& w = x.grid->weights();
  double s = std::norm(x.discrete) + x.singular.squaredNorm();
  s += (w.array() * x.one_omega.cwiseAbs2().array()).sum();
  s += (w.array() * x.omega_one.cwiseAbs2().array()).sum();
  s += w.dot(x.kernel.cwiseAbs2() * w);
  return std::sqrt(s);
}

template double weighted_norm(const ComponentVector<ObservableTag>&);
template double weighted_norm(const ComponentVector<StateTag>&);

namespace {

Eigen::VectorXcd random_complex(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = g(rng);
    const double im = g(rng);
    v[i] = Complex(re, im);
  }
  return v;
}

}  // namespace

Observable random_observable(GridPtr grid, std::mt19937_64& rng) {
  Observable o(std::move(grid));
  const Eigen::Index n = o.size();
  o = Observable::from_flat(o.grid, random_complex(flat_dimension(n), rng));
  return o;
}

Observable random_self_adjoint(GridPtr grid, std::mt19937_64& rng) {
  Observable o = random_observable(std::move(grid), rng);
  o.discrete = o.discrete.real();
  o.singular = o.singular.real().cast<Complex>();
  o.omega_one = o.one_omega.conjugate();
  const KernelMatrix k = o.kernel;
  o.kernel = 0.5 * (k + k.adjoint());
  return o;
}

StateFunctional as_state(const Observable& x) {
  return StateFunctional::from_flat(x.grid, x.to_flat());
}

Observable as_observable(const StateFunctional& x) {
  return Observable::from_flat(x.grid, x.to_flat());
}

}  // namespace friedrichs
