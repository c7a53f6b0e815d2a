#include "friedrichs/spectral.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <unordered_map>

#include "friedrichs/error.hpp"
#include "friedrichs/liouville.hpp"

namespace friedrichs {

std::string SpectralMode::label() const {
  const auto s = [](Eigen::Index i) { return std::to_string(i); };
  switch (family) {
    case ModeFamily::Discrete: return "1";
    case ModeFamily::Continuum: return "w" + s(k);
    case ModeFamily::OneOmega: return "1w" + s(k);
    case ModeFamily::OmegaOne: return "w" + s(k) + "1";
    case ModeFamily::Kernel: return "w" + s(k) + "w" + s(l);
  }
  return "?";
}

SpectralDecomposition::SpectralDecomposition(const ModelConfig& cfg)
    : cfg_(cfg), beta_(compute_beta(cfg)) {
  const double vm = cfg.coupling_at_resonance();
  z_discrete_ = Complex(0.0, 2.0 * std::numbers::pi * vm * vm);
}

Complex SpectralDecomposition::eigenvalue(std::size_t i) const {
  const Eigen::Index n = cfg_.grid().ssize();
  const auto flat = static_cast<Eigen::Index>(i);
  const Component c = component_of(flat, n);
  const Eigen::Index local = flat - component_offset(c, n);
  const auto& w = cfg_.grid().nodes();
  switch (c) {
    case Component::Discrete: return z_discrete_;
    case Component::Singular: return 0.0;
    case Component::OneOmega: return cfg_.m() - w[local] - beta_.value;
    case Component::OmegaOne: return w[local] - cfg_.m() + std::conj(beta_.value);
    case Component::Kernel: break;
  }
  return w[local / n] - w[local % n];
}

SpectralMode SpectralDecomposition::mode(std::size_t i) const {
  const FrequencyGrid& g = cfg_.grid();
  const Eigen::Index n = g.ssize();
  const auto flat = static_cast<Eigen::Index>(i);
  const Component c = component_of(flat, n);
  const Eigen::Index local = flat - component_offset(c, n);
  const Eigen::Index km = cfg_.resonance_index();
  const Eigen::Index singular_m = component_offset(Component::Singular, n) + km;

  SpectralMode md;
  md.z = eigenvalue(i);
  md.degree = degree(c);
  md.measure = coordinate_measure(g, flat);
  switch (c) {
    case Component::Discrete:
      md.family = ModeFamily::Discrete;
      md.right = {{0, 1.0}};
      md.left = {{0, 1.0}, {singular_m, -1.0 / g.weight(km)}};
      break;
    case Component::Singular:
      md.family = ModeFamily::Continuum;
      md.k = local;
      md.right = {{flat, 1.0 / g.weight(local)}};
      if (local == km) md.right.insert(md.right.begin(), {0, 1.0 / g.weight(km)});
      md.left = {{flat, 1.0 / g.weight(local)}};
      break;
    case Component::OneOmega:
    case Component::OmegaOne:
      md.family = c == Component::OneOmega ? ModeFamily::OneOmega : ModeFamily::OmegaOne;
      md.k = local;
      md.right = {{flat, 1.0 / g.weight(local)}};
      md.left = md.right;
      break;
    case Component::Kernel:
      md.family = ModeFamily::Kernel;
      md.k = local / n;
      md.l = local % n;
      md.right = {{flat, 1.0 / md.measure}};
      md.left = md.right;
      break;
  }
  return md;
}

namespace {

template <class Tag>
ComponentVector<Tag> densify(const GridPtr& grid, const SparseCoordinates& entries) {
  Eigen::VectorXcd flat = Eigen::VectorXcd::Zero(flat_dimension(grid->ssize()));
  for (const auto& [i, v] : entries) flat[i] += v;
  return ComponentVector<Tag>::from_flat(grid, flat);
}

}  // namespace

Observable SpectralDecomposition::right_observable(std::size_t i) const {
  return densify<ObservableTag>(cfg_.grid_ptr(), mode(i).right);
}

StateFunctional SpectralDecomposition::left_functional(std::size_t i) const {
  return densify<StateTag>(cfg_.grid_ptr(), mode(i).left);
}

Complex sparse_pair(const SparseCoordinates& left, const Observable& obs) {
  const FrequencyGrid& g = *obs.grid;
  const Eigen::Index n = g.ssize();
  Complex s = 0.0;
  for (const auto& [i, v] : left) {
    const Component c = component_of(i, n);
    s += coordinate_measure(g, i) * std::conj(v) * obs.component(c)[i - component_offset(c, n)];
  }
  return s;
}

Complex sparse_pair(const StateFunctional& rho, const SparseCoordinates& right) {
  const FrequencyGrid& g = *rho.grid;
  const Eigen::Index n = g.ssize();
  Complex s = 0.0;
  for (const auto& [i, v] : right) {
    const Component c = component_of(i, n);
    s += coordinate_measure(g, i) * std::conj(rho.component(c)[i - component_offset(c, n)]) * v;
  }
  return s;
}

double SpectralDecomposition::biorthogonality_residual() const {
  const FrequencyGrid& g = cfg_.grid();
  const std::size_t count = size();

  // right-mode support per flat coordinate (CSR)
  std::vector<std::uint32_t> start(count + 1, 0);
  for (std::size_t b = 0; b < count; ++b)
    for (const auto& e : mode(b).right) ++start[static_cast<std::size_t>(e.first) + 1];
  for (std::size_t i = 0; i < count; ++i) start[i + 1] += start[i];
  std::vector<std::uint32_t> fill(start.begin(), start.end() - 1);
  std::vector<std::uint32_t> owner(start.back());
  std::vector<Complex> coef(start.back());
  for (std::size_t b = 0; b < count; ++b)
    for (const auto& [i, v] : mode(b).right) {
      const auto slot = fill[static_cast<std::size_t>(i)]++;
      owner[slot] = static_cast<std::uint32_t>(b);
      coef[slot] = v;
    }

  double worst = 0.0;
  std::unordered_map<std::uint32_t, Complex> acc;
  for (std::size_t a = 0; a < count; ++a) {
    const SpectralMode ma = mode(a);
    acc.clear();
    acc[static_cast<std::uint32_t>(a)] = 0.0;
    for (const auto& [i, v] : ma.left) {
      const double mu = coordinate_measure(g, i);
      const auto ii = static_cast<std::size_t>(i);
      for (auto s = start[ii]; s < start[ii + 1]; ++s) acc[owner[s]] += mu * std::conj(v) * coef[s];
    }
    for (const auto& [b, p] : acc) {
      const double expected = (b == a) ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(ma.measure * p - expected));
    }
  }
  return worst;
}

Observable SpectralDecomposition::reconstruct(const Observable& obs, int degree) const {
  require_degree(degree);
  require_same_grid(obs.grid, cfg_.grid_ptr());
  const Eigen::Index n = cfg_.grid().ssize();
  Eigen::VectorXcd flat = Eigen::VectorXcd::Zero(flat_dimension(n));
  for (std::size_t a = 0; a < size(); ++a) {
    const auto c = component_of(static_cast<Eigen::Index>(a), n);
    if (friedrichs::degree(c) != degree) continue;
    const SpectralMode md = mode(a);
    const Complex amp = md.measure * sparse_pair(md.left, obs);
    for (const auto& [i, v] : md.right) flat[i] += amp * v;
  }
  return Observable::from_flat(obs.grid, flat);
}

double SpectralDecomposition::completeness_residual(int samples, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Observable o = random_observable(cfg_.grid_ptr(), rng);
    const double scale = weighted_norm(o);
    for (int n = 0; n < 3; ++n)
      worst = std::max(worst, weighted_norm(reconstruct(o, n) - project(o, n)) / scale);
  }
  return worst;
}

}  // namespace friedrichs
