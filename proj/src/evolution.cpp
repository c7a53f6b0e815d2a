#include "friedrichs/evolution.hpp"

#include <cmath>
#include <sstream>

#include "friedrichs/error.hpp"

namespace friedrichs {

RegimeCheck check_regime(const ModelConfig& cfg, double t) {
  RegimeCheck r;
  const double lambda = cfg.lambda();
  if (lambda >= 0.3) {
    r.coupling_small = false;
    std::ostringstream s;
    s << "lambda=" << lambda << " is outside the weak-coupling regime (lambda < 0.3)";
    r.warnings.push_back(s.str());
  }
  if (lambda > 0.0 && t > (1.0 + 1e-12) / (lambda * lambda)) {
    r.time_in_window = false;
    std::ostringstream s;
    s << "t=" << t << " exceeds the lambda^-2 window (" << 1.0 / (lambda * lambda) << ")";
    r.warnings.push_back(s.str());
  }
  if (t < 0.0) {
    r.time_nonnegative = false;
    std::ostringstream s;
    s << "t=" << t << " is negative; decay is oriented towards t > 0";
    r.warnings.push_back(s.str());
  }
  return r;
}

namespace {

// ρ_kernel(t) = e^{−i(ω−ω′)t} ρ_kernel(0) as the rank-one phase p p†.
KernelMatrix evolve_kernel(const KernelMatrix& k0, const FrequencyGrid& g, double t) {
  const Eigen::VectorXcd p = (Complex(0.0, -t) * g.nodes().cast<Complex>().array()).exp().matrix();
  KernelMatrix out(k0.rows(), k0.cols());
  for (Eigen::Index r = 0; r < k0.rows(); ++r)
    out.row(r) = p[r] * k0.row(r).cwiseProduct(p.adjoint());
  return out;
}

// Closed forms on every component except the kernel.
StateFunctional closed_form_low(const StateFunctional& rho0, double t, const ModelConfig& cfg,
                                const SelfEnergyBeta& beta) {
  const FrequencyGrid& g = cfg.grid();
  const Eigen::ArrayXd w = g.nodes().array();
  const Eigen::Index km = cfg.resonance_index();
  const double decay = std::exp(-cfg.decay_rate() * t);
  const Complex i(0.0, 1.0);
  const Complex b = beta.value;

  StateFunctional out;
  out.grid = rho0.grid;
  out.discrete = decay * rho0.discrete;
  out.singular = rho0.singular;
  out.singular[km] += (1.0 - decay) * rho0.discrete / g.weight(km);
  const Eigen::ArrayXcd phase_1w = (-i * t * ((cfg.m() - w).cast<Complex>() - std::conj(b))).exp();
  const Eigen::ArrayXcd phase_w1 = (i * t * ((cfg.m() - w).cast<Complex>() - b)).exp();
  out.one_omega = (phase_1w * rho0.one_omega.array()).matrix();
  out.omega_one = (phase_w1 * rho0.omega_one.array()).matrix();
  return out;
}

}  // namespace

StateFunctional evolve_closed_form(const StateFunctional& rho0, double t, const ModelConfig& cfg,
                                   const SelfEnergyBeta& beta) {
  require_same_grid(rho0.grid, cfg.grid_ptr());
  StateFunctional out = closed_form_low(rho0, t, cfg, beta);
  out.kernel = evolve_kernel(rho0.kernel, cfg.grid(), t);
  return out;
}

StateFunctional evolve_lambda2t(const SpectralDecomposition& spectrum, const StateFunctional& rho0,
                                double t, std::vector<std::string>* warnings) {
  const ModelConfig& cfg = spectrum.config();
  require_same_grid(rho0.grid, cfg.grid_ptr());
  double scale = std::max(1.0, std::abs(rho0.discrete));
  for (const Component c : {Component::Singular, Component::OneOmega, Component::OmegaOne, Component::Kernel})
    scale = std::max(scale, std::sqrt(rho0.component(c).cwiseAbs2().maxCoeff()));
  if (!is_physical(rho0, 1e-10 * scale)) throw DomainError("initial state is not a physical state");
  const RegimeCheck regime = check_regime(cfg, t);
  if (warnings) warnings->insert(warnings->end(), regime.warnings.begin(), regime.warnings.end());

  const Eigen::Index n = cfg.grid().ssize();
  const Complex i(0.0, 1.0);
  const Eigen::Index mode_end = component_offset(Component::Kernel, n);
  Eigen::VectorXcd low = Eigen::VectorXcd::Zero(mode_end);

  // degrees 0 and 1: (ρ_t| gains μ e^{−i z* t} conj((ρ₀|ũ)) (u| per mode
  for (Eigen::Index a = 0; a < mode_end; ++a) {
    const SpectralMode md = spectrum.mode(static_cast<std::size_t>(a));
    const Complex overlap = sparse_pair(rho0, md.right);
    if (overlap == Complex(0.0)) continue;
    const Complex c = md.measure * std::exp(-i * std::conj(md.z) * t) * std::conj(overlap);
    for (const auto& [j, v] : md.left) low[j] += c * v;
  }
  StateFunctional out;
  out.grid = rho0.grid;
  out.discrete = low[0];
  out.singular = low.segment(component_offset(Component::Singular, n), n);
  out.one_omega = low.segment(component_offset(Component::OneOmega, n), n);
  out.omega_one = low.segment(component_offset(Component::OmegaOne, n), n);

  // degree 2: z = ω_k − ω_l and unit basis vectors, e^{−i z t} = p_k conj(p_l)
  out.kernel = evolve_kernel(rho0.kernel, cfg.grid(), t);

  const StateFunctional closed = closed_form_low(rho0, t, cfg, spectrum.beta());
  double mismatch = 0.0, size = 1.0;
  for (const Component c : {Component::Discrete, Component::Singular, Component::OneOmega, Component::OmegaOne}) {
    mismatch = std::max(mismatch, (out.component(c) - closed.component(c)).cwiseAbs().maxCoeff());
    size = std::max(size, closed.component(c).cwiseAbs().maxCoeff());
  }
  if (mismatch > 1e-9 * size) throw NumericError("mode-by-mode evolution disagrees with the closed form");
  return out;
}

StateFunctional evolve_lambda2t(const StateFunctional& rho0, double t, const ModelConfig& cfg,
                                std::vector<std::string>* warnings) {
  return evolve_lambda2t(SpectralDecomposition(cfg), rho0, t, warnings);
}

}  // namespace friedrichs
