#include "friedrichs/comparison.hpp"

#include <algorithm>
#include <cmath>

#include "friedrichs/error.hpp"
#include "friedrichs/evolution.hpp"
#include "friedrichs/spectral.hpp"

namespace friedrichs {

double ComponentDeviations::max() const {
  return std::max({discrete, singular, one_omega, omega_one, kernel});
}

ComparisonReport compare_evolutions(const ModelConfig& cfg, const DensityMatrix& rho0,
                                    const std::vector<double>& times,
                                    std::shared_ptr<const Propagator> propagator) {
  return compare_evolutions(cfg, StateEnsemble::from_density(rho0), times, std::move(propagator));
}

ComparisonReport compare_evolutions(const ModelConfig& cfg, const StateEnsemble& e0,
                                    const std::vector<double>& times,
                                    std::shared_ptr<const Propagator> propagator) {
  if (times.empty()) throw DataError("comparison needs at least one time");
  const GridPtr& grid = cfg.grid_ptr();
  const Eigen::Index n = grid->ssize();
  if (e0.states.rows() != n + 1) throw DimensionError("initial state does not match the grid");
  if (!propagator) propagator = std::make_shared<const Propagator>(build_hamiltonian(cfg));

  const SpectralDecomposition spectrum(cfg);
  const Eigen::MatrixXcd rho0 = e0.density();
  const StateFunctional f0 = matrix_to_functional(rho0, grid);
  const Complex engine_trace0 = trace(f0);
  const double oracle_trace0 = rho0.trace().real();
  const Eigen::Index km = cfg.resonance_index();

  ComparisonReport r;
  r.grid_nodes = n;
  r.time_samples = times.size();
  r.t_min = *std::min_element(times.begin(), times.end());
  r.t_max = *std::max_element(times.begin(), times.end());
  r.gamma_theory = cfg.decay_rate();
  r.offdiag_node = km;
  r.offdiag_available = std::abs(f0.one_omega[km]) > 1e-12;

  std::vector<std::string> warnings;
  std::vector<std::pair<double, double>> survival;
  const double rho1_0 = rho0(0, 0).real();
  const Eigen::VectorXd& w = grid->weights();
  const Eigen::VectorXd sw = w.cwiseSqrt();
  const Eigen::VectorXd& p = e0.probabilities;

  for (const double t : times) {
    const RegimeCheck regime = check_regime(cfg, t);
    r.in_window = r.in_window && regime.coupling_small && regime.time_in_window;
    for (const auto& msg : regime.warnings)
      if (std::find(warnings.begin(), warnings.end(), msg) == warnings.end() && warnings.size() < 8)
        warnings.push_back(msg);

    const StateFunctional fe = evolve_lambda2t(spectrum, f0, t);
    // oracle ρ = Σ_i p_i ψ_i ψ_i† read off the evolved vectors
    const Eigen::MatrixXcd psi = propagator->evolve(e0, t).states;
    const Eigen::MatrixXcd weighted = psi * p.cast<Complex>().asDiagonal();
    const Eigen::VectorXcd row0 = psi.row(0) * weighted.adjoint();  // ρ[0, ·]
    const Eigen::VectorXd diag = psi.cwiseAbs2() * p;                // ρ[j, j]

    auto& d = r.sup_deviation;
    d.discrete = std::max(d.discrete, std::abs(fe.discrete - row0[0]));
    for (Eigen::Index k = 0; k < n; ++k) {
      d.singular = std::max(d.singular, std::abs(w[k] * fe.singular[k] - diag[k + 1]));
      d.one_omega = std::max(d.one_omega, std::abs(sw[k] * fe.one_omega[k] - row0[k + 1]));
      d.omega_one = std::max(d.omega_one, std::abs(sw[k] * fe.omega_one[k] - std::conj(row0[k + 1])));
    }
    double kernel2 = 0.0;
    const Eigen::MatrixXcd tail = weighted.bottomRows(n).adjoint();
    Eigen::VectorXcd row(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      row.noalias() = (psi.row(k + 1) * tail).transpose();
      row[k] = sw[k] * sw[k] * fe.kernel(k, k);
      kernel2 = std::max(kernel2, (sw[k] * fe.kernel.row(k).transpose().cwiseProduct(sw) - row).cwiseAbs2().maxCoeff());
    }
    d.kernel = std::max(d.kernel, std::sqrt(kernel2));

    r.engine_trace_drift = std::max(r.engine_trace_drift, std::abs(trace(fe) - engine_trace0));
    r.oracle_trace_drift = std::max(r.oracle_trace_drift, std::abs(diag.sum() - oracle_trace0));

    if (rho1_0 > 0.0) survival.emplace_back(t, row0[0].real() / rho1_0);

    if (r.offdiag_available && t >= 0.0 && t <= offdiag_check_horizon) {
      const double engine = std::abs(fe.one_omega[km]);
      const double oracle = std::abs(row0[km + 1]) / sw[km];
      r.offdiag_error = std::max(r.offdiag_error, std::abs(oracle - engine) / engine);
    }
  }
  r.warnings = std::move(warnings);

  try {
    r.gamma_fit = fit_decay_rate(survival, r.gamma_theory);
    r.gamma_fit_available = true;
    r.rate_error = r.gamma_theory > 0.0 ? std::abs(r.gamma_fit - r.gamma_theory) / r.gamma_theory
                                        : std::abs(r.gamma_fit);
  } catch (const DataError& e) {
    r.warnings.push_back(std::string("decay fit unavailable: ") + e.what());
  }
  return r;
}

}  // namespace friedrichs
