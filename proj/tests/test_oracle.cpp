#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "friedrichs/comparison.hpp"
#include "friedrichs/error.hpp"
#include "friedrichs/oracle.hpp"
#include "support.hpp"

using namespace friedrichs;

namespace {

Eigen::MatrixXcd random_density(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double re = g(rng);
      const double im = g(rng);
      a(i, j) = Complex(re, im);
    }
  const Eigen::MatrixXcd rho = a * a.adjoint();
  return rho / rho.trace();
}

}  // namespace

TEST_CASE("hamiltonian entries") {
  const ModelConfig cfg = testing::bumpy_model(0.2, 12);
  const Eigen::MatrixXd h = build_hamiltonian(cfg).matrix;
  const Eigen::Index n = cfg.grid().ssize();
  CHECK(h.rows() == n + 1);
  CHECK(h(0, 0) == cfg.m());
  for (Eigen::Index k = 0; k < n; ++k) {
    CHECK(h(k + 1, k + 1) == cfg.grid().node(k));
    CHECK(h(0, k + 1) == doctest::Approx(cfg.coupling()[k] * std::sqrt(cfg.grid().weight(k))));
    CHECK(h(k + 1, 0) == h(0, k + 1));
  }
  CHECK((h - h.transpose()).norm() == 0.0);
}

TEST_CASE("density matrix validation") {
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(3, 3) / 3.0;
  CHECK_NOTHROW(DensityMatrix{bad});
  bad(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix{bad}, DomainError);
  CHECK_THROWS_AS(DensityMatrix{Eigen::MatrixXcd::Identity(3, 3)}, DomainError);
  Eigen::MatrixXcd negative = Eigen::MatrixXcd::Zero(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix{negative}, DomainError);
  const Eigen::VectorXcd psi = Eigen::VectorXcd::Unit(4, 2);
  CHECK(DensityMatrix::pure(psi).matrix()(2, 2) == Complex(1.0));
}

TEST_CASE("ensemble round trip") {
  std::mt19937_64 rng(8);
  const DensityMatrix rho(random_density(6, rng));
  const StateEnsemble e = StateEnsemble::from_density(rho);
  CHECK((e.density() - rho.matrix()).norm() < 1e-12);
  CHECK(e.probabilities.sum() == doctest::Approx(1.0));
  CHECK((e.probabilities.array() > 0.0).all());
}

TEST_CASE("matrix and functional round trip") {
  const ModelConfig cfg = testing::bumpy_model(0.1, 10);
  std::mt19937_64 rng(9);
  const Eigen::Index n = cfg.grid().ssize();
  const Eigen::MatrixXcd rho = random_density(n + 1, rng);
  const StateFunctional f = matrix_to_functional(rho, cfg.grid_ptr());
  CHECK((functional_to_matrix(f) - rho).norm() < 1e-12);
  CHECK(std::abs(trace(f) - 1.0) < 1e-12);
  CHECK(is_physical(f));
  for (Eigen::Index k = 0; k < n; ++k) CHECK(f.kernel(k, k) == Complex(0.0));

  Observable o = random_observable(cfg.grid_ptr(), rng);
  o.kernel.diagonal().setZero();
  CHECK(weighted_norm(matrix_to_observable(observable_to_matrix(o), cfg.grid_ptr()) - o) < 1e-12);
  CHECK(std::abs(pair(f, o) - (rho * observable_to_matrix(o)).trace()) < 1e-12);
}

TEST_CASE("exact evolution invariants") {
  const ModelConfig cfg = testing::bumpy_model(0.2, 30);
  const DiscreteHamiltonian h = build_hamiltonian(cfg);
  const Propagator p(h);
  std::mt19937_64 rng(10);
  const Eigen::Index dim = cfg.grid().ssize() + 1;
  const DensityMatrix rho(random_density(dim, rng));
  CHECK((p.evolve(rho, 0.0).matrix() - rho.matrix()).norm() < 1e-12);
  for (double t : {0.3, 10.0, 100.0}) {
    const Eigen::MatrixXcd r = p.evolve(rho, t).matrix();
    CHECK(std::abs(r.trace() - 1.0) < 1e-12);
    CHECK((r - r.adjoint()).norm() < 1e-12);
    CHECK(std::abs((r * r).trace() - (rho.matrix() * rho.matrix()).trace()) < 1e-12);
    CHECK((exact_evolve(rho, h, t).matrix() - r).norm() < 1e-12);
    const Eigen::MatrixXcd via_ensemble = p.evolve(StateEnsemble::from_density(rho), t).density();
    CHECK((via_ensemble - r).norm() < 1e-12);
  }
  const Eigen::VectorXcd one = Eigen::VectorXcd::Unit(dim, 0);
  CHECK(p.survival(one, 0.0) == doctest::Approx(1.0));
  CHECK(p.evolve(one, 42.0).norm() == doctest::Approx(1.0));
  const std::vector<double> curve = p.survival_curve(one, {0.0, 1.0, 2.0});
  CHECK(curve[2] == doctest::Approx(p.survival(one, 2.0)));
}

TEST_CASE("thermal-like mixture keeps unit trace") {
  const ModelConfig cfg = testing::flat_model(0.1, 40);
  const Eigen::Index n = cfg.grid().ssize();
  Eigen::VectorXd pop(n + 1);
  pop[0] = std::exp(-2.0 * cfg.m());
  for (Eigen::Index k = 0; k < n; ++k) pop[k + 1] = std::exp(-2.0 * cfg.grid().node(k));
  pop /= pop.sum();
  const DensityMatrix rho(pop.cast<Complex>().asDiagonal().toDenseMatrix());
  const Propagator p(build_hamiltonian(cfg));
  for (double t : {0.0, 10.0}) CHECK(std::abs(p.evolve(rho, t).matrix().trace() - 1.0) < 1e-12);
}

TEST_CASE("decay rate fit") {
  std::vector<std::pair<double, double>> s;
  for (int i = 0; i <= 100; ++i) s.emplace_back(i * 0.5, 0.7 * std::exp(-0.3 * i * 0.5));
  CHECK(fit_decay_rate(s, 0.3) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(fit_decay_rate(s, 0.0) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK_THROWS_AS(fit_decay_rate({s.begin(), s.begin() + 5}, 0.3), DataError);
  s[3].second = -1.0;
  CHECK_THROWS_AS(fit_decay_rate(s, 0.3), DataError);
}

TEST_CASE("exact survival: zeno start and golden-rule decay") {
  const double lambda = 0.1;
  const ModelConfig cfg = testing::flat_model(lambda, 400);
  const Propagator p(build_hamiltonian(cfg));
  // s(t) ≈ 1 − t²Σ|H₀ₖ|², Σ|H₀ₖ|² = λ²Λ
  for (double delta : {1e-2, 1e-3})
    CHECK(oracle_initial_slope(p, delta) == doctest::Approx(-delta * lambda * lambda * 2.0).epsilon(1e-2));

  const double gamma = 2.0 * std::numbers::pi * lambda * lambda;
  const Eigen::VectorXcd one = Eigen::VectorXcd::Unit(cfg.grid().ssize() + 1, 0);
  std::vector<std::pair<double, double>> s;
  for (int i = 0; i <= 200; ++i) s.emplace_back(i * 0.1 / gamma, p.survival(one, i * 0.1 / gamma));
  CHECK(fit_decay_rate(s, gamma) == doctest::Approx(gamma).epsilon(0.05));
}

TEST_CASE("engine against oracle on a decaying level") {
  const ModelConfig cfg = testing::flat_model(0.1, 200);
  std::vector<double> times;
  for (int i = 0; i <= 50; ++i) times.push_back(2.0 * i);
  const Eigen::VectorXcd one = Eigen::VectorXcd::Unit(cfg.grid().ssize() + 1, 0);
  const ComparisonReport r = compare_evolutions(cfg, DensityMatrix::pure(one), times);
  CHECK(r.in_window);
  CHECK(r.warnings.empty());
  CHECK(r.grid_nodes == cfg.grid().ssize());
  CHECK(r.time_samples == 51);
  CHECK(r.t_max == 100.0);
  CHECK(r.gamma_theory == doctest::Approx(2.0 * std::numbers::pi * 0.01));
  CHECK(r.gamma_fit_available);
  CHECK(r.rate_error < 0.05);
  CHECK(r.sup_deviation.discrete < 0.1);
  CHECK(r.sup_deviation.max() >= r.sup_deviation.discrete);
  CHECK(r.engine_trace_drift < 1e-10);
  CHECK(r.oracle_trace_drift < 1e-10);
}
