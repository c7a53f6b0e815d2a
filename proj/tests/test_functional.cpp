#include <random>

#include "doctest.h"
#include "friedrichs/error.hpp"
#include "friedrichs/liouville.hpp"
#include "friedrichs/observable.hpp"
#include "friedrichs/oracle.hpp"
#include "support.hpp"

using namespace friedrichs;

namespace {

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

Eigen::MatrixXd free_hamiltonian(const ModelConfig& cfg) {
  Eigen::MatrixXd h = build_hamiltonian(cfg).matrix;
  h.row(0).tail(cfg.grid().ssize()).setZero();
  h.col(0).tail(cfg.grid().ssize()).setZero();
  return h;
}

}  // namespace

TEST_CASE("pairing examples") {
  const auto grid = testing::uniform_grid(2.0, 8);
  const StateFunctional pure = pure_discrete_state(grid);
  CHECK(pair(pure, basis_observable(grid, Component::Discrete)) == Complex(1.0));
  CHECK(pair(pure, basis_observable(grid, Component::Singular, 3)) == Complex(0.0));

  StateFunctional rho(grid);
  rho.discrete = 0.3;
  rho.singular.setConstant(0.7 / 2.0);
  CHECK(std::abs(pair(rho, identity_observable(grid)) - 1.0) < 1e-14);
}

TEST_CASE("dual basis is biorthogonal under the grid delta") {
  const auto grid = testing::resonance_grid(2.0, 6, 1.0);
  const Eigen::Index n = grid->ssize();
  for (int c = 0; c < component_count; ++c) {
    const auto comp = static_cast<Component>(c);
    const Eigen::Index kmax = comp == Component::Discrete ? 1 : n;
    for (Eigen::Index k = 0; k < kmax; ++k) {
      const Eigen::Index l = (k + 2) % n;
      const double mu = coordinate_measure(*grid, component_offset(comp, n) + (comp == Component::Kernel ? k * n + l : k));
      const Complex p = pair(basis_functional(grid, comp, k, l), basis_observable(grid, comp, k, l));
      CHECK(std::abs(mu * p - 1.0) < 1e-13);
    }
  }
}

TEST_CASE("trace") {
  const auto grid = testing::uniform_grid(2.0, 8);
  StateFunctional rho = pure_discrete_state(grid);
  CHECK(trace(rho) == Complex(1.0));
  rho *= 2.0;
  CHECK(trace(rho) == Complex(2.0));
}

TEST_CASE("pairing is antilinear in the state and linear in the observable") {
  const auto grid = testing::uniform_grid(2.0, 6);
  std::mt19937_64 rng(7);
  const Observable o = random_observable(grid, rng);
  const StateFunctional r = as_state(random_observable(grid, rng));
  const Complex a(0.3, -1.7);
  CHECK(std::abs(pair(a * r, o) - std::conj(a) * pair(r, o)) < 1e-12);
  CHECK(std::abs(pair(r, a * o) - a * pair(r, o)) < 1e-12);
}

TEST_CASE("physical states give real expectations of self-adjoint observables") {
  const auto grid = testing::uniform_grid(2.0, 10);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20; ++i) {
    const Observable o = random_self_adjoint(grid, rng);
    const StateFunctional r = as_state(random_self_adjoint(grid, rng));
    REQUIRE(is_physical(r));
    CHECK(std::abs(pair(r, o).imag()) < 1e-10);
  }
}

TEST_CASE("pairing of mapped density matrices equals the matrix trace") {
  const auto grid = testing::resonance_grid(2.0, 12, 1.0);
  const Eigen::Index d = grid->ssize() + 1;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int i = 0; i < 20; ++i) {
    Eigen::MatrixXcd a(d, d);
    for (Eigen::Index r = 0; r < d; ++r)
      for (Eigen::Index c = 0; c < d; ++c) a(r, c) = Complex(g(rng), g(rng));
    Eigen::MatrixXcd rho = a * a.adjoint();
    rho /= rho.trace();
    const DensityMatrix dm(rho);
    const Observable o = random_self_adjoint(grid, rng);
    Observable canonical = o;
    canonical.kernel.diagonal().setZero();
    const StateFunctional f = matrix_to_functional(dm, grid);
    const Complex expected = (rho * observable_to_matrix(canonical)).trace();
    CHECK(std::abs(pair(f, canonical) - expected) < 1e-10);
    CHECK(std::abs(trace(f) - 1.0) < 1e-12);
    CHECK(max_abs(functional_to_matrix(f) - rho) < 1e-14);
  }
}

TEST_CASE("apply_L0_dagger") {
  const ModelConfig cfg = testing::bumpy_model(0.2, 10);
  const GridPtr grid = cfg.grid_ptr();
  CHECK(weighted_norm(apply_L0_dagger(identity_observable(grid), cfg)) == 0.0);

  const Eigen::Index k = 3;
  const Observable b = basis_observable(grid, Component::OneOmega, k);
  const Observable lb = apply_L0_dagger(b, cfg);
  CHECK(weighted_norm(lb - (cfg.m() - grid->node(k)) * b) < 1e-15);

  const Eigen::MatrixXd h0 = free_hamiltonian(cfg);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) {
    const Observable o = random_observable(grid, rng);
    const Eigen::MatrixXcd om = observable_to_matrix(o);
    const Eigen::MatrixXcd expected = h0 * om - om * h0;
    CHECK(max_abs(observable_to_matrix(apply_L0_dagger(o, cfg)) - expected) < 1e-12);
  }
}

TEST_CASE("apply_L1_dagger") {
  const ModelConfig cfg = testing::bumpy_model(0.3, 10);
  const GridPtr grid = cfg.grid_ptr();
  CHECK(weighted_norm(apply_L1_dagger(identity_observable(grid), cfg.with_lambda(0.0))) == 0.0);
  std::mt19937_64 rng(2);
  CHECK(weighted_norm(apply_L1_dagger(random_observable(grid, rng), cfg.with_lambda(0.0))) == 0.0);

  const Observable l1 = apply_L1_dagger(basis_observable(grid, Component::Discrete), cfg);
  CHECK((l1.omega_one - cfg.coupling().cast<Complex>()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((l1.one_omega + cfg.coupling().cast<Complex>()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(l1.discrete == Complex(0.0));
  CHECK(l1.singular.cwiseAbs().maxCoeff() == 0.0);
  CHECK(l1.kernel.cwiseAbs().maxCoeff() == 0.0);

  const Eigen::MatrixXd h = build_hamiltonian(cfg).matrix;
  const Eigen::MatrixXd v = h - free_hamiltonian(cfg);
  for (int i = 0; i < 20; ++i) {
    const Observable o = random_observable(grid, rng);
    const Eigen::MatrixXcd om = observable_to_matrix(o);
    const Eigen::MatrixXcd expected = v * om - om * v;
    CHECK(max_abs(observable_to_matrix(apply_L1_dagger(o, cfg)) - expected) < 1e-12);
  }
}

TEST_CASE("block forms of L0 and L1 agree with the direct maps") {
  const ModelConfig cfg = testing::bumpy_model(0.3, 7);
  const SuperOperator l0 = build_L0(cfg);
  const SuperOperator l1 = build_L1(cfg);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 5; ++i) {
    const Observable o = random_observable(cfg.grid_ptr(), rng);
    CHECK(weighted_norm(l0.apply(o) - apply_L0_dagger(o, cfg)) < 1e-13);
    CHECK(weighted_norm(l1.apply(o) - apply_L1_dagger(o, cfg)) < 1e-13);
  }
  for (int n = 0; n < 3; ++n) {
    const Observable o = random_observable(cfg.grid_ptr(), rng);
    CHECK(weighted_norm(build_L0(cfg, n).apply(o) - project(apply_L0_dagger(project(o, n), cfg), n)) < 1e-13);
  }
}

TEST_CASE("L dagger preserves self-adjointness up to the factor i") {
  const ModelConfig cfg = testing::bumpy_model(0.3, 9);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 10; ++i) {
    const Observable o = random_self_adjoint(cfg.grid_ptr(), rng);
    const Observable lo = apply_L0_dagger(o, cfg) + apply_L1_dagger(o, cfg);
    CHECK(is_self_adjoint(Complex(0.0, 1.0) * lo, 1e-12));
  }
}

TEST_CASE("projector algebra") {
  const ModelConfig cfg = testing::bumpy_model(0.2, 6);
  std::mt19937_64 rng(4);
  const Observable o = random_observable(cfg.grid_ptr(), rng);
  CHECK(weighted_norm(project(project(o, 0), 1)) == 0.0);
  CHECK(weighted_norm(project(o, 0) + project(o, 1) + project(o, 2) - o) == 0.0);
  for (int n = 0; n < 3; ++n) {
    CHECK(weighted_norm(project(project(o, n), n) - project(o, n)) == 0.0);
    CHECK(weighted_norm(project(apply_L0_dagger(o, cfg), n) - apply_L0_dagger(project(o, n), cfg)) == 0.0);
    CHECK(weighted_norm(build_projector(cfg.grid_ptr(), n).apply(o) - project(o, n)) == 0.0);
    CHECK(weighted_norm(build_complement(cfg.grid_ptr(), n).apply(o) - (o - project(o, n))) == 0.0);
  }
  CHECK_THROWS_AS(project(o, 3), DomainError);
}

TEST_CASE("degrees of correlation") {
  const ModelConfig cfg = testing::bumpy_model(0.3, 8);
  std::mt19937_64 rng(12);
  for (int i = 0; i < 100; ++i) {
    const Observable o = random_observable(cfg.grid_ptr(), rng);
    CHECK(weighted_norm(project(apply_L1_dagger(project(o, 1), cfg), 0)) > 1e-6);
    CHECK(weighted_norm(project(apply_L1_dagger(project(o, 2), cfg), 0)) == 0.0);
    const Observable twice = apply_L1_dagger(apply_L1_dagger(project(o, 2), cfg), cfg);
    CHECK(weighted_norm(project(twice, 0)) > 1e-6);
  }
}
