#include <random>

#include "doctest.h"
#include "friedrichs/correlations.hpp"
#include "friedrichs/error.hpp"
#include "friedrichs/liouville.hpp"
#include "friedrichs/superoperator.hpp"
#include "support.hpp"

using namespace friedrichs;

namespace {

Eigen::VectorXcd rand_vec(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(n);
  for (auto& x : v) x = Complex(g(rng), g(rng));
  return v;
}

Eigen::MatrixXcd rand_mat(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  Eigen::MatrixXcd m(r, c);
  for (Eigen::Index j = 0; j < c; ++j) m.col(j) = rand_vec(r, rng);
  return m;
}

// One instance of every node kind mapping C^{dims}.
std::vector<Block> samples_n_to_n(Eigen::Index n, std::mt19937_64& rng) {
  return {Block::zero(n, n),
          Block::scalar(n, Complex(0.5, 2.0)),
          Block::diagonal(rand_vec(n, rng)),
          Block::dense(rand_mat(n, n, rng)),
          Block::low_rank(rand_mat(n, 2, rng), rand_mat(2, n, rng)),
          compose(Block::contract(rand_vec(n, rng), KernelIndex::Second),
                  compose(Block::diagonal(rand_vec(n * n, rng)),
                          Block::broadcast(rand_vec(n, rng), KernelIndex::First)))};
}

}  // namespace

TEST_CASE("block nodes agree with their dense forms") {
  std::mt19937_64 rng(1);
  const Eigen::Index n = 4;
  const std::vector<Block> blocks = {
      Block::broadcast(rand_vec(n, rng), KernelIndex::First),
      Block::broadcast(rand_vec(n, rng), KernelIndex::Second),
      Block::contract(rand_vec(n, rng), KernelIndex::First),
      Block::contract(rand_vec(n, rng), KernelIndex::Second),
  };
  for (const auto& b : blocks) {
    const Eigen::VectorXcd x = rand_vec(b.source_dim(), rng);
    CHECK((b.apply(x) - to_dense(b) * x).norm() < 1e-12);
    CHECK((to_dense(adjoint(b)) - to_dense(b).adjoint()).norm() < 1e-12);
  }
  const auto square = samples_n_to_n(n, rng);
  CHECK(std::holds_alternative<block::Product>(square.back().node()));
  for (const auto& b : square) {
    const Eigen::VectorXcd x = rand_vec(n, rng);
    CHECK((b.apply(x) - to_dense(b) * x).norm() < 1e-12);
    CHECK((to_dense(adjoint(b)) - to_dense(b).adjoint()).norm() < 1e-12);
    CHECK((diagonal(b) - to_dense(b).diagonal()).norm() < 1e-12);
  }
}

TEST_CASE("composition and sums are closed and exact") {
  std::mt19937_64 rng(2);
  const Eigen::Index n = 3;
  const auto xs = samples_n_to_n(n, rng);
  const auto ys = samples_n_to_n(n, rng);
  for (const auto& a : xs)
    for (const auto& b : ys) {
      CHECK((to_dense(compose(a, b)) - to_dense(a) * to_dense(b)).norm() < 1e-11);
      CHECK((to_dense(add(a, b)) - to_dense(a) - to_dense(b)).norm() < 1e-11);
      CHECK((to_dense(scale(Complex(0, 3), a)) - Complex(0, 3) * to_dense(a)).norm() < 1e-11);
    }
}

TEST_CASE("contraction of a broadcast collapses to a structured block") {
  std::mt19937_64 rng(3);
  const Eigen::Index n = 5;
  for (auto pinned : {KernelIndex::First, KernelIndex::Second})
    for (auto summed : {KernelIndex::First, KernelIndex::Second}) {
      const Block b = Block::broadcast(rand_vec(n, rng), pinned);
      const Block c = Block::contract(rand_vec(n, rng), summed);
      const Block cb = compose(c, b);
      CHECK_FALSE(std::holds_alternative<block::Product>(cb.node()));
      CHECK((to_dense(cb) - to_dense(c) * to_dense(b)).norm() < 1e-12);
    }
}

TEST_CASE("superoperator algebra") {
  const ModelConfig cfg = testing::bumpy_model(0.3, 5);
  const GridPtr grid = cfg.grid_ptr();
  const SuperOperator l0 = build_L0(cfg);
  const SuperOperator l1 = build_L1(cfg);
  const SuperOperator c1 = build_C1(1, cfg);
  const Eigen::MatrixXcd a = l1.to_dense(), b = c1.to_dense(), z = l0.to_dense();
  CHECK(((l1 * c1).to_dense() - a * b).norm() < 1e-12);
  CHECK(((c1 * l1 * c1).to_dense() - b * a * b).norm() < 1e-12);
  CHECK(((l0 + l1).to_dense() - z - a).norm() < 1e-12);
  CHECK(((l0 - l1).to_dense() - z + a).norm() < 1e-12);
  CHECK((SuperOperator::from_dense(grid, a).to_dense() - a).norm() == 0.0);
  CHECK((SuperOperator::identity(grid).to_dense() - Eigen::MatrixXcd::Identity(a.rows(), a.cols())).norm() == 0.0);

  std::mt19937_64 rng(4);
  const Observable o = random_observable(grid, rng);
  CHECK((Observable::from_flat(grid, a * o.to_flat()) - l1.apply(o)).to_flat().norm() < 1e-12);
}

TEST_CASE("left application is the transpose under the pairing") {
  const ModelConfig cfg = testing::bumpy_model(0.3, 6);
  const SuperOperator x = build_L1(cfg) * build_C1(0, cfg) + build_L0(cfg);
  std::mt19937_64 rng(6);
  for (int i = 0; i < 5; ++i) {
    const StateFunctional rho = as_state(random_observable(cfg.grid_ptr(), rng));
    const Observable o = random_observable(cfg.grid_ptr(), rng);
    CHECK(std::abs(pair(x.apply_left(rho), o) - pair(rho, x.apply(o))) < 1e-11);
  }
}

TEST_CASE("dense materialization is bounded") {
  const ModelConfig cfg = testing::flat_model(0.1, max_dense_nodes + 10);
  CHECK_THROWS_AS(build_L1(cfg).to_dense(), DimensionError);
  CHECK_THROWS_AS(build_L1(cfg).set_block(Component::Discrete, Component::Discrete, Block::scalar(3, 1.0)),
                  DimensionError);
}
