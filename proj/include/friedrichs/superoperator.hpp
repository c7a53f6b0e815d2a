#pragma once

#include <array>
#include <memory>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "friedrichs/observable.hpp"

namespace friedrichs {

// Largest grid for which a superoperator may be materialized as one dense
// matrix over all flat coordinates.
inline constexpr Eigen::Index max_dense_nodes = 40;

// Which index of the kernel |ωω′) a structured block pins or sums over.
enum class KernelIndex { First, Second };

class Block;

namespace block {

struct Zero {};
// c · identity.
struct Scalar {
  Complex value;
};
struct Diagonal {
  Eigen::VectorXcd values;
};
struct Dense {
  Eigen::MatrixXcd matrix;
};
// cols · rows with cols: target×r and rows: r×source.
struct LowRank {
  Eigen::MatrixXcd cols;
  Eigen::MatrixXcd rows;
};
// Node vector x → kernel. pinned = First: K[k,l] = a[k]·x[l]; Second: K[k,l] = x[k]·a[l].
struct Broadcast {
  Eigen::VectorXcd a;
  KernelIndex pinned;
};
// Kernel → node vector. summed = First: y[l] = Σ_k b[k]·K[k,l]; Second: y[k] = Σ_l b[l]·K[k,l].
struct Contract {
  Eigen::VectorXcd b;
  KernelIndex summed;
};
struct Sum {
  std::vector<Block> terms;
};
// factors[0] ∘ factors[1] ∘ ... (last factor applied first).
struct Product {
  std::vector<Block> factors;
};

using Node = std::variant<Zero, Scalar, Diagonal, Dense, LowRank, Broadcast, Contract, Sum, Product>;

}  // namespace block

// Immutable linear map between two component coordinate spaces.
class Block {
public:
  Block() : Block(0, 0) {}
  Block(Eigen::Index target_dim, Eigen::Index source_dim);  // zero map
  Block(Eigen::Index target_dim, Eigen::Index source_dim, block::Node node);

  static Block zero(Eigen::Index target_dim, Eigen::Index source_dim);
  static Block scalar(Eigen::Index dim, Complex value);
  static Block diagonal(Eigen::VectorXcd values);
  static Block dense(Eigen::MatrixXcd matrix);
  static Block low_rank(Eigen::MatrixXcd cols, Eigen::MatrixXcd rows);
  static Block broadcast(Eigen::VectorXcd a, KernelIndex pinned);
  static Block contract(Eigen::VectorXcd b, KernelIndex summed);

  Eigen::Index target_dim() const { return target_; }
  Eigen::Index source_dim() const { return source_; }
  const block::Node& node() const { return *node_; }
  bool is_zero() const { return std::holds_alternative<block::Zero>(*node_); }

  Eigen::VectorXcd apply(const Eigen::Ref<const Eigen::VectorXcd>& x) const;

private:
  Eigen::Index target_;
  Eigen::Index source_;
  std::shared_ptr<const block::Node> node_;
};

// a ∘ b, simplified when the structure allows (diagonal·diagonal, low-rank
// absorption, contraction of a broadcast, ...), otherwise a lazy product.
Block compose(const Block& a, const Block& b);
Block add(const Block& a, const Block& b);
Block scale(Complex s, const Block& a);
// Conjugate transpose in coordinates.
Block adjoint(const Block& a);
Eigen::MatrixXcd to_dense(const Block& a);
// Diagonal of a square block.
Eigen::VectorXcd diagonal(const Block& a);

// Linear map on observables as a 5×5 table of blocks indexed [target][source].
class SuperOperator {
public:
  SuperOperator() = default;
  explicit SuperOperator(GridPtr grid);  // zero operator

  static SuperOperator identity(GridPtr grid);
  static SuperOperator from_dense(GridPtr grid, const Eigen::MatrixXcd& matrix);

  const GridPtr& grid() const { return grid_; }
  const Block& block(Component target, Component source) const;
  void set_block(Component target, Component source, Block b);

  Observable apply(const Observable& obs) const;
  // (ρ|X: the functional O ↦ (ρ|X O).
  StateFunctional apply_left(const StateFunctional& rho) const;

  Eigen::MatrixXcd to_dense() const;

private:
  GridPtr grid_;
  std::array<std::array<Block, component_count>, component_count> blocks_;
};

SuperOperator compose(const SuperOperator& a, const SuperOperator& b);
SuperOperator operator*(const SuperOperator& a, const SuperOperator& b);
SuperOperator operator+(const SuperOperator& a, const SuperOperator& b);
SuperOperator operator-(const SuperOperator& a, const SuperOperator& b);
SuperOperator operator*(Complex s, const SuperOperator& a);

// Coordinate adjoint (blockwise conjugate transpose).
SuperOperator coordinate_adjoint(const SuperOperator& a);

}  // namespace friedrichs
