#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "friedrichs/grid.hpp"
#include "friedrichs/model.hpp"
#include "friedrichs/observable.hpp"

namespace friedrichs {

// ±i0 prescription of 1/(x ± i0).
enum class Branch { Plus = 1, Minus = -1 };

enum class OperatorKind { Creation, Destruction };

inline int sign(Branch b) { return static_cast<int>(b); }
inline Branch flip(Branch b) { return b == Branch::Plus ? Branch::Minus : Branch::Plus; }

// Branch of the resolvent linking degrees n_α → n_β: +i0 when correlations
// increase (n_β > n_α), −i0 when they decrease. Throws DomainError for n_α = n_β.
Branch time_ordering_branch(int n_alpha, int n_beta, OperatorKind kind);

// 1/(ω − m ± i0) on the grid as PV(1/(ω−m)) ∓ iπ δ_grid(ω − m).
//
// Σ_k w_k K_k f_k is the subtraction-method principal value of ∫ f/(ω−m) plus
// the delta term; the regular remainder at ω = m uses a three-point derivative.
class ResolventKernel {
public:
  ResolventKernel(const FrequencyGrid& grid, double center, Branch sign);
  ResolventKernel(const ModelConfig& cfg, Branch sign);

  Branch sign() const { return sign_; }
  double center() const { return center_; }
  const Eigen::VectorXd& pv_weights() const { return pv_weights_; }
  Eigen::Index delta_index() const { return delta_index_; }
  Complex delta_coefficient() const { return delta_coefficient_; }

  // K_k: pv_weights[k] plus the delta coefficient at the centre node.
  Complex value(Eigen::Index k) const;
  Eigen::VectorXcd values() const;

  // Σ_k w_k K_k f_k.
  Complex apply(const Eigen::Ref<const Eigen::VectorXcd>& f) const;

private:
  Branch sign_;
  double center_;
  Eigen::VectorXd pv_weights_;
  Eigen::Index delta_index_;
  Complex delta_coefficient_;
  Eigen::VectorXd weights_;
};

// Frequency ω_α of a flat basis coordinate as c·m + Σ s_j ω_j.
struct FrequencySignature {
  int m_coefficient = 0;
  std::vector<std::pair<Eigen::Index, int>> nodes;  // (node, coefficient), coefficient ≠ 0
  std::vector<Eigen::Index> labels;                 // node indices of the basis label
};

FrequencySignature signature_of(Eigen::Index flat, Eigen::Index n);

// 1/(ω_β − ω_α ± i0) for any pair of flat basis coordinates.
//
// A single uncancelled node against m routes through ResolventKernel; any
// other nonzero difference is regular; an exactly vanishing difference keeps
// only the delta term on the last node involved.
class GridResolvent {
public:
  explicit GridResolvent(const ModelConfig& cfg);

  Complex operator()(Eigen::Index alpha, Eigen::Index beta, Branch branch) const;

  const ResolventKernel& kernel(Branch b) const { return b == Branch::Plus ? plus_ : minus_; }

private:
  GridPtr grid_;
  double m_;
  ResolventKernel plus_;
  ResolventKernel minus_;
  std::vector<FrequencySignature> signatures_;
};

}  // namespace friedrichs
