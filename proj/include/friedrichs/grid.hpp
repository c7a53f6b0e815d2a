#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string_view>

#include <Eigen/Dense>

namespace friedrichs {

enum class QuadratureRule { Midpoint, GaussLegendre };

QuadratureRule parse_quadrature_rule(std::string_view name);
std::string_view to_string(QuadratureRule rule);

// Quadrature discretization of the continuum ω ∈ (0, Λ).
//
// Invariants (checked on construction): nodes strictly increasing inside the
// open interval, positive weights, Σ w_k = Λ to 1e-12 relative.
class FrequencyGrid {
public:
  FrequencyGrid(Eigen::VectorXd nodes, Eigen::VectorXd weights, double cutoff);

  // N equal cells, node at each cell centre.
  static FrequencyGrid uniform_midpoint(double cutoff, std::size_t cells);

  // Midpoint cells of width Λ/N aligned so that one cell is centred on
  // `anchor`; partial cells fill the ends. Has N or N+1 nodes.
  static FrequencyGrid anchored_midpoint(double cutoff, std::size_t cells, double anchor);

  // Gauss–Legendre nodes on (0, anchor − h/2) and (anchor + h/2, Λ) around a
  // single midpoint cell of width h centred on `anchor` (h ≈ Λ/N).
  static FrequencyGrid gauss_legendre(double cutoff, std::size_t nodes, double anchor);

  // Grid for `rule` with roughly `nodes` points that contains `anchor` as a node.
  static FrequencyGrid for_resonance(QuadratureRule rule, double cutoff, std::size_t nodes,
                                     double anchor);

  std::size_t size() const { return static_cast<std::size_t>(nodes_.size()); }
  Eigen::Index ssize() const { return nodes_.size(); }
  double cutoff() const { return cutoff_; }
  const Eigen::VectorXd& nodes() const { return nodes_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  double node(Eigen::Index k) const { return nodes_[k]; }
  double weight(Eigen::Index k) const { return weights_[k]; }

  // Index of the node equal to `omega` (within 1e-12·Λ), if any.
  std::optional<Eigen::Index> find_node(double omega) const;
  Eigen::Index nearest_node(double omega) const;

  // δ(ω − ω_k) on the grid: 1/w_k at node k, zero elsewhere.
  Eigen::VectorXd delta(Eigen::Index k) const;

  bool operator==(const FrequencyGrid& other) const;

private:
  Eigen::VectorXd nodes_;
  Eigen::VectorXd weights_;
  double cutoff_;
};

using GridPtr = std::shared_ptr<const FrequencyGrid>;

// Gauss–Legendre nodes/weights on [-1, 1].
void gauss_legendre_rule(std::size_t n, Eigen::VectorXd& x, Eigen::VectorXd& w);

}  // namespace friedrichs
