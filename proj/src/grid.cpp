#include "friedrichs/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "friedrichs/error.hpp"

namespace friedrichs {

QuadratureRule parse_quadrature_rule(std::string_view name) {
  if (name == "midpoint") return QuadratureRule::Midpoint;
  if (name == "gauss-legendre") return QuadratureRule::GaussLegendre;
  throw DomainError("unknown quadrature rule '" + std::string(name) + "'");
}

std::string_view to_string(QuadratureRule rule) {
  return rule == QuadratureRule::Midpoint ? "midpoint" : "gauss-legendre";
}

FrequencyGrid::FrequencyGrid(Eigen::VectorXd nodes, Eigen::VectorXd weights, double cutoff)
    : nodes_(std::move(nodes)), weights_(std::move(weights)), cutoff_(cutoff) {
  if (!(cutoff_ > 0.0) || !std::isfinite(cutoff_)) throw DomainError("grid cutoff must be positive");
  if (nodes_.size() == 0) throw DimensionError("grid needs at least one node");
  if (nodes_.size() != weights_.size()) throw DimensionError("grid nodes/weights size mismatch");
  for (Eigen::Index k = 0; k < nodes_.size(); ++k) {
    if (!(nodes_[k] > 0.0 && nodes_[k] < cutoff_))
      throw DomainError("grid node " + std::to_string(k) + " outside (0, cutoff)");
    if (k > 0 && !(nodes_[k] > nodes_[k - 1]))
      throw DomainError("grid nodes must be strictly increasing");
    if (!(weights_[k] > 0.0)) throw DomainError("grid weights must be positive");
  }
  if (std::abs(weights_.sum() - cutoff_) > 1e-12 * cutoff_)
    throw DomainError("grid weights must sum to the cutoff");
}

FrequencyGrid FrequencyGrid::uniform_midpoint(double cutoff, std::size_t cells) {
  if (cells == 0) throw DimensionError("grid needs at least one cell");
  const auto n = static_cast<Eigen::Index>(cells);
  const double h = cutoff / static_cast<double>(cells);
  Eigen::VectorXd nodes(n);
  for (Eigen::Index k = 0; k < n; ++k) nodes[k] = (static_cast<double>(k) + 0.5) * h;
  Eigen::VectorXd weights = Eigen::VectorXd::Constant(n, h);
  // absorb the rounding of N·h so that Σ w = Λ
  weights[n - 1] += cutoff - weights.sum();
  return FrequencyGrid(std::move(nodes), std::move(weights), cutoff);
}

FrequencyGrid FrequencyGrid::anchored_midpoint(double cutoff, std::size_t cells, double anchor) {
  if (cells == 0) throw DimensionError("grid needs at least one cell");
  if (!(anchor > 0.0 && anchor < cutoff)) throw DomainError("anchor must lie in (0, cutoff)");
  const double h = cutoff / static_cast<double>(cells);
  if (anchor - 0.5 * h <= 0.0 || anchor + 0.5 * h >= cutoff)
    throw DomainError("anchor cell does not fit inside (0, cutoff); increase the node count");
  const double sliver = 1e-9 * h;

  // interior edges anchor + (j − ½)h strictly inside (0, Λ)
  const auto j_lo = static_cast<long>(std::ceil((0.0 - anchor) / h + 0.5));
  const auto j_hi = static_cast<long>(std::floor((cutoff - anchor) / h + 0.5));
  std::vector<double> edges{0.0};
  long anchor_cell = -1;
  for (long j = j_lo; j <= j_hi; ++j) {
    const double e = anchor + (static_cast<double>(j) - 0.5) * h;
    if (e <= sliver || e >= cutoff - sliver) continue;
    if (j == 0) anchor_cell = static_cast<long>(edges.size());
    edges.push_back(e);
  }
  edges.push_back(cutoff);

  const auto n = static_cast<Eigen::Index>(edges.size() - 1);
  Eigen::VectorXd nodes(n), weights(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    nodes[k] = 0.5 * (edges[k] + edges[k + 1]);
    weights[k] = edges[k + 1] - edges[k];
  }
  if (anchor_cell < 0) throw NumericError("anchored grid lost its anchor cell");
  nodes[anchor_cell] = anchor;
  return FrequencyGrid(std::move(nodes), std::move(weights), cutoff);
}

void gauss_legendre_rule(std::size_t n, Eigen::VectorXd& x, Eigen::VectorXd& w) {
  const auto count = static_cast<Eigen::Index>(n);
  x.resize(count);
  w.resize(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    // Tricomi initial guess, then Newton on P_n
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = z;
      for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1.0, p1 = z;
      dp = static_cast<double>(n) * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[count - 1 - i] = z;
    w[count - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

FrequencyGrid FrequencyGrid::gauss_legendre(double cutoff, std::size_t count, double anchor) {
  if (count < 3) throw DimensionError("gauss-legendre grid needs at least 3 nodes");
  if (!(anchor > 0.0 && anchor < cutoff)) throw DomainError("anchor must lie in (0, cutoff)");
  const double h = cutoff / static_cast<double>(count);
  const double a = anchor - 0.5 * h;
  const double b = anchor + 0.5 * h;
  if (a <= 0.0 || b >= cutoff)
    throw DomainError("anchor cell does not fit inside (0, cutoff); increase the node count");

  const std::size_t rest = count - 1;
  auto left = static_cast<std::size_t>(std::llround(static_cast<double>(rest) * a / (cutoff - h)));
  left = std::clamp<std::size_t>(left, 1, rest - 1);
  const std::size_t right = rest - left;

  Eigen::VectorXd nodes(static_cast<Eigen::Index>(count)), weights(nodes.size());
  Eigen::Index pos = 0;
  auto append = [&](std::size_t n, double lo, double hi) {
    Eigen::VectorXd x, w;
    gauss_legendre_rule(n, x, w);
    for (Eigen::Index i = 0; i < x.size(); ++i, ++pos) {
      nodes[pos] = lo + 0.5 * (hi - lo) * (x[i] + 1.0);
      weights[pos] = 0.5 * (hi - lo) * w[i];
    }
  };
  append(left, 0.0, a);
  nodes[pos] = anchor;
  weights[pos] = h;
  ++pos;
  append(right, b, cutoff);
  return FrequencyGrid(std::move(nodes), std::move(weights), cutoff);
}

FrequencyGrid FrequencyGrid::for_resonance(QuadratureRule rule, double cutoff, std::size_t count,
                                           double anchor) {
  if (rule == QuadratureRule::GaussLegendre) return gauss_legendre(cutoff, count, anchor);
  auto uniform = uniform_midpoint(cutoff, count);
  if (uniform.find_node(anchor)) return uniform;
  return anchored_midpoint(cutoff, count, anchor);
}

std::optional<Eigen::Index> FrequencyGrid::find_node(double omega) const {
  const Eigen::Index k = nearest_node(omega);
  if (std::abs(nodes_[k] - omega) <= 1e-12 * cutoff_) return k;
  return std::nullopt;
}

Eigen::Index FrequencyGrid::nearest_node(double omega) const {
  const double* begin = nodes_.data();
  const double* end = begin + nodes_.size();
  const double* it = std::lower_bound(begin, end, omega);
  if (it == end) return nodes_.size() - 1;
  if (it == begin) return 0;
  return (omega - *(it - 1) <= *it - omega) ? (it - begin - 1) : (it - begin);
}

Eigen::VectorXd FrequencyGrid::delta(Eigen::Index k) const {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(nodes_.size());
  d[k] = 1.0 / weights_[k];
  return d;
}

bool FrequencyGrid::operator==(const FrequencyGrid& other) const {
  return cutoff_ == other.cutoff_ && nodes_.size() == other.nodes_.size() &&
         nodes_ == other.nodes_ && weights_ == other.weights_;
}

}  // namespace friedrichs
