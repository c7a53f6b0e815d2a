#include "friedrichs/resolvent.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "friedrichs/error.hpp"
#include "friedrichs/superoperator.hpp"

namespace friedrichs {

Branch time_ordering_branch(int n_alpha, int n_beta, OperatorKind) {
  if (n_alpha == n_beta) throw DomainError("time ordering needs different correlation degrees");
  return n_beta > n_alpha ? Branch::Plus : Branch::Minus;
}

ResolventKernel::ResolventKernel(const FrequencyGrid& grid, double center, Branch sign)
    : sign_(sign), center_(center), weights_(grid.weights()) {
  const double cutoff = grid.cutoff();
  if (!(center > 0.0 && center < cutoff)) throw DomainError("resolvent centre must lie in (0, cutoff)");
  const auto km = grid.find_node(center);
  if (!km) throw DomainError("resolvent centre must be a grid node");
  const Eigen::Index n = grid.ssize();
  if (n < 3) throw DimensionError("resolvent kernel needs at least 3 nodes");
  delta_index_ = *km;

  const Eigen::VectorXd& x = grid.nodes();
  const Eigen::VectorXd& w = grid.weights();
  Eigen::Index a = delta_index_ - 1, b = delta_index_ + 1;
  if (delta_index_ == 0) a = 2;
  if (delta_index_ == n - 1) b = n - 3;
  const double x0 = x[delta_index_];
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
  d[a] = (x0 - x[b]) / ((x[a] - x0) * (x[a] - x[b]));
  d[b] = (x0 - x[a]) / ((x[b] - x0) * (x[b] - x[a]));
  d[delta_index_] = -(d[a] + d[b]);

  const double wm = w[delta_index_];
  pv_weights_.resize(n);
  double regular = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (k == delta_index_) continue;
    pv_weights_[k] = 1.0 / (x[k] - center) + wm * d[k] / w[k];
    regular += w[k] / (x[k] - center);
  }
  pv_weights_[delta_index_] =
      (std::log((cutoff - center) / center) - regular + wm * d[delta_index_]) / wm;
  delta_coefficient_ = Complex(0.0, -static_cast<double>(friedrichs::sign(sign)) * std::numbers::pi / wm);
}

ResolventKernel::ResolventKernel(const ModelConfig& cfg, Branch sign)
    : ResolventKernel(cfg.grid(), cfg.m(), sign) {}

Complex ResolventKernel::value(Eigen::Index k) const {
  Complex v = pv_weights_[k];
  if (k == delta_index_) v += delta_coefficient_;
  return v;
}

Eigen::VectorXcd ResolventKernel::values() const {
  Eigen::VectorXcd v = pv_weights_.cast<Complex>();
  v[delta_index_] += delta_coefficient_;
  return v;
}

Complex ResolventKernel::apply(const Eigen::Ref<const Eigen::VectorXcd>& f) const {
  if (f.size() != pv_weights_.size()) throw DimensionError("resolvent applied to an array of the wrong length");
  return (weights_.cwiseProduct(pv_weights_)).cast<Complex>().dot(f) +
         weights_[delta_index_] * delta_coefficient_ * f[delta_index_];
}

FrequencySignature signature_of(Eigen::Index flat, Eigen::Index n) {
  FrequencySignature s;
  const Component c = component_of(flat, n);
  const Eigen::Index local = flat - component_offset(c, n);
  switch (c) {
    case Component::Discrete:
      break;
    case Component::Singular:
      s.labels = {local};
      break;
    case Component::OneOmega:
      s.m_coefficient = 1;
      s.nodes = {{local, -1}};
      s.labels = {local};
      break;
    case Component::OmegaOne:
      s.m_coefficient = -1;
      s.nodes = {{local, 1}};
      s.labels = {local};
      break;
    case Component::Kernel: {
      const Eigen::Index k = local / n, l = local % n;
      if (k != l) s.nodes = {{k, 1}, {l, -1}};
      s.labels = {k, l};
      break;
    }
  }
  return s;
}

GridResolvent::GridResolvent(const ModelConfig& cfg)
    : grid_(cfg.grid_ptr()),
      m_(cfg.m()),
      plus_(cfg, Branch::Plus),
      minus_(cfg, Branch::Minus) {
  const Eigen::Index n = grid_->ssize();
  const Eigen::Index d = flat_dimension(n);
  signatures_.reserve(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) signatures_.push_back(signature_of(i, n));
}

Complex GridResolvent::operator()(Eigen::Index alpha, Eigen::Index beta, Branch branch) const {
  const auto& sa = signatures_.at(static_cast<std::size_t>(alpha));
  const auto& sb = signatures_.at(static_cast<std::size_t>(beta));
  const int c = sb.m_coefficient - sa.m_coefficient;
  std::map<Eigen::Index, int> diff;
  for (const auto& [k, v] : sb.nodes) diff[k] += v;
  for (const auto& [k, v] : sa.nodes) diff[k] -= v;
  std::erase_if(diff, [](const auto& kv) { return kv.second == 0; });

  if (diff.size() == 1) {
    const auto [j, s] = *diff.begin();
    if ((s == 1 || s == -1) && c == -s) {
      const Branch b = s == 1 ? branch : flip(branch);
      return static_cast<double>(s) * kernel(b).value(j);
    }
  }
  double x = c * m_;
  for (const auto& [k, v] : diff) x += v * grid_->node(k);
  if (std::abs(x) > 1e-13 * grid_->cutoff()) return 1.0 / x;

  Eigen::Index j;
  if (!diff.empty())
    j = diff.rbegin()->first;
  else if (!sb.labels.empty())
    j = sb.labels.back();
  else if (!sa.labels.empty())
    j = sa.labels.back();
  else
    throw NumericError("degenerate resolvent between two discrete coordinates");
  return Complex(0.0, -sign(branch) * std::numbers::pi / grid_->weight(j));
}

}  // namespace friedrichs
