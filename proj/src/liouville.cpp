#include "friedrichs/liouville.hpp"

#include <string>

#include "friedrichs/error.hpp"

namespace friedrichs {

void require_degree(int degree) {
  if (degree < 0 || degree > 2)
    throw DomainError("correlation degree must be 0, 1 or 2 (got " + std::to_string(degree) + ")");
}

Observable apply_L0_dagger(const Observable& obs, const ModelConfig& cfg) {
  require_same_grid(obs.grid, cfg.grid_ptr());
  const Eigen::VectorXd& w = cfg.grid().nodes();
  const Eigen::Index n = w.size();
  const double m = cfg.m();
  Observable out(obs.grid);
  out.one_omega = (m - w.array()).cast<Complex>() * obs.one_omega.array();
  out.omega_one = (w.array() - m).cast<Complex>() * obs.omega_one.array();
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index l = 0; l < n; ++l) out.kernel(k, l) = (w[k] - w[l]) * obs.kernel(k, l);
  return out;
}

Observable apply_L1_dagger(const Observable& obs, const ModelConfig& cfg) {
  require_same_grid(obs.grid, cfg.grid_ptr());
  const Eigen::VectorXcd v = cfg.coupling().cast<Complex>();
  const Eigen::VectorXcd vw = cfg.coupling().cwiseProduct(cfg.grid().weights()).cast<Complex>();
  Observable out(obs.grid);
  out.discrete = vw.transpose() * (obs.omega_one - obs.one_omega);
  out.one_omega = v.cwiseProduct(obs.singular) - obs.discrete * v;
  out.one_omega.noalias() += obs.kernel.transpose() * vw;
  out.omega_one = obs.discrete * v - v.cwiseProduct(obs.singular);
  out.omega_one.noalias() -= obs.kernel * vw;
  out.kernel.noalias() = v * obs.one_omega.transpose();
  out.kernel.noalias() -= obs.omega_one * v.transpose();
  return out;
}

Observable project(const Observable& obs, int degree) {
  require_degree(degree);
  Observable out(obs.grid);
  for (int c = 0; c < component_count; ++c) {
    const auto comp = static_cast<Component>(c);
    if (friedrichs::degree(comp) == degree) out.component(comp) = obs.component(comp);
  }
  return out;
}

SuperOperator build_L0(const ModelConfig& cfg, std::optional<int> degree) {
  if (degree) require_degree(*degree);
  const auto wanted = [&](int d) { return !degree || *degree == d; };
  const Eigen::VectorXd& w = cfg.grid().nodes();
  const Eigen::Index n = w.size();
  SuperOperator op(cfg.grid_ptr());
  if (wanted(1)) {
    op.set_block(Component::OneOmega, Component::OneOmega,
                 Block::diagonal((cfg.m() - w.array()).cast<Complex>().matrix()));
    op.set_block(Component::OmegaOne, Component::OmegaOne,
                 Block::diagonal((w.array() - cfg.m()).cast<Complex>().matrix()));
  }
  if (wanted(2)) {
    Eigen::VectorXcd d(n * n);
    Eigen::Map<KernelMatrix>(d.data(), n, n) =
        (w * Eigen::RowVectorXd::Ones(n) - Eigen::VectorXd::Ones(n) * w.transpose()).cast<Complex>();
    op.set_block(Component::Kernel, Component::Kernel, Block::diagonal(std::move(d)));
  }
  return op;
}

SuperOperator build_L1(const ModelConfig& cfg) {
  const Eigen::VectorXcd v = cfg.coupling().cast<Complex>();
  const Eigen::VectorXcd vw = cfg.coupling().cwiseProduct(cfg.grid().weights()).cast<Complex>();
  const Eigen::MatrixXcd one = Eigen::MatrixXcd::Ones(1, 1);
  SuperOperator op(cfg.grid_ptr());
  using C = Component;
  op.set_block(C::Discrete, C::OneOmega, Block::low_rank(one, -vw.transpose()));
  op.set_block(C::Discrete, C::OmegaOne, Block::low_rank(one, vw.transpose()));
  op.set_block(C::OneOmega, C::Discrete, Block::low_rank(-v, one));
  op.set_block(C::OneOmega, C::Singular, Block::diagonal(v));
  op.set_block(C::OneOmega, C::Kernel, Block::contract(vw, KernelIndex::First));
  op.set_block(C::OmegaOne, C::Discrete, Block::low_rank(v, one));
  op.set_block(C::OmegaOne, C::Singular, Block::diagonal(-v));
  op.set_block(C::OmegaOne, C::Kernel, Block::contract(-vw, KernelIndex::Second));
  op.set_block(C::Kernel, C::OneOmega, Block::broadcast(v, KernelIndex::First));
  op.set_block(C::Kernel, C::OmegaOne, Block::broadcast(-v, KernelIndex::Second));
  return op;
}

SuperOperator build_projector(GridPtr grid, int degree) {
  require_degree(degree);
  SuperOperator op(grid);
  const Eigen::Index n = grid->ssize();
  for (int c = 0; c < component_count; ++c) {
    const auto comp = static_cast<Component>(c);
    if (friedrichs::degree(comp) == degree)
      op.set_block(comp, comp, Block::scalar(component_dimension(comp, n), 1.0));
  }
  return op;
}

SuperOperator build_complement(GridPtr grid, int degree) {
  require_degree(degree);
  SuperOperator op(grid);
  const Eigen::Index n = grid->ssize();
  for (int c = 0; c < component_count; ++c) {
    const auto comp = static_cast<Component>(c);
    if (friedrichs::degree(comp) != degree)
      op.set_block(comp, comp, Block::scalar(component_dimension(comp, n), 1.0));
  }
  return op;
}

SuperOperator restrict_degrees(const SuperOperator& op, int target_degree, int source_degree) {
  require_degree(target_degree);
  require_degree(source_degree);
  SuperOperator out(op.grid());
  for (int t = 0; t < component_count; ++t)
    for (int s = 0; s < component_count; ++s) {
      const auto ct = static_cast<Component>(t);
      const auto cs = static_cast<Component>(s);
      if (degree(ct) == target_degree && degree(cs) == source_degree)
        out.set_block(ct, cs, op.block(ct, cs));
    }
  return out;
}

}  // namespace friedrichs
