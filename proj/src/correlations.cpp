#include "friedrichs/correlations.hpp"

#include <random>

#include "friedrichs/error.hpp"
#include "friedrichs/liouville.hpp"
#include "friedrichs/resolvent.hpp"

namespace friedrichs {

namespace {

struct FirstOrderFactors {
  Eigen::VectorXcd v;       // λV
  Eigen::VectorXcd v_kp;    // λV K⁺
  Eigen::VectorXcd v_km;    // λV K⁻
  Eigen::VectorXcd wv_kp;   // w λV K⁺
  Eigen::VectorXcd wv_km;   // w λV K⁻
};

FirstOrderFactors factors(const ModelConfig& cfg) {
  const Eigen::VectorXcd kp = ResolventKernel(cfg, Branch::Plus).values();
  const Eigen::VectorXcd km = ResolventKernel(cfg, Branch::Minus).values();
  FirstOrderFactors f;
  f.v = cfg.coupling().cast<Complex>();
  f.v_kp = f.v.cwiseProduct(kp);
  f.v_km = f.v.cwiseProduct(km);
  const Eigen::VectorXcd w = cfg.grid().weights().cast<Complex>();
  f.wv_kp = w.cwiseProduct(f.v_kp);
  f.wv_km = w.cwiseProduct(f.v_km);
  return f;
}

const Eigen::MatrixXcd& one() {
  static const Eigen::MatrixXcd o = Eigen::MatrixXcd::Ones(1, 1);
  return o;
}

}  // namespace

SuperOperator build_C1(int degree, const ModelConfig& cfg) {
  require_degree(degree);
  const FirstOrderFactors f = factors(cfg);
  SuperOperator op(cfg.grid_ptr());
  using C = Component;
  switch (degree) {
    case 0:
      op.set_block(C::Discrete, C::OneOmega, Block::low_rank(one(), -f.wv_km.transpose()));
      op.set_block(C::Discrete, C::OmegaOne, Block::low_rank(one(), -f.wv_kp.transpose()));
      break;
    case 1:
      op.set_block(C::OneOmega, C::Discrete, Block::low_rank(f.v_km, one()));
      op.set_block(C::OneOmega, C::Singular, Block::diagonal(-f.v_km));
      op.set_block(C::OneOmega, C::Kernel, Block::contract(-f.wv_kp, KernelIndex::First));
      op.set_block(C::OmegaOne, C::Discrete, Block::low_rank(f.v_kp, one()));
      op.set_block(C::OmegaOne, C::Singular, Block::diagonal(-f.v_kp));
      op.set_block(C::OmegaOne, C::Kernel, Block::contract(-f.wv_km, KernelIndex::Second));
      break;
    default:
      op.set_block(C::Kernel, C::OneOmega, Block::broadcast(f.v_kp, KernelIndex::First));
      op.set_block(C::Kernel, C::OmegaOne, Block::broadcast(f.v_km, KernelIndex::Second));
      break;
  }
  return op;
}

SuperOperator build_D1(int degree, const ModelConfig& cfg) {
  require_degree(degree);
  const FirstOrderFactors f = factors(cfg);
  SuperOperator op(cfg.grid_ptr());
  using C = Component;
  switch (degree) {
    case 0:
      op.set_block(C::OneOmega, C::Discrete, Block::low_rank(-f.v_km, one()));
      op.set_block(C::OneOmega, C::Singular, Block::diagonal(f.v_km));
      op.set_block(C::OmegaOne, C::Discrete, Block::low_rank(-f.v_kp, one()));
      op.set_block(C::OmegaOne, C::Singular, Block::diagonal(f.v_kp));
      break;
    case 1:
      op.set_block(C::Discrete, C::OneOmega, Block::low_rank(one(), f.wv_km.transpose()));
      op.set_block(C::Discrete, C::OmegaOne, Block::low_rank(one(), f.wv_kp.transpose()));
      op.set_block(C::Kernel, C::OneOmega, Block::broadcast(-f.v_kp, KernelIndex::First));
      op.set_block(C::Kernel, C::OmegaOne, Block::broadcast(-f.v_km, KernelIndex::Second));
      break;
    default:
      op.set_block(C::OneOmega, C::Kernel, Block::contract(f.wv_kp, KernelIndex::First));
      op.set_block(C::OmegaOne, C::Kernel, Block::contract(f.wv_km, KernelIndex::Second));
      break;
  }
  return op;
}

CorrelationOperators zero_correlations(GridPtr grid) {
  CorrelationOperators z;
  for (int n = 0; n < 3; ++n) {
    z.C[n] = SuperOperator(grid);
    z.D[n] = SuperOperator(grid);
  }
  return z;
}

CorrelationOperators first_order_correlations(const ModelConfig& cfg) {
  CorrelationOperators c;
  for (int n = 0; n < 3; ++n) {
    c.C[n] = build_C1(n, cfg);
    c.D[n] = build_D1(n, cfg);
  }
  return c;
}

CorrelationOperators refine_CD(const CorrelationOperators& prev, const ModelConfig& cfg) {
  const GridPtr& grid = cfg.grid_ptr();
  const Eigen::Index n = grid->ssize();
  if (n > max_dense_nodes)
    throw DimensionError("refine_CD works on dense operators; grid has too many nodes");
  const Eigen::Index d = flat_dimension(n);
  const Eigen::MatrixXcd l1 = build_L1(cfg).to_dense();
  const GridResolvent resolvent(cfg);

  Eigen::VectorXi deg(d);
  for (Eigen::Index i = 0; i < d; ++i) deg[i] = degree(component_of(i, n));

  CorrelationOperators next;
  for (int k = 0; k < 3; ++k) {
    Eigen::VectorXcd pmask(d);
    for (Eigen::Index i = 0; i < d; ++i) pmask[i] = deg[i] == k ? 1.0 : 0.0;
    const Eigen::MatrixXcd p = pmask.asDiagonal();
    const Eigen::MatrixXcd q = Eigen::MatrixXcd::Identity(d, d) - p;
    const Eigen::MatrixXcd c = prev.C[k].to_dense();
    const Eigen::MatrixXcd dd = prev.D[k].to_dense();
    const Eigen::MatrixXcd c_rhs = (p + c) * l1 * (c - q);
    const Eigen::MatrixXcd d_rhs = (q - dd) * l1 * (p + dd);

    Eigen::MatrixXcd c_next = Eigen::MatrixXcd::Zero(d, d);
    Eigen::MatrixXcd d_next = Eigen::MatrixXcd::Zero(d, d);
    for (Eigen::Index a = 0; a < d; ++a)
      for (Eigen::Index b = 0; b < d; ++b) {
        if (deg[a] == deg[b]) continue;
        const bool c_support = deg[a] == k;
        const bool d_support = deg[b] == k;
        if (!c_support && !d_support) continue;
        const Eigen::MatrixXcd& rhs = c_support ? c_rhs : d_rhs;
        if (rhs(a, b) == Complex(0.0)) continue;
        const OperatorKind kind = c_support ? OperatorKind::Creation : OperatorKind::Destruction;
        const Complex r = resolvent(a, b, time_ordering_branch(deg[a], deg[b], kind));
        (c_support ? c_next : d_next)(a, b) = r * rhs(a, b);
      }
    next.C[k] = SuperOperator::from_dense(grid, c_next);
    next.D[k] = SuperOperator::from_dense(grid, d_next);
  }
  return next;
}

SuperOperator build_theta2(int degree, const ModelConfig& cfg) {
  require_degree(degree);
  const SuperOperator l1 = build_L1(cfg);
  const SuperOperator free_part = restrict_degrees(build_L0(cfg, degree) + l1, degree, degree);
  const SuperOperator second = restrict_degrees(compose(build_C1(degree, cfg), l1), degree, degree);
  return free_part + second;
}

SuperOperator build_theta2(const ModelConfig& cfg) {
  return build_theta2(0, cfg) + build_theta2(1, cfg) + build_theta2(2, cfg);
}

std::pair<SuperOperator, SuperOperator> build_omega1(const ModelConfig& cfg) {
  const GridPtr& grid = cfg.grid_ptr();
  SuperOperator omega = SuperOperator::identity(grid);
  SuperOperator inverse = SuperOperator::identity(grid);
  for (int n = 0; n < 3; ++n) {
    omega = omega + build_C1(n, cfg);
    inverse = inverse + build_D1(n, cfg);
  }
  return {omega, inverse};
}

Eigen::VectorXcd singular_diagonal(const Block& b) {
  const Eigen::Index t = b.target_dim();
  if (t != b.source_dim()) throw DimensionError("singular diagonal of a non-square block");
  Eigen::VectorXcd d = Eigen::VectorXcd::Zero(t);
  const auto take = [&](const Block& x) {
    if (const auto* s = std::get_if<block::Scalar>(&x.node())) d.array() += s->value;
    if (const auto* g = std::get_if<block::Diagonal>(&x.node())) d += g->values;
  };
  if (const auto* sum = std::get_if<block::Sum>(&b.node()))
    for (const auto& term : sum->terms) take(term);
  else
    take(b);
  return d;
}

SandwichResidual isospectral_residual(const ModelConfig& cfg, SandwichOrder order, int samples,
                                      std::uint64_t seed) {
  const auto [omega, inverse] = build_omega1(cfg);
  const SuperOperator l = build_L0(cfg) + build_L1(cfg);
  const SuperOperator theta = build_theta2(cfg);
  const SuperOperator& first = order == SandwichOrder::InverseFirst ? omega : inverse;
  const SuperOperator& last = order == SandwichOrder::InverseFirst ? inverse : omega;
  std::mt19937_64 rng(seed);
  SandwichResidual r;
  for (int i = 0; i < samples; ++i) {
    const Observable o = random_observable(cfg.grid_ptr(), rng);
    const Observable s = last.apply(l.apply(first.apply(o)));
    const double rel = weighted_norm(s - theta.apply(o)) / weighted_norm(o);
    r.max_relative = std::max(r.max_relative, rel);
    r.mean_relative += rel / samples;
  }
  return r;
}

double omega_inverse_defect(const ModelConfig& cfg, int samples, std::uint64_t seed) {
  const auto [omega, inverse] = build_omega1(cfg);
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Observable o = random_observable(cfg.grid_ptr(), rng);
    worst = std::max(worst, weighted_norm(omega.apply(inverse.apply(o)) - o) / weighted_norm(o));
  }
  return worst;
}

}  // namespace friedrichs
