#include "friedrichs/superoperator.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "friedrichs/error.hpp"

namespace friedrichs {

namespace {

// Refuse to materialize anything larger than this many complex entries.
constexpr Eigen::Index max_dense_entries = Eigen::Index{1} << 26;

template <class T>
const T* as(const Block& b) {
  return std::get_if<T>(&b.node());
}

}  // namespace

Block::Block(Eigen::Index target_dim, Eigen::Index source_dim)
    : Block(target_dim, source_dim, block::Zero{}) {}

Block::Block(Eigen::Index target_dim, Eigen::Index source_dim, block::Node node)
    : target_(target_dim),
      source_(source_dim),
      node_(std::make_shared<const block::Node>(std::move(node))) {}

Block Block::zero(Eigen::Index target_dim, Eigen::Index source_dim) {
  return Block(target_dim, source_dim);
}

Block Block::scalar(Eigen::Index dim, Complex value) {
  if (value == Complex(0.0)) return zero(dim, dim);
  return Block(dim, dim, block::Scalar{value});
}

Block Block::diagonal(Eigen::VectorXcd values) {
  const Eigen::Index n = values.size();
  return Block(n, n, block::Diagonal{std::move(values)});
}

Block Block::dense(Eigen::MatrixXcd matrix) {
  const Eigen::Index t = matrix.rows(), s = matrix.cols();
  return Block(t, s, block::Dense{std::move(matrix)});
}

Block Block::low_rank(Eigen::MatrixXcd cols, Eigen::MatrixXcd rows) {
  if (cols.cols() != rows.rows()) throw DimensionError("low-rank factors do not conform");
  const Eigen::Index t = cols.rows(), s = rows.cols();
  return Block(t, s, block::LowRank{std::move(cols), std::move(rows)});
}

Block Block::broadcast(Eigen::VectorXcd a, KernelIndex pinned) {
  const Eigen::Index n = a.size();
  return Block(n * n, n, block::Broadcast{std::move(a), pinned});
}

Block Block::contract(Eigen::VectorXcd b, KernelIndex summed) {
  const Eigen::Index n = b.size();
  return Block(n, n * n, block::Contract{std::move(b), summed});
}

Eigen::VectorXcd Block::apply(const Eigen::Ref<const Eigen::VectorXcd>& x) const {
  if (x.size() != source_) throw DimensionError("block applied to a vector of the wrong length");
  return std::visit(
      [&](const auto& n) -> Eigen::VectorXcd {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, block::Zero>) {
          return Eigen::VectorXcd::Zero(target_);
        } else if constexpr (std::is_same_v<T, block::Scalar>) {
          return n.value * x;
        } else if constexpr (std::is_same_v<T, block::Diagonal>) {
          return n.values.cwiseProduct(x);
        } else if constexpr (std::is_same_v<T, block::Dense>) {
          return n.matrix * x;
        } else if constexpr (std::is_same_v<T, block::LowRank>) {
          return n.cols * (n.rows * x);
        } else if constexpr (std::is_same_v<T, block::Broadcast>) {
          const Eigen::Index m = n.a.size();
          Eigen::VectorXcd out(m * m);
          Eigen::Map<KernelMatrix> k(out.data(), m, m);
          if (n.pinned == KernelIndex::First)
            k.noalias() = n.a * x.transpose();
          else
            k.noalias() = x * n.a.transpose();
          return out;
        } else if constexpr (std::is_same_v<T, block::Contract>) {
          const Eigen::Index m = n.b.size();
          Eigen::Map<const KernelMatrix> k(x.data(), m, m);
          if (n.summed == KernelIndex::First) return k.transpose() * n.b;
          return k * n.b;
        } else if constexpr (std::is_same_v<T, block::Sum>) {
          Eigen::VectorXcd out = Eigen::VectorXcd::Zero(target_);
          for (const auto& t : n.terms) out += t.apply(x);
          return out;
        } else {
          Eigen::VectorXcd v = x;
          for (auto it = n.factors.rbegin(); it != n.factors.rend(); ++it) v = it->apply(v);
          return v;
        }
      },
      *node_);
}

Block scale(Complex s, const Block& a) {
  const Eigen::Index t = a.target_dim(), src = a.source_dim();
  if (s == Complex(0.0) || a.is_zero()) return Block::zero(t, src);
  if (s == Complex(1.0)) return a;
  return std::visit(
      [&](const auto& n) -> Block {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, block::Zero>) {
          return Block::zero(t, src);
        } else if constexpr (std::is_same_v<T, block::Scalar>) {
          return Block::scalar(t, s * n.value);
        } else if constexpr (std::is_same_v<T, block::Diagonal>) {
          return Block::diagonal(s * n.values);
        } else if constexpr (std::is_same_v<T, block::Dense>) {
          return Block::dense(s * n.matrix);
        } else if constexpr (std::is_same_v<T, block::LowRank>) {
          return Block::low_rank(s * n.cols, n.rows);
        } else if constexpr (std::is_same_v<T, block::Broadcast>) {
          return Block::broadcast(s * n.a, n.pinned);
        } else if constexpr (std::is_same_v<T, block::Contract>) {
          return Block::contract(s * n.b, n.summed);
        } else if constexpr (std::is_same_v<T, block::Sum>) {
          block::Sum out;
          for (const auto& term : n.terms) out.terms.push_back(scale(s, term));
          return Block(t, src, std::move(out));
        } else {
          block::Product out = n;
          out.factors.front() = scale(s, out.factors.front());
          return Block(t, src, std::move(out));
        }
      },
      a.node());
}

Block adjoint(const Block& a) {
  const Eigen::Index t = a.source_dim(), src = a.target_dim();
  return std::visit(
      [&](const auto& n) -> Block {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, block::Zero>) {
          return Block::zero(t, src);
        } else if constexpr (std::is_same_v<T, block::Scalar>) {
          return Block::scalar(t, std::conj(n.value));
        } else if constexpr (std::is_same_v<T, block::Diagonal>) {
          return Block::diagonal(n.values.conjugate());
        } else if constexpr (std::is_same_v<T, block::Dense>) {
          return Block::dense(n.matrix.adjoint());
        } else if constexpr (std::is_same_v<T, block::LowRank>) {
          return Block::low_rank(n.rows.adjoint(), n.cols.adjoint());
        } else if constexpr (std::is_same_v<T, block::Broadcast>) {
          return Block::contract(n.a.conjugate(), n.pinned);
        } else if constexpr (std::is_same_v<T, block::Contract>) {
          return Block::broadcast(n.b.conjugate(), n.summed);
        } else if constexpr (std::is_same_v<T, block::Sum>) {
          block::Sum out;
          for (const auto& term : n.terms) out.terms.push_back(adjoint(term));
          return Block(t, src, std::move(out));
        } else {
          block::Product out;
          for (auto it = n.factors.rbegin(); it != n.factors.rend(); ++it)
            out.factors.push_back(adjoint(*it));
          return Block(t, src, std::move(out));
        }
      },
      a.node());
}

Eigen::MatrixXcd to_dense(const Block& a) {
  const Eigen::Index t = a.target_dim(), s = a.source_dim();
  if (t * s > max_dense_entries)
    throw DimensionError("block too large to materialize (" + std::to_string(t) + "x" +
                         std::to_string(s) + ")");
  return std::visit(
      [&](const auto& n) -> Eigen::MatrixXcd {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, block::Zero>) {
          return Eigen::MatrixXcd::Zero(t, s);
        } else if constexpr (std::is_same_v<T, block::Scalar>) {
          return n.value * Eigen::MatrixXcd::Identity(t, s);
        } else if constexpr (std::is_same_v<T, block::Diagonal>) {
          return n.values.asDiagonal();
        } else if constexpr (std::is_same_v<T, block::Dense>) {
          return n.matrix;
        } else if constexpr (std::is_same_v<T, block::LowRank>) {
          return n.cols * n.rows;
        } else if constexpr (std::is_same_v<T, block::Broadcast>) {
          const Eigen::Index m = n.a.size();
          Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(t, s);
          for (Eigen::Index k = 0; k < m; ++k)
            for (Eigen::Index l = 0; l < m; ++l) {
              if (n.pinned == KernelIndex::First)
                out(k * m + l, l) = n.a[k];
              else
                out(k * m + l, k) = n.a[l];
            }
          return out;
        } else if constexpr (std::is_same_v<T, block::Contract>) {
          const Eigen::Index m = n.b.size();
          Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(t, s);
          for (Eigen::Index k = 0; k < m; ++k)
            for (Eigen::Index l = 0; l < m; ++l) {
              if (n.summed == KernelIndex::First)
                out(l, k * m + l) = n.b[k];
              else
                out(k, k * m + l) = n.b[l];
            }
          return out;
        } else if constexpr (std::is_same_v<T, block::Sum>) {
          Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(t, s);
          for (const auto& term : n.terms) out += to_dense(term);
          return out;
        } else {
          Eigen::MatrixXcd out = to_dense(n.factors.back());
          for (auto it = n.factors.rbegin() + 1; it != n.factors.rend(); ++it)
            out = to_dense(*it) * out;
          return out;
        }
      },
      a.node());
}

Eigen::VectorXcd diagonal(const Block& a) {
  const Eigen::Index t = a.target_dim();
  if (t != a.source_dim()) throw DimensionError("diagonal of a non-square block");
  if (as<block::Zero>(a)) return Eigen::VectorXcd::Zero(t);
  if (const auto* n = as<block::Scalar>(a)) return Eigen::VectorXcd::Constant(t, n->value);
  if (const auto* n = as<block::Diagonal>(a)) return n->values;
  if (const auto* n = as<block::Dense>(a)) return n->matrix.diagonal();
  if (const auto* n = as<block::LowRank>(a))
    return (n->cols.array() * n->rows.transpose().array()).rowwise().sum();
  if (const auto* n = as<block::Sum>(a)) {
    Eigen::VectorXcd d = Eigen::VectorXcd::Zero(t);
    for (const auto& term : n->terms) d += diagonal(term);
    return d;
  }
  Eigen::VectorXcd d(t);
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(t);
  for (Eigen::Index i = 0; i < t; ++i) {
    e[i] = 1.0;
    d[i] = a.apply(e)[i];
    e[i] = 0.0;
  }
  return d;
}

namespace {

// a ∘ b when a closed structured form exists.
std::optional<Block> try_compose(const Block& a, const Block& b) {
  const Eigen::Index t = a.target_dim(), s = b.source_dim();
  if (a.is_zero() || b.is_zero()) return Block::zero(t, s);
  if (const auto* n = as<block::Scalar>(a)) return scale(n->value, b);
  if (const auto* n = as<block::Scalar>(b)) return scale(n->value, a);

  if (const auto* n = as<block::LowRank>(a)) {
    // rows·b = (b† rows†)†
    const Block bh = adjoint(b);
    Eigen::MatrixXcd rows_h(s, n->rows.rows());
    for (Eigen::Index r = 0; r < n->rows.rows(); ++r)
      rows_h.col(r) = bh.apply(n->rows.row(r).adjoint());
    return Block::low_rank(n->cols, rows_h.adjoint());
  }
  if (const auto* n = as<block::LowRank>(b)) {
    Eigen::MatrixXcd cols(t, n->cols.cols());
    for (Eigen::Index r = 0; r < n->cols.cols(); ++r) cols.col(r) = a.apply(n->cols.col(r));
    return Block::low_rank(std::move(cols), n->rows);
  }

  const auto* da = as<block::Diagonal>(a);
  const auto* db = as<block::Diagonal>(b);
  const auto* ma = as<block::Dense>(a);
  const auto* mb = as<block::Dense>(b);
  if (da && db) return Block::diagonal(da->values.cwiseProduct(db->values));
  if (da && mb) return Block::dense(da->values.asDiagonal() * mb->matrix);
  if (ma && db) return Block::dense(ma->matrix * db->values.asDiagonal());
  if (ma && mb) return Block::dense(ma->matrix * mb->matrix);

  const auto* ca = as<block::Contract>(a);
  const auto* bb = as<block::Broadcast>(b);
  if (ca && bb) {
    const bool same = (ca->summed == bb->pinned);
    if (same) return Block::scalar(t, (ca->b.array() * bb->a.array()).sum());
    Eigen::MatrixXcd cols = bb->a;
    Eigen::MatrixXcd rows = ca->b.transpose();
    return Block::low_rank(std::move(cols), std::move(rows));
  }
  return std::nullopt;
}

void append_factors(std::vector<Block>& out, const Block& b) {
  if (const auto* p = as<block::Product>(b))
    out.insert(out.end(), p->factors.begin(), p->factors.end());
  else
    out.push_back(b);
}

std::optional<Block> try_add(const Block& a, const Block& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const Eigen::Index t = a.target_dim();
  const auto* sa = as<block::Scalar>(a);
  const auto* sb = as<block::Scalar>(b);
  if (sa && sb) return Block::scalar(t, sa->value + sb->value);

  const auto as_diag = [t](const Block& x) -> std::optional<Eigen::VectorXcd> {
    if (const auto* n = as<block::Scalar>(x)) return Eigen::VectorXcd::Constant(t, n->value);
    if (const auto* n = as<block::Diagonal>(x)) return n->values;
    return std::nullopt;
  };
  const auto diag_a = as_diag(a);
  const auto diag_b = as_diag(b);
  if (diag_a && diag_b) return Block::diagonal(*diag_a + *diag_b);

  const auto* ma = as<block::Dense>(a);
  const auto* mb = as<block::Dense>(b);
  if (ma && (mb || diag_b || as<block::LowRank>(b))) return Block::dense(ma->matrix + to_dense(b));
  if (mb && (diag_a || as<block::LowRank>(a))) return Block::dense(to_dense(a) + mb->matrix);

  const auto* la = as<block::LowRank>(a);
  const auto* lb = as<block::LowRank>(b);
  if (la && lb) {
    Eigen::MatrixXcd cols(t, la->cols.cols() + lb->cols.cols());
    cols << la->cols, lb->cols;
    Eigen::MatrixXcd rows(la->rows.rows() + lb->rows.rows(), a.source_dim());
    rows << la->rows, lb->rows;
    return Block::low_rank(std::move(cols), std::move(rows));
  }

  const auto* ba = as<block::Broadcast>(a);
  const auto* bb = as<block::Broadcast>(b);
  if (ba && bb && ba->pinned == bb->pinned) return Block::broadcast(ba->a + bb->a, ba->pinned);
  const auto* ca = as<block::Contract>(a);
  const auto* cb = as<block::Contract>(b);
  if (ca && cb && ca->summed == cb->summed) return Block::contract(ca->b + cb->b, ca->summed);
  return std::nullopt;
}

}  // namespace

Block compose(const Block& a, const Block& b) {
  if (a.source_dim() != b.target_dim()) throw DimensionError("blocks do not conform for composition");
  const Eigen::Index t = a.target_dim(), s = b.source_dim();
  if (auto r = try_compose(a, b)) return *r;

  if (const auto* n = as<block::Sum>(a)) {
    Block out = Block::zero(t, s);
    for (const auto& term : n->terms) out = add(out, compose(term, b));
    return out;
  }
  if (const auto* n = as<block::Sum>(b)) {
    Block out = Block::zero(t, s);
    for (const auto& term : n->terms) out = add(out, compose(a, term));
    return out;
  }

  std::vector<Block> factors;
  append_factors(factors, a);
  append_factors(factors, b);
  for (bool changed = true; changed && factors.size() > 1;) {
    changed = false;
    for (std::size_t i = 0; i + 1 < factors.size(); ++i) {
      if (auto r = try_compose(factors[i], factors[i + 1])) {
        factors[i] = *r;
        factors.erase(factors.begin() + static_cast<std::ptrdiff_t>(i) + 1);
        changed = true;
        break;
      }
    }
  }
  if (factors.size() == 1) return factors.front();
  return Block(t, s, block::Product{std::move(factors)});
}

Block add(const Block& a, const Block& b) {
  if (a.target_dim() != b.target_dim() || a.source_dim() != b.source_dim())
    throw DimensionError("blocks of different shapes cannot be added");
  if (auto r = try_add(a, b)) return *r;

  std::vector<Block> terms;
  const auto push = [&terms](const Block& x) {
    for (auto& e : terms)
      if (auto r = try_add(e, x)) {
        e = *r;
        return;
      }
    terms.push_back(x);
  };
  for (const Block* x : {&a, &b}) {
    if (const auto* n = as<block::Sum>(*x))
      for (const auto& term : n->terms) push(term);
    else
      push(*x);
  }
  if (terms.size() == 1) return terms.front();
  return Block(a.target_dim(), a.source_dim(), block::Sum{std::move(terms)});
}

SuperOperator::SuperOperator(GridPtr grid) : grid_(std::move(grid)) {
  if (!grid_) throw DimensionError("superoperator needs a grid");
  const Eigen::Index n = grid_->ssize();
  for (int t = 0; t < component_count; ++t)
    for (int s = 0; s < component_count; ++s)
      blocks_[t][s] = Block::zero(component_dimension(static_cast<Component>(t), n),
                                  component_dimension(static_cast<Component>(s), n));
}

SuperOperator SuperOperator::identity(GridPtr grid) {
  SuperOperator id(std::move(grid));
  const Eigen::Index n = id.grid_->ssize();
  for (int c = 0; c < component_count; ++c)
    id.blocks_[c][c] = Block::scalar(component_dimension(static_cast<Component>(c), n), 1.0);
  return id;
}

SuperOperator SuperOperator::from_dense(GridPtr grid, const Eigen::MatrixXcd& matrix) {
  SuperOperator op(std::move(grid));
  const Eigen::Index n = op.grid_->ssize();
  const Eigen::Index d = flat_dimension(n);
  if (matrix.rows() != d || matrix.cols() != d) throw DimensionError("dense superoperator has the wrong size");
  for (int t = 0; t < component_count; ++t)
    for (int s = 0; s < component_count; ++s) {
      const auto ct = static_cast<Component>(t);
      const auto cs = static_cast<Component>(s);
      const auto sub = matrix.block(component_offset(ct, n), component_offset(cs, n),
                                    component_dimension(ct, n), component_dimension(cs, n));
      if (!(sub.array() == Complex(0.0)).all()) op.blocks_[t][s] = Block::dense(sub);
    }
  return op;
}

const Block& SuperOperator::block(Component target, Component source) const {
  return blocks_[static_cast<int>(target)][static_cast<int>(source)];
}

void SuperOperator::set_block(Component target, Component source, Block b) {
  const Eigen::Index n = grid_->ssize();
  if (b.target_dim() != component_dimension(target, n) ||
      b.source_dim() != component_dimension(source, n))
    throw DimensionError("block shape does not match its component pair");
  blocks_[static_cast<int>(target)][static_cast<int>(source)] = std::move(b);
}

Observable SuperOperator::apply(const Observable& obs) const {
  require_same_grid(grid_, obs.grid);
  Observable out(grid_);
  for (int t = 0; t < component_count; ++t) {
    const auto ct = static_cast<Component>(t);
    auto target = out.component(ct);
    for (int s = 0; s < component_count; ++s) {
      const Block& b = blocks_[t][s];
      if (!b.is_zero()) target += b.apply(obs.component(static_cast<Component>(s)));
    }
  }
  return out;
}

namespace {

// Pairing measure μ of each coordinate: 1, w_k, w_k, w_k, w_k·w_l.
Eigen::VectorXcd measure(const FrequencyGrid& g, Component c) {
  const Eigen::VectorXd& w = g.weights();
  switch (c) {
    case Component::Discrete: return Eigen::VectorXcd::Ones(1);
    case Component::Kernel: {
      Eigen::VectorXcd mu(w.size() * w.size());
      Eigen::Map<KernelMatrix>(mu.data(), w.size(), w.size()) = (w * w.transpose()).cast<Complex>();
      return mu;
    }
    default: return w.cast<Complex>();
  }
}

}  // namespace

StateFunctional SuperOperator::apply_left(const StateFunctional& rho) const {
  require_same_grid(grid_, rho.grid);
  // (f|O) = (ρ|X O)  ⇒  f = μ⁻¹ ⊙ X†(μ ⊙ ρ) in coordinates
  StateFunctional out(grid_);
  std::array<Eigen::VectorXcd, component_count> weighted;
  for (int t = 0; t < component_count; ++t) {
    const auto ct = static_cast<Component>(t);
    weighted[t] = measure(*grid_, ct).cwiseProduct(rho.component(ct));
  }
  for (int s = 0; s < component_count; ++s) {
    const auto cs = static_cast<Component>(s);
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(component_dimension(cs, grid_->ssize()));
    for (int t = 0; t < component_count; ++t) {
      const Block& b = blocks_[t][s];
      if (!b.is_zero()) acc += adjoint(b).apply(weighted[t]);
    }
    out.component(cs) = acc.cwiseQuotient(measure(*grid_, cs));
  }
  return out;
}

Eigen::MatrixXcd SuperOperator::to_dense() const {
  const Eigen::Index n = grid_->ssize();
  if (n > max_dense_nodes)
    throw DimensionError("dense superoperator limited to " + std::to_string(max_dense_nodes) + " nodes");
  const Eigen::Index d = flat_dimension(n);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  for (int t = 0; t < component_count; ++t)
    for (int s = 0; s < component_count; ++s) {
      const Block& b = blocks_[t][s];
      if (b.is_zero()) continue;
      const auto ct = static_cast<Component>(t);
      const auto cs = static_cast<Component>(s);
      out.block(component_offset(ct, n), component_offset(cs, n), component_dimension(ct, n),
                component_dimension(cs, n)) = friedrichs::to_dense(b);
    }
  return out;
}

SuperOperator compose(const SuperOperator& a, const SuperOperator& b) {
  require_same_grid(a.grid(), b.grid());
  SuperOperator out(a.grid());
  for (int t = 0; t < component_count; ++t)
    for (int s = 0; s < component_count; ++s) {
      const auto ct = static_cast<Component>(t);
      const auto cs = static_cast<Component>(s);
      Block acc = out.block(ct, cs);
      for (int u = 0; u < component_count; ++u) {
        const auto cu = static_cast<Component>(u);
        const Block& x = a.block(ct, cu);
        const Block& y = b.block(cu, cs);
        if (x.is_zero() || y.is_zero()) continue;
        acc = add(acc, compose(x, y));
      }
      out.set_block(ct, cs, std::move(acc));
    }
  return out;
}

SuperOperator operator*(const SuperOperator& a, const SuperOperator& b) { return compose(a, b); }

SuperOperator operator+(const SuperOperator& a, const SuperOperator& b) {
  require_same_grid(a.grid(), b.grid());
  SuperOperator out(a.grid());
  for (int t = 0; t < component_count; ++t)
    for (int s = 0; s < component_count; ++s) {
      const auto ct = static_cast<Component>(t);
      const auto cs = static_cast<Component>(s);
      out.set_block(ct, cs, add(a.block(ct, cs), b.block(ct, cs)));
    }
  return out;
}

SuperOperator operator*(Complex s, const SuperOperator& a) {
  SuperOperator out(a.grid());
  for (int t = 0; t < component_count; ++t)
    for (int u = 0; u < component_count; ++u) {
      const auto ct = static_cast<Component>(t);
      const auto cu = static_cast<Component>(u);
      out.set_block(ct, cu, scale(s, a.block(ct, cu)));
    }
  return out;
}

SuperOperator operator-(const SuperOperator& a, const SuperOperator& b) { return a + Complex(-1.0) * b; }

SuperOperator coordinate_adjoint(const SuperOperator& a) {
  SuperOperator out(a.grid());
  for (int t = 0; t < component_count; ++t)
    for (int s = 0; s < component_count; ++s) {
      const auto ct = static_cast<Component>(t);
      const auto cs = static_cast<Component>(s);
      out.set_block(cs, ct, adjoint(a.block(ct, cs)));
    }
  return out;
}

}  // namespace friedrichs
