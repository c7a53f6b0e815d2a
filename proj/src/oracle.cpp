#include "friedrichs/oracle.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "friedrichs/error.hpp"

namespace friedrichs {

DiscreteHamiltonian build_hamiltonian(const ModelConfig& cfg) {
  const FrequencyGrid& g = cfg.grid();
  const Eigen::Index n = g.ssize();
  DiscreteHamiltonian h;
  h.matrix = Eigen::MatrixXd::Zero(n + 1, n + 1);
  h.matrix(0, 0) = cfg.m();
  h.matrix.diagonal().tail(n) = g.nodes();
  const Eigen::VectorXd row = cfg.coupling().cwiseProduct(g.weights().cwiseSqrt());
  h.matrix.row(0).tail(n) = row.transpose();
  h.matrix.col(0).tail(n) = row;
  return h;
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0)
    throw DimensionError("density matrix must be square and nonempty");
  if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw DomainError("density matrix is not Hermitian");
  if (std::abs(matrix_.trace() - Complex(1.0)) > 1e-12) throw DomainError("density matrix trace is not 1");
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix_, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("density matrix eigenvalues failed");
  if (es.eigenvalues().minCoeff() < -1e-10) throw DomainError("density matrix is not positive semidefinite");
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi) {
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw DomainError("pure state needs a nonzero vector");
  const Eigen::VectorXcd u = psi / norm;
  return DensityMatrix(u * u.adjoint(), Unchecked{});
}

StateEnsemble StateEnsemble::from_density(const DensityMatrix& rho, double cutoff) {
  // pure state: Tr ρ² = 1 and ρ = ψψ† with ψ read off the largest column
  const Eigen::MatrixXcd& m = rho.matrix();
  if (std::abs(m.squaredNorm() - 1.0) < 1e-13) {
    Eigen::Index j = 0;
    m.diagonal().real().maxCoeff(&j);
    StateEnsemble e;
    e.probabilities = Eigen::VectorXd::Ones(1);
    e.states = m.col(j) / std::sqrt(m(j, j).real());
    if ((e.states * e.states.adjoint() - m).cwiseAbs2().maxCoeff() < 1e-26) return e;
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix());
  if (es.info() != Eigen::Success) throw NumericError("density matrix eigendecomposition failed");
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = es.eigenvalues().size() - 1; i >= 0; --i)
    if (es.eigenvalues()[i] > cutoff) keep.push_back(i);
  StateEnsemble e;
  e.probabilities.resize(static_cast<Eigen::Index>(keep.size()));
  e.states.resize(rho.dimension(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    const auto col = static_cast<Eigen::Index>(j);
    e.probabilities[col] = es.eigenvalues()[keep[j]];
    e.states.col(col) = es.eigenvectors().col(keep[j]);
  }
  return e;
}

Eigen::MatrixXcd StateEnsemble::density() const {
  return states * probabilities.cast<Complex>().asDiagonal() * states.adjoint();
}

Propagator::Propagator(const DiscreteHamiltonian& h) {
  const Eigen::MatrixXd& m = h.matrix;
  if (m.rows() != m.cols()) throw NumericError("Hamiltonian is not square");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-14 * std::max(1.0, m.cwiseAbs().maxCoeff()))
    throw NumericError("Hamiltonian is not Hermitian");
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw NumericError("Hamiltonian eigendecomposition failed");
  energies_ = es.eigenvalues();
  vectors_ = es.eigenvectors();
}

namespace {

Eigen::VectorXcd phases(const Eigen::VectorXd& energies, double t) {
  return (energies.cast<Complex>() * Complex(0.0, -t)).array().exp().matrix();
}

// Real matrix times complex matrix without a complex copy of the real factor.
template <class Real, class Cplx>
Eigen::MatrixXcd real_times(const Real& a, const Cplx& b) {
  Eigen::MatrixXcd out(a.rows(), b.cols());
  out.real() = a * b.real();
  out.imag() = a * b.imag();
  return out;
}

}  // namespace

Eigen::VectorXcd Propagator::evolve(const Eigen::VectorXcd& psi, double t) const {
  if (psi.size() != energies_.size()) throw DimensionError("state and Hamiltonian dimensions differ");
  const Eigen::MatrixXcd c = real_times(vectors_.transpose(), psi);
  return real_times(vectors_, phases(energies_, t).cwiseProduct(c.col(0)));
}

StateEnsemble Propagator::evolve(const StateEnsemble& ensemble, double t) const {
  if (ensemble.states.rows() != energies_.size()) throw DimensionError("state and Hamiltonian dimensions differ");
  StateEnsemble out = ensemble;
  const Eigen::MatrixXcd c = real_times(vectors_.transpose(), ensemble.states);
  out.states = real_times(vectors_, phases(energies_, t).asDiagonal() * c);
  return out;
}

DensityMatrix Propagator::evolve(const DensityMatrix& rho, double t) const {
  if (rho.dimension() != energies_.size()) throw DimensionError("state and Hamiltonian dimensions differ");
  const Eigen::MatrixXcd u = vectors_.cast<Complex>();
  const Eigen::VectorXcd p = phases(energies_, t);
  const Eigen::MatrixXcd inner = p.asDiagonal() * (u.adjoint() * rho.matrix() * u) * p.conjugate().asDiagonal();
  Eigen::MatrixXcd out = u * inner * u.adjoint();
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityMatrix(std::move(out), DensityMatrix::Unchecked{});
}

double Propagator::survival(const Eigen::VectorXcd& psi, double t) const {
  return survival_curve(psi, {t}).front();
}

std::vector<double> Propagator::survival_curve(const Eigen::VectorXcd& psi,
                                               const std::vector<double>& times) const {
  if (psi.size() != energies_.size()) throw DimensionError("state and Hamiltonian dimensions differ");
  const Eigen::VectorXcd c = real_times(vectors_.transpose(), psi).col(0);
  const Eigen::VectorXcd a = vectors_.row(0).transpose().cast<Complex>().cwiseProduct(c);
  std::vector<double> out;
  out.reserve(times.size());
  for (const double t : times) out.push_back(std::norm(phases(energies_, t).dot(a.conjugate())));
  return out;
}

DensityMatrix exact_evolve(const DensityMatrix& rho, const DiscreteHamiltonian& h, double t) {
  return Propagator(h).evolve(rho, t);
}

StateFunctional matrix_to_functional(const Eigen::MatrixXcd& rho, GridPtr grid) {
  const Eigen::Index n = grid->ssize();
  if (rho.rows() != n + 1 || rho.cols() != n + 1) throw DimensionError("matrix size does not match the grid");
  const Eigen::VectorXd& w = grid->weights();
  const Eigen::VectorXd sw = w.cwiseSqrt();
  StateFunctional f(grid);
  f.discrete = rho(0, 0);
  f.singular = rho.diagonal().tail(n).cwiseQuotient(w.cast<Complex>());
  f.one_omega = rho.row(0).tail(n).transpose().cwiseQuotient(sw.cast<Complex>());
  f.omega_one = rho.col(0).tail(n).cwiseQuotient(sw.cast<Complex>());
  const Eigen::MatrixXd inv = (sw * sw.transpose()).cwiseInverse();
  f.kernel = rho.bottomRightCorner(n, n).cwiseProduct(inv.cast<Complex>());
  f.kernel.diagonal().setZero();
  return f;
}

StateFunctional matrix_to_functional(const DensityMatrix& rho, GridPtr grid) {
  return matrix_to_functional(rho.matrix(), std::move(grid));
}

Eigen::MatrixXcd functional_to_matrix(const StateFunctional& rho) {
  const FrequencyGrid& g = *rho.grid;
  const Eigen::Index n = g.ssize();
  const Eigen::VectorXd& w = g.weights();
  const Eigen::VectorXd sw = w.cwiseSqrt();
  Eigen::MatrixXcd m(n + 1, n + 1);
  m(0, 0) = rho.discrete;
  m.row(0).tail(n) = rho.one_omega.cwiseProduct(sw.cast<Complex>()).transpose();
  m.col(0).tail(n) = rho.omega_one.cwiseProduct(sw.cast<Complex>());
  m.bottomRightCorner(n, n) = rho.kernel.cwiseProduct((sw * sw.transpose()).cast<Complex>());
  m.diagonal().tail(n) += rho.singular.cwiseProduct(w.cast<Complex>());
  return m;
}

Eigen::MatrixXcd observable_to_matrix(const Observable& obs) {
  const FrequencyGrid& g = *obs.grid;
  const Eigen::Index n = g.ssize();
  const Eigen::VectorXd sw = g.weights().cwiseSqrt();
  Eigen::MatrixXcd m(n + 1, n + 1);
  m(0, 0) = obs.discrete;
  m.row(0).tail(n) = obs.one_omega.cwiseProduct(sw.cast<Complex>()).transpose();
  m.col(0).tail(n) = obs.omega_one.cwiseProduct(sw.cast<Complex>());
  m.bottomRightCorner(n, n) = obs.kernel.cwiseProduct((sw * sw.transpose()).cast<Complex>());
  m.diagonal().tail(n) += obs.singular;
  return m;
}

Observable matrix_to_observable(const Eigen::MatrixXcd& o, GridPtr grid) {
  const Eigen::Index n = grid->ssize();
  if (o.rows() != n + 1 || o.cols() != n + 1) throw DimensionError("matrix size does not match the grid");
  const Eigen::VectorXd sw = grid->weights().cwiseSqrt();
  Observable obs(grid);
  obs.discrete = o(0, 0);
  obs.singular = o.diagonal().tail(n);
  obs.one_omega = o.row(0).tail(n).transpose().cwiseQuotient(sw.cast<Complex>());
  obs.omega_one = o.col(0).tail(n).cwiseQuotient(sw.cast<Complex>());
  obs.kernel = o.bottomRightCorner(n, n).cwiseProduct((sw * sw.transpose()).cwiseInverse().cast<Complex>());
  obs.kernel.diagonal().setZero();
  return obs;
}

double fit_decay_rate(const std::vector<std::pair<double, double>>& samples, double gamma_guess) {
  if (samples.size() < 10) throw DataError("decay fit needs at least 10 samples");
  if (!(gamma_guess >= 0.0) || !std::isfinite(gamma_guess)) throw DataError("decay fit needs a finite rate guess");
  const double lo = gamma_guess > 0.0 ? 0.1 / gamma_guess : -INFINITY;
  const double hi = gamma_guess > 0.0 ? 1.0 / gamma_guess : INFINITY;
  double s0 = 0, st = 0, sy = 0, stt = 0, sty = 0;
  for (const auto& [t, s] : samples) {
    if (t < lo || t > hi) continue;
    if (!(s > 0.0)) throw DataError("nonpositive survival inside the fit window");
    const double y = std::log(s);
    s0 += 1;
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
  }
  if (s0 < 2) throw DataError("fewer than two samples inside the fit window");
  const double den = s0 * stt - st * st;
  if (!(std::abs(den) > 0.0)) throw DataError("fit window samples share one time");
  return -(s0 * sty - st * sy) / den;
}

double oracle_initial_slope(const Propagator& propagator, double delta) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(propagator.energies().size());
  psi[0] = 1.0;
  const auto s = propagator.survival_curve(psi, {0.0, delta});
  return (s[1] - s[0]) / delta;
}

}  // namespace friedrichs
