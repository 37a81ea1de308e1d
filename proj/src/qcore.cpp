#include "qsnet/qcore.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "qsnet/kernels.hpp"

namespace qsnet {
namespace {

std::atomic<int> g_qubit_limit{kDefaultQubitLimit};

int qubits_for_dimension(Eigen::Index dim, const char* what) {
  if (dim < 2 || !std::has_single_bit(static_cast<std::uint64_t>(dim))) {
    throw QuantumError(std::string(what) + ": dimension " + std::to_string(dim) +
                       " is not a power of two >= 2");
  }
  const int n = std::countr_zero(static_cast<std::uint64_t>(dim));
  if (n > qubit_limit()) {
    throw QuantumError(std::string(what) + ": " + std::to_string(n) + " qubits exceeds the limit of " +
                       std::to_string(qubit_limit()));
  }
  return n;
}

void check_qubits(std::span<const int> qubits, int n_qubits, const char* what) {
  std::vector<bool> seen(static_cast<std::size_t>(n_qubits), false);
  for (int q : qubits) {
    if (q < 0 || q >= n_qubits) {
      throw QuantumError(std::string(what) + ": qubit index " + std::to_string(q) + " out of range");
    }
    if (seen[static_cast<std::size_t>(q)]) {
      throw QuantumError(std::string(what) + ": qubit index " + std::to_string(q) + " repeated");
    }
    seen[static_cast<std::size_t>(q)] = true;
  }
}

std::vector<std::size_t> to_bits(std::span<const int> qubits, int n_qubits, std::size_t shift = 0) {
  std::vector<std::size_t> bits;
  bits.reserve(qubits.size());
  for (int q : qubits) bits.push_back(bit_position(q, n_qubits) + shift);
  return bits;
}

std::span<cplx> flat(CMatrix& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }
std::span<cplx> flat(CVector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
std::span<const cplx> flat(const CVector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

}  // namespace

int qubit_limit() { return g_qubit_limit.load(std::memory_order_relaxed); }

void set_qubit_limit(int limit) {
  if (limit < 1 || limit > 16) throw QuantumError("qubit limit must lie in [1, 16]");
  g_qubit_limit.store(limit, std::memory_order_relaxed);
}

bool is_hermitian(const CMatrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tolerance;
}

// ---------------------------------------------------------------------------
// QuantumState

QuantumState QuantumState::pure(CVector amplitudes) {
  const int n = qubits_for_dimension(amplitudes.size(), "pure state");
  const double norm2 = amplitudes.squaredNorm();
  if (std::abs(norm2 - 1.0) > kNormTolerance) {
    throw QuantumError("pure state: squared norm " + std::to_string(norm2) + " differs from 1");
  }
  return QuantumState(std::move(amplitudes), n);
}

QuantumState QuantumState::mixed(CMatrix rho) {
  if (rho.rows() != rho.cols()) throw QuantumError("mixed state: matrix is not square");
  const int n = qubits_for_dimension(rho.rows(), "mixed state");
  if (!is_hermitian(rho)) throw QuantumError("mixed state: matrix is not Hermitian");
  const double trace = rho.trace().real();
  if (std::abs(trace - 1.0) > kNormTolerance) {
    throw QuantumError("mixed state: trace " + std::to_string(trace) + " differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -kEigenClip) {
    throw QuantumError("mixed state: negative eigenvalue " + std::to_string(solver.eigenvalues().minCoeff()));
  }
  return QuantumState(std::move(rho), n);
}

QuantumState QuantumState::basis(int n_qubits, std::uint64_t index) {
  if (n_qubits < 1) throw QuantumError("basis state: n_qubits must be positive");
  if (n_qubits > qubit_limit()) throw QuantumError("basis state: qubit limit exceeded");
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (index >= dim) throw QuantumError("basis state: index out of range");
  CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return QuantumState(std::move(v), n_qubits);
}

QuantumState QuantumState::maximally_mixed(int n_qubits) {
  if (n_qubits < 1) throw QuantumError("maximally mixed state: n_qubits must be positive");
  if (n_qubits > qubit_limit()) throw QuantumError("maximally mixed state: qubit limit exceeded");
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
  CMatrix rho = CMatrix::Identity(dim, dim) / static_cast<double>(dim);
  return QuantumState(std::move(rho), n_qubits);
}

QuantumState QuantumState::pure_unchecked(CVector amplitudes, int n_qubits) {
  return QuantumState(std::move(amplitudes), n_qubits);
}

QuantumState QuantumState::mixed_unchecked(CMatrix rho, int n_qubits) {
  return QuantumState(std::move(rho), n_qubits);
}

const CVector& QuantumState::amplitudes() const {
  if (!is_pure()) throw QuantumError("amplitudes requested from a mixed state");
  return std::get<CVector>(data_);
}

const CMatrix& QuantumState::matrix() const {
  if (is_pure()) throw QuantumError("density matrix requested from a pure state; use density_matrix()");
  return std::get<CMatrix>(data_);
}

CMatrix QuantumState::density_matrix() const {
  if (is_pure()) {
    const auto& v = std::get<CVector>(data_);
    return v * v.adjoint();
  }
  return std::get<CMatrix>(data_);
}

QuantumState QuantumState::as_mixed() const { return QuantumState(density_matrix(), n_qubits_); }

double QuantumState::purity() const {
  if (is_pure()) return 1.0;
  const auto& rho = std::get<CMatrix>(data_);
  return (rho * rho).trace().real();
}

// ---------------------------------------------------------------------------
// LinearOperator

LinearOperator::LinearOperator(CMatrix matrix, bool hermitian)
    : matrix_(std::move(matrix)), hermitian_(hermitian) {
  if (matrix_.rows() != matrix_.cols()) throw QuantumError("operator: matrix is not square");
  n_qubits_ = qubits_for_dimension(matrix_.rows(), "operator");
  if (hermitian_ && !qsnet::is_hermitian(matrix_)) {
    throw QuantumError("operator: flagged Hermitian but differs from its adjoint");
  }
}

LinearOperator LinearOperator::identity(int n_qubits) {
  if (n_qubits < 1) throw QuantumError("identity: n_qubits must be positive");
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
  return LinearOperator(CMatrix::Identity(dim, dim), true);
}

bool LinearOperator::is_unitary(double tolerance) const {
  const CMatrix prod = matrix_.adjoint() * matrix_;
  return (prod - CMatrix::Identity(matrix_.rows(), matrix_.cols())).cwiseAbs().maxCoeff() <= tolerance;
}

LinearOperator LinearOperator::adjoint() const { return LinearOperator(matrix_.adjoint(), hermitian_); }

// ---------------------------------------------------------------------------

CMatrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<cplx>().asDiagonal() * eigenvectors.adjoint();
}

SpectralDecomposition spectral_decomposition(const CMatrix& hermitian) {
  if (!is_hermitian(hermitian, 1e-9)) throw QuantumError("spectral decomposition: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian);
  if (solver.info() != Eigen::Success) throw QuantumError("spectral decomposition: eigensolver failed");
  // Eigen returns ascending order.
  return {solver.eigenvalues().reverse(), solver.eigenvectors().rowwise().reverse()};
}

namespace gates {

LinearOperator x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return LinearOperator(m, true);
}

LinearOperator y() {
  CMatrix m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return LinearOperator(m, true);
}

LinearOperator z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return LinearOperator(m, true);
}

LinearOperator hadamard() {
  CMatrix m(2, 2);
  m << 1, 1, 1, -1;
  return LinearOperator(m / std::sqrt(2.0), true);
}

LinearOperator phase(double theta) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = std::polar(1.0, theta);
  return LinearOperator(m);
}

}  // namespace gates

// ---------------------------------------------------------------------------

QuantumState tensor_product(const QuantumState& a, const QuantumState& b) {
  if (a.kind() != b.kind()) throw QuantumError("tensor product: pure and mixed operands");
  const int n = a.n_qubits() + b.n_qubits();
  if (n > qubit_limit()) throw QuantumError("tensor product: qubit limit exceeded");
  const auto db = static_cast<Eigen::Index>(b.dim());
  if (a.is_pure()) {
    const auto& va = a.amplitudes();
    const auto& vb = b.amplitudes();
    CVector out(va.size() * db);
    for (Eigen::Index i = 0; i < va.size(); ++i) out.segment(i * db, db) = va(i) * vb;
    return QuantumState::pure_unchecked(std::move(out), n);
  }
  const auto& ma = a.matrix();
  const auto& mb = b.matrix();
  const Eigen::Index da = ma.rows();
  CMatrix out(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < da; ++j) out.block(i * db, j * db, db, db) = ma(i, j) * mb;
  }
  return QuantumState::mixed_unchecked(std::move(out), n);
}

LinearOperator tensor_product(const LinearOperator& a, const LinearOperator& b) {
  const Eigen::Index da = a.matrix().rows();
  const Eigen::Index db = b.matrix().rows();
  CMatrix out(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < da; ++j) out.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
  }
  return LinearOperator(std::move(out), a.is_hermitian() && b.is_hermitian());
}

QuantumState apply_unitary(const QuantumState& state, const LinearOperator& u, std::span<const int> qubits) {
  const int n = state.n_qubits();
  check_qubits(qubits, n, "apply_unitary");
  if (static_cast<int>(qubits.size()) != u.n_qubits()) {
    throw QuantumError("apply_unitary: operator acts on " + std::to_string(u.n_qubits()) + " qubits, " +
                       std::to_string(qubits.size()) + " addressed");
  }
  if (!u.is_unitary()) throw QuantumError("apply_unitary: operator is not unitary within 1e-10");

  if (state.is_pure()) {
    CVector v = state.amplitudes();
    kernels::apply_gate(flat(v), to_bits(qubits, n), u.matrix());
    return QuantumState::pure_unchecked(std::move(v), n);
  }
  CMatrix rho = state.matrix();
  kernels::apply_gate(flat(rho), to_bits(qubits, n), u.matrix());
  kernels::apply_gate(flat(rho), to_bits(qubits, n, static_cast<std::size_t>(n)), u.matrix().conjugate());
  return QuantumState::mixed_unchecked(std::move(rho), n);
}

QuantumState partial_trace(const QuantumState& state, std::span<const int> keep) {
  if (keep.empty()) throw QuantumError("partial_trace: keep set is empty");
  const int n = state.n_qubits();
  check_qubits(keep, n, "partial_trace");

  std::vector<int> env;
  for (int q = 0; q < n; ++q) {
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) env.push_back(q);
  }
  const auto kept = kernels::spread_offsets(to_bits(keep, n));
  const auto envs = kernels::spread_offsets(to_bits(env, n));
  CMatrix reduced = state.is_pure() ? kernels::partial_trace_pure(flat(state.amplitudes()), kept, envs)
                                    : kernels::partial_trace_mixed(state.matrix(), kept, envs);
  return QuantumState::mixed_unchecked(std::move(reduced), static_cast<int>(keep.size()));
}

double fidelity(const QuantumState& a, const QuantumState& b) {
  if (a.n_qubits() != b.n_qubits()) throw QuantumError("fidelity: dimension mismatch");
  double f = 0.0;
  if (a.is_pure() && b.is_pure()) {
    f = std::norm(a.amplitudes().dot(b.amplitudes()));
  } else if (a.is_pure() || b.is_pure()) {
    const auto& psi = a.is_pure() ? a.amplitudes() : b.amplitudes();
    const auto& rho = a.is_pure() ? b.matrix() : a.matrix();
    f = psi.dot(rho * psi).real();
  } else {
    // Work on the support of a: eigenvalues at or below 1e-12 are numerical
    // zeros whose square roots would otherwise leak ~1e-8 into the trace.
    const auto spec = spectral_decomposition(a.matrix());
    Eigen::Index rank = 0;
    while (rank < spec.eigenvalues.size() && spec.eigenvalues(rank) > 1e-12) ++rank;
    if (rank == 0) return 0.0;
    const CMatrix basis = spec.eigenvectors.leftCols(rank);
    const RVector roots = spec.eigenvalues.head(rank).cwiseSqrt();
    CMatrix inner = roots.cast<cplx>().asDiagonal() * (basis.adjoint() * b.matrix() * basis) *
                    roots.cast<cplx>().asDiagonal();
    inner = 0.5 * (inner + inner.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(inner, Eigen::EigenvaluesOnly);
    double trace_sqrt = 0.0;
    for (double lambda : solver.eigenvalues()) trace_sqrt += std::sqrt(std::max(0.0, lambda));
    f = trace_sqrt * trace_sqrt;
  }
  return std::clamp(f, 0.0, 1.0);
}

double expectation(const QuantumState& state, const LinearOperator& observable) {
  if (observable.n_qubits() != state.n_qubits()) throw QuantumError("expectation: dimension mismatch");
  if (!observable.is_hermitian() && !is_hermitian(observable.matrix(), 1e-10)) {
    throw QuantumError("expectation: observable is not Hermitian");
  }
  if (state.is_pure()) {
    const auto& v = state.amplitudes();
    return v.dot(observable.matrix() * v).real();
  }
  return (observable.matrix() * state.matrix()).trace().real();
}

Measurement sample_eigenvalue(const QuantumState& state, const LinearOperator& observable, Rng& rng) {
  if (observable.n_qubits() != state.n_qubits()) throw QuantumError("sample_eigenvalue: dimension mismatch");
  if (!observable.is_hermitian() && !is_hermitian(observable.matrix(), 1e-10)) {
    throw QuantumError("sample_eigenvalue: observable is not Hermitian");
  }
  const auto spec = spectral_decomposition(observable.matrix());
  const Eigen::Index d = spec.eigenvalues.size();

  // Group degenerate eigenvalues into projectors.
  struct Group {
    double value;
    Eigen::Index begin, end;
  };
  std::vector<Group> groups;
  for (Eigen::Index k = 0; k < d; ++k) {
    if (groups.empty() || std::abs(groups.back().value - spec.eigenvalues(k)) > 1e-9) {
      groups.push_back({spec.eigenvalues(k), k, k + 1});
    } else {
      groups.back().end = k + 1;
    }
  }

  const CMatrix rho = state.density_matrix();
  std::vector<double> probs;
  for (const auto& g : groups) {
    const CMatrix block = spec.eigenvectors.middleCols(g.begin, g.end - g.begin);
    probs.push_back(std::max(0.0, (block.adjoint() * rho * block).trace().real()));
  }
  const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  double u = uniform01(rng) * total;
  std::size_t pick = 0;
  while (pick + 1 < probs.size() && u >= probs[pick]) u -= probs[pick++];
  while (probs[pick] <= 0.0 && pick > 0) --pick;

  const auto& g = groups[pick];
  const CMatrix block = spec.eigenvectors.middleCols(g.begin, g.end - g.begin);
  const CMatrix projector = block * block.adjoint();
  if (state.is_pure()) {
    CVector post = projector * state.amplitudes();
    post /= post.norm();
    return {g.value, QuantumState::pure_unchecked(std::move(post), state.n_qubits())};
  }
  CMatrix post = projector * state.matrix() * projector;
  post /= post.trace().real();
  return {g.value, QuantumState::mixed_unchecked(std::move(post), state.n_qubits())};
}

double operator_inf_norm(const LinearOperator& op) {
  if (!op.is_hermitian() && !is_hermitian(op.matrix(), 1e-10)) {
    throw QuantumError("operator_inf_norm: operator is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(op.matrix(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

std::vector<double> basis_probabilities(const QuantumState& state) {
  std::vector<double> probs(state.dim());
  if (state.is_pure()) {
    const auto& v = state.amplitudes();
    for (std::size_t b = 0; b < probs.size(); ++b) probs[b] = std::norm(v(static_cast<Eigen::Index>(b)));
  } else {
    const auto& rho = state.matrix();
    for (std::size_t b = 0; b < probs.size(); ++b) {
      probs[b] = std::max(0.0, rho(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b)).real());
    }
  }
  return probs;
}

}  // namespace qsnet
