#pragma once

// Dense multi-qubit states and operators.
//
// Qubit q of an n-qubit register is stored at bit position (n - 1 - q) of the
// basis index, so |q0 q1 ... q_{n-1}> reads left to right and
// tensor_product(a, b) places the qubits of `a` first.

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "qsnet/random.hpp"

namespace qsnet {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr int kDefaultQubitLimit = 12;
inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kUnitaryTolerance = 1e-10;
inline constexpr double kEigenClip = 1e-10;

/// Largest register any QuantumState may hold. Process-wide, defaults to 12.
int qubit_limit();
void set_qubit_limit(int limit);

/// Raised for dimension, kind, index and validity violations.
class QuantumError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline std::size_t bit_position(int qubit, int n_qubits) {
  return static_cast<std::size_t>(n_qubits - 1 - qubit);
}

class QuantumState {
 public:
  enum class Kind { pure, mixed };

  /// Normalised amplitude vector (within 1e-12); length must be 2^n.
  static QuantumState pure(CVector amplitudes);
  /// Hermitian, unit-trace, PSD (eigenvalues >= -1e-10) matrix.
  static QuantumState mixed(CMatrix rho);
  static QuantumState basis(int n_qubits, std::uint64_t index);
  static QuantumState maximally_mixed(int n_qubits);

  // Skip the O(d^3) validation for values produced by trusted kernels.
  static QuantumState pure_unchecked(CVector amplitudes, int n_qubits);
  static QuantumState mixed_unchecked(CMatrix rho, int n_qubits);

  Kind kind() const { return std::holds_alternative<CVector>(data_) ? Kind::pure : Kind::mixed; }
  bool is_pure() const { return kind() == Kind::pure; }
  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return std::size_t{1} << n_qubits_; }

  const CVector& amplitudes() const;
  const CMatrix& matrix() const;
  /// |psi><psi| for pure states, the stored matrix otherwise.
  CMatrix density_matrix() const;
  QuantumState as_mixed() const;

  double purity() const;

 private:
  QuantumState(std::variant<CVector, CMatrix> data, int n_qubits)
      : data_(std::move(data)), n_qubits_(n_qubits) {}

  std::variant<CVector, CMatrix> data_;
  int n_qubits_;
};

class LinearOperator {
 public:
  /// `hermitian` asserts the matrix equals its adjoint within 1e-12; checked.
  explicit LinearOperator(CMatrix matrix, bool hermitian = false);

  static LinearOperator identity(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  const CMatrix& matrix() const { return matrix_; }
  bool is_hermitian() const { return hermitian_; }
  bool is_unitary(double tolerance = kUnitaryTolerance) const;
  LinearOperator adjoint() const;

 private:
  CMatrix matrix_;
  int n_qubits_ = 0;
  bool hermitian_ = false;
};

struct SpectralDecomposition {
  RVector eigenvalues;   // descending
  CMatrix eigenvectors;  // orthonormal columns, column k pairs with eigenvalues[k]

  CMatrix reconstruct() const;
};

SpectralDecomposition spectral_decomposition(const CMatrix& hermitian);

bool is_hermitian(const CMatrix& m, double tolerance = kHermitianTolerance);

namespace gates {
LinearOperator x();
LinearOperator y();
LinearOperator z();
LinearOperator hadamard();
/// diag(1, e^{i theta}).
LinearOperator phase(double theta);
}  // namespace gates

QuantumState tensor_product(const QuantumState& a, const QuantumState& b);
LinearOperator tensor_product(const LinearOperator& a, const LinearOperator& b);

/// Applies `u` to the listed qubits; the first listed qubit is the most
/// significant bit of u's index.
QuantumState apply_unitary(const QuantumState& state, const LinearOperator& u,
                           std::span<const int> qubits);

/// Reduced state on `keep` (output qubit order follows `keep`).
QuantumState partial_trace(const QuantumState& state, std::span<const int> keep);

/// Squared fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2, clamped into [0, 1].
double fidelity(const QuantumState& a, const QuantumState& b);

double expectation(const QuantumState& state, const LinearOperator& observable);

struct Measurement {
  double outcome;
  QuantumState post_state;
};

/// Projective measurement in the eigenbasis of `observable` (degenerate
/// eigenvalues within 1e-9 share a projector).
Measurement sample_eigenvalue(const QuantumState& state, const LinearOperator& observable,
                              Rng& rng);

/// Largest |eigenvalue| of a Hermitian operator.
double operator_inf_norm(const LinearOperator& op);

/// Outcome probabilities in the computational basis.
std::vector<double> basis_probabilities(const QuantumState& state);

}  // namespace qsnet
