#include "qsnet/ghz.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "qsnet/kernels.hpp"

namespace qsnet {

PauliString::PauliString(int sign, std::vector<Pauli> letters) : sign_(sign), letters_(std::move(letters)) {
  if (sign_ != 1 && sign_ != -1) throw QuantumError("Pauli string: sign must be +1 or -1");
  if (letters_.empty()) throw QuantumError("Pauli string: no letters");
  if (letters_.size() > 63) throw QuantumError("Pauli string: too many qubits");
}

PauliString PauliString::parse(std::string_view text) {
  int sign = 1;
  if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
    sign = text.front() == '-' ? -1 : 1;
    text.remove_prefix(1);
  }
  std::vector<Pauli> letters;
  for (char c : text) {
    switch (c) {
      case 'I': letters.push_back(Pauli::I); break;
      case 'X': letters.push_back(Pauli::X); break;
      case 'Y': letters.push_back(Pauli::Y); break;
      case 'Z': letters.push_back(Pauli::Z); break;
      default: throw QuantumError(std::string("Pauli string: unexpected character '") + c + "'");
    }
  }
  return PauliString(sign, std::move(letters));
}

std::string PauliString::str() const {
  std::string out(1, sign_ < 0 ? '-' : '+');
  for (Pauli p : letters_) out.push_back("IXYZ"[static_cast<int>(p)]);
  return out;
}

std::uint64_t PauliString::x_mask() const {
  std::uint64_t mask = 0;
  const int n = n_qubits();
  for (int q = 0; q < n; ++q) {
    const Pauli p = letters_[static_cast<std::size_t>(q)];
    if (p == Pauli::X || p == Pauli::Y) mask |= std::uint64_t{1} << bit_position(q, n);
  }
  return mask;
}

std::uint64_t PauliString::z_mask() const {
  std::uint64_t mask = 0;
  const int n = n_qubits();
  for (int q = 0; q < n; ++q) {
    const Pauli p = letters_[static_cast<std::size_t>(q)];
    if (p == Pauli::Z || p == Pauli::Y) mask |= std::uint64_t{1} << bit_position(q, n);
  }
  return mask;
}

cplx PauliString::coefficient() const {
  const auto n_y = std::count(letters_.begin(), letters_.end(), Pauli::Y);
  static const cplx kPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return static_cast<double>(sign_) * kPowers[n_y % 4];
}

bool PauliString::commutes_with(const PauliString& other) const {
  if (other.n_qubits() != n_qubits()) throw QuantumError("Pauli string: length mismatch");
  const std::uint64_t symplectic = (x_mask() & other.z_mask()) ^ (z_mask() & other.x_mask());
  return std::popcount(symplectic) % 2 == 0;
}

PauliString PauliString::conjugated_by_x(const std::vector<bool>& flags) const {
  if (static_cast<int>(flags.size()) != n_qubits()) throw QuantumError("Pauli string: flag length mismatch");
  int sign = sign_;
  for (std::size_t q = 0; q < flags.size(); ++q) {
    if (flags[q] && (letters_[q] == Pauli::Y || letters_[q] == Pauli::Z)) sign = -sign;
  }
  return PauliString(sign, letters_);
}

LinearOperator PauliString::to_operator() const {
  const int n = n_qubits();
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  const std::uint64_t x = x_mask(), z = z_mask();
  const cplx coeff = coefficient();
  CMatrix m = CMatrix::Zero(dim, dim);
  for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(dim); ++b) {
    const double s = (std::popcount(b & z) & 1) ? -1.0 : 1.0;
    m(static_cast<Eigen::Index>(b ^ x), static_cast<Eigen::Index>(b)) = coeff * s;
  }
  return LinearOperator(std::move(m), true);
}

QuantumState ghz_state(int n) {
  if (n < 1) throw QuantumError("ghz_state: n must be at least 1");
  if (n > qubit_limit()) throw QuantumError("ghz_state: qubit limit exceeded");
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  CVector v = CVector::Zero(dim);
  v(0) = v(dim - 1) = 1.0 / std::sqrt(2.0);
  return QuantumState::pure_unchecked(std::move(v), n);
}

StabilizerSet stabilizer_generators(int n) {
  if (n < 2) throw QuantumError("stabilizer_generators: n must be at least 2");
  StabilizerSet set{n, {}};
  auto row = [n](int first, int second) {
    std::vector<Pauli> letters(static_cast<std::size_t>(n), Pauli::X);
    letters[static_cast<std::size_t>(first)] = Pauli::Y;
    letters[static_cast<std::size_t>(second)] = Pauli::Y;
    return PauliString(-1, std::move(letters));
  };
  if (n == 2) {
    set.generators.push_back(row(0, 1));
  } else {
    for (int j = 0; j + 2 < n; ++j) set.generators.push_back(row(j, j + 1));
    set.generators.push_back(row(0, n - 1));
  }
  set.generators.emplace_back(1, std::vector<Pauli>(static_cast<std::size_t>(n), Pauli::X));
  return set;
}

double pauli_expectation(const QuantumState& state, const PauliString& pauli) {
  if (pauli.n_qubits() != state.n_qubits()) throw QuantumError("pauli_expectation: dimension mismatch");
  const cplx raw = state.is_pure()
                       ? kernels::pauli_expectation_pure(
                             {state.amplitudes().data(), static_cast<std::size_t>(state.amplitudes().size())},
                             pauli.x_mask(), pauli.z_mask())
                       : kernels::pauli_expectation_mixed(state.matrix(), pauli.x_mask(), pauli.z_mask());
  return (pauli.coefficient() * raw).real();
}

double failure_probability(const QuantumState& state, const PauliString& pauli) {
  return std::clamp((1.0 - pauli_expectation(state, pauli)) / 2.0, 0.0, 1.0);
}

TestVerdict run_single_test(QuantumState&& copy, const PauliString& pauli, Rng& rng) {
  const QuantumState consumed = std::move(copy);
  return bernoulli(rng, failure_probability(consumed, pauli)) ? TestVerdict::fail : TestVerdict::pass;
}

std::vector<double> local_outcome_distribution(const QuantumState& state, const PauliString& pauli) {
  const int n = state.n_qubits();
  if (pauli.n_qubits() != n) throw QuantumError("local_outcome_distribution: dimension mismatch");

  // Rotate each measured qubit so its letter becomes Z: H for X, H S^dagger for Y.
  CMatrix to_y(2, 2);
  to_y << 1, cplx(0, -1), 1, cplx(0, 1);
  to_y /= std::sqrt(2.0);
  const LinearOperator rot_x = gates::hadamard();
  const LinearOperator rot_y(to_y);

  QuantumState rotated = state;
  std::uint64_t unmeasured = 0;
  for (int q = 0; q < n; ++q) {
    const int qubit[] = {q};
    switch (pauli.letters()[static_cast<std::size_t>(q)]) {
      case Pauli::X: rotated = apply_unitary(rotated, rot_x, qubit); break;
      case Pauli::Y: rotated = apply_unitary(rotated, rot_y, qubit); break;
      case Pauli::Z: break;
      case Pauli::I: unmeasured |= std::uint64_t{1} << bit_position(q, n); break;
    }
  }
  auto probs = basis_probabilities(rotated);
  if (unmeasured != 0) {
    for (std::size_t b = 0; b < probs.size(); ++b) {
      if (b & unmeasured) {
        probs[b & ~unmeasured] += probs[b];
        probs[b] = 0.0;
      }
    }
  }
  return probs;
}

}  // namespace qsnet
