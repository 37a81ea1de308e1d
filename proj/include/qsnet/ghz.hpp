#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qsnet/qcore.hpp"
#include "qsnet/random.hpp"

namespace qsnet {

enum class Pauli : std::uint8_t { I, X, Y, Z };

/// Signed tensor product of single-qubit Paulis, kept symbolically.
/// Text form: optional '+' or '-' followed by letters, e.g. "-YYXX".
class PauliString {
 public:
  PauliString(int sign, std::vector<Pauli> letters);

  static PauliString parse(std::string_view text);
  std::string str() const;

  int sign() const { return sign_; }
  const std::vector<Pauli>& letters() const { return letters_; }
  int n_qubits() const { return static_cast<int>(letters_.size()); }

  // P|b> = coefficient * (-1)^{|b & z_mask|} |b ^ x_mask>, coefficient = sign * i^{#Y}.
  std::uint64_t x_mask() const;
  std::uint64_t z_mask() const;
  cplx coefficient() const;

  bool commutes_with(const PauliString& other) const;

  /// X^{flags} P X^{flags}: each Y or Z on a flagged qubit flips the sign.
  PauliString conjugated_by_x(const std::vector<bool>& flags) const;

  LinearOperator to_operator() const;

  bool operator==(const PauliString&) const = default;

 private:
  int sign_;
  std::vector<Pauli> letters_;
};

struct StabilizerSet {
  int n;
  std::vector<PauliString> generators;
};

/// (|0...0> + |1...1>)/sqrt(2).
QuantumState ghz_state(int n);

/// K_j = -X..YY..X with the Y pair sliding over qubits (j, j+1) for
/// j = 1..n-2, K_{n-1} = -Y X..X Y, K_n = +X..X. For n = 2: {-YY, +XX}.
StabilizerSet stabilizer_generators(int n);

/// <P> by direct O(2^n) evaluation, no dense operator.
double pauli_expectation(const QuantumState& state, const PauliString& pauli);

/// Probability that measuring `pauli` returns -1: (1 - <P>) / 2.
double failure_probability(const QuantumState& state, const PauliString& pauli);

enum class TestVerdict { pass, fail };

/// Measures one copy against `pauli`; the copy is consumed.
TestVerdict run_single_test(QuantumState&& copy, const PauliString& pauli, Rng& rng);

/// Joint distribution of the local single-qubit outcomes when every qubit is
/// measured in the basis of its letter. Entry b: bit (n-1-q) set means qubit q
/// read -1. Identity positions are not measured and always read +1.
std::vector<double> local_outcome_distribution(const QuantumState& state, const PauliString& pauli);

}  // namespace qsnet
