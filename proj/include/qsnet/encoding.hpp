#pragma once

#include <span>
#include <vector>

#include "qsnet/qcore.hpp"

namespace qsnet {

/// Sorted, duplicate-free node indices.
using NodeSet = std::vector<int>;

NodeSet make_node_set(std::vector<int> nodes);

/// One finite phase (radians) per node. Not reduced modulo 2 pi.
class PhaseVector {
 public:
  PhaseVector() = default;
  explicit PhaseVector(std::vector<double> thetas);

  std::size_t size() const { return thetas_.size(); }
  double operator[](std::size_t i) const { return thetas_[i]; }
  std::span<const double> values() const { return thetas_; }

  PhaseVector operator+(const PhaseVector& other) const;
  bool operator==(const PhaseVector&) const = default;

 private:
  std::vector<double> thetas_;
};

/// f(theta) = scale * sum_i weights[i] * theta_i with integer weights.
struct LinearFunctionSpec {
  double scale = 1.0;
  std::vector<int> weights;

  void validate() const;
  int total_qubits() const;

  /// scale = 1/n, weights all 1: the average phase.
  static LinearFunctionSpec average(int n_nodes);
};

struct QubitOwner {
  int node;
  bool x_conjugated;
  bool operator==(const QubitOwner&) const = default;
};

/// Which node holds each qubit of the resource state.
class QubitAssignment {
 public:
  QubitAssignment(std::vector<QubitOwner> owners, int n_nodes);

  static QubitAssignment one_per_node(int n_nodes);
  /// Node i receives |k_i| consecutive qubits, X-conjugated when k_i < 0.
  static QubitAssignment for_function(const LinearFunctionSpec& spec);

  int n_qubits() const { return static_cast<int>(owners_.size()); }
  int n_nodes() const { return n_nodes_; }
  const QubitOwner& owner(int qubit) const { return owners_[static_cast<std::size_t>(qubit)]; }
  const std::vector<QubitOwner>& owners() const { return owners_; }
  std::vector<int> qubits_of(int node) const;
  std::vector<int> qubits_of(const NodeSet& nodes) const;
  std::vector<bool> x_flags() const;

  bool operator==(const QubitAssignment&) const = default;

 private:
  std::vector<QubitOwner> owners_;
  int n_nodes_;
};

/// Applies diag(1, e^{i theta_owner}) to every qubit.
QuantumState encode_network(const QuantumState& state, const PhaseVector& phases,
                            const QubitAssignment& assignment);

/// theta_k -> -theta_target / (|honest| - 1) for honest k != target; other
/// entries unchanged.
PhaseVector privacy_substitution(const PhaseVector& phases, int target, const NodeSet& honest);

struct ResourceState {
  QuantumState state;
  QubitAssignment assignment;
};

/// GHZ over sum |k_i| qubits with X on the qubits of negative-weight nodes.
/// Encoding it leaves relative phase e^{i sum k_i theta_i} between branches.
ResourceState resource_state_for_function(const LinearFunctionSpec& spec);

double function_value(const LinearFunctionSpec& spec, const PhaseVector& phases);

}  // namespace qsnet
