#include "qsnet/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

#include "qsnet/kernels.hpp"

namespace qsnet {

NodeSet make_node_set(std::vector<int> nodes) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

PhaseVector::PhaseVector(std::vector<double> thetas) : thetas_(std::move(thetas)) {
  for (double t : thetas_) {
    if (!std::isfinite(t)) throw QuantumError("phase vector: non-finite phase");
  }
}

PhaseVector PhaseVector::operator+(const PhaseVector& other) const {
  if (other.size() != size()) throw QuantumError("phase vector: length mismatch");
  std::vector<double> sum(size());
  for (std::size_t i = 0; i < size(); ++i) sum[i] = thetas_[i] + other.thetas_[i];
  return PhaseVector(std::move(sum));
}

void LinearFunctionSpec::validate() const {
  if (weights.empty()) throw QuantumError("function spec: no weights");
  if (std::all_of(weights.begin(), weights.end(), [](int k) { return k == 0; })) {
    throw QuantumError("function spec: all weights are zero");
  }
  if (!std::isfinite(scale)) throw QuantumError("function spec: non-finite scale");
}

int LinearFunctionSpec::total_qubits() const {
  return std::accumulate(weights.begin(), weights.end(), 0, [](int acc, int k) { return acc + std::abs(k); });
}

LinearFunctionSpec LinearFunctionSpec::average(int n_nodes) {
  if (n_nodes < 1) throw QuantumError("function spec: need at least one node");
  return {1.0 / n_nodes, std::vector<int>(static_cast<std::size_t>(n_nodes), 1)};
}

QubitAssignment::QubitAssignment(std::vector<QubitOwner> owners, int n_nodes)
    : owners_(std::move(owners)), n_nodes_(n_nodes) {
  if (owners_.empty()) throw QuantumError("qubit assignment: no qubits");
  for (const auto& o : owners_) {
    if (o.node < 0 || o.node >= n_nodes_) throw QuantumError("qubit assignment: node index out of range");
  }
}

QubitAssignment QubitAssignment::one_per_node(int n_nodes) {
  std::vector<QubitOwner> owners;
  for (int i = 0; i < n_nodes; ++i) owners.push_back({i, false});
  return QubitAssignment(std::move(owners), n_nodes);
}

QubitAssignment QubitAssignment::for_function(const LinearFunctionSpec& spec) {
  spec.validate();
  std::vector<QubitOwner> owners;
  for (std::size_t i = 0; i < spec.weights.size(); ++i) {
    const int k = spec.weights[i];
    for (int c = 0; c < std::abs(k); ++c) owners.push_back({static_cast<int>(i), k < 0});
  }
  return QubitAssignment(std::move(owners), static_cast<int>(spec.weights.size()));
}

std::vector<int> QubitAssignment::qubits_of(int node) const {
  std::vector<int> qubits;
  for (int q = 0; q < n_qubits(); ++q) {
    if (owners_[static_cast<std::size_t>(q)].node == node) qubits.push_back(q);
  }
  return qubits;
}

std::vector<int> QubitAssignment::qubits_of(const NodeSet& nodes) const {
  std::vector<int> qubits;
  for (int q = 0; q < n_qubits(); ++q) {
    if (std::binary_search(nodes.begin(), nodes.end(), owners_[static_cast<std::size_t>(q)].node)) {
      qubits.push_back(q);
    }
  }
  return qubits;
}

std::vector<bool> QubitAssignment::x_flags() const {
  std::vector<bool> flags;
  for (const auto& o : owners_) flags.push_back(o.x_conjugated);
  return flags;
}

QuantumState encode_network(const QuantumState& state, const PhaseVector& phases,
                            const QubitAssignment& assignment) {
  const int n = state.n_qubits();
  if (assignment.n_qubits() != n) {
    throw QuantumError("encode_network: assignment covers " + std::to_string(assignment.n_qubits()) +
                       " qubits, state has " + std::to_string(n));
  }
  if (static_cast<int>(phases.size()) != assignment.n_nodes()) {
    throw QuantumError("encode_network: phase vector length differs from node count");
  }
  std::vector<double> bit_phases(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) {
    bit_phases[bit_position(q, n)] = phases[static_cast<std::size_t>(assignment.owner(q).node)];
  }
  const auto diag = kernels::phase_diagonal(static_cast<std::size_t>(n), bit_phases);
  if (state.is_pure()) {
    CVector v = state.amplitudes();
    kernels::scale_diagonal({v.data(), static_cast<std::size_t>(v.size())}, diag);
    return QuantumState::pure_unchecked(std::move(v), n);
  }
  CMatrix rho = state.matrix();
  kernels::conjugate_diagonal(rho, diag);
  return QuantumState::mixed_unchecked(std::move(rho), n);
}

PhaseVector privacy_substitution(const PhaseVector& phases, int target, const NodeSet& honest) {
  if (honest.size() < 2) throw QuantumError("privacy_substitution: needs at least two honest nodes");
  if (!std::binary_search(honest.begin(), honest.end(), target)) {
    throw QuantumError("privacy_substitution: target node is not honest");
  }
  if (honest.back() >= static_cast<int>(phases.size()) || honest.front() < 0) {
    throw QuantumError("privacy_substitution: honest node out of range");
  }
  std::vector<double> out(phases.values().begin(), phases.values().end());
  const double hidden = -phases[static_cast<std::size_t>(target)] / static_cast<double>(honest.size() - 1);
  for (int k : honest) {
    if (k != target) out[static_cast<std::size_t>(k)] = hidden;
  }
  return PhaseVector(std::move(out));
}

ResourceState resource_state_for_function(const LinearFunctionSpec& spec) {
  spec.validate();
  const int n = spec.total_qubits();
  if (n > qubit_limit()) {
    throw QuantumError("resource state: " + std::to_string(n) + " qubits exceeds the limit of " +
                       std::to_string(qubit_limit()));
  }
  auto assignment = QubitAssignment::for_function(spec);
  std::uint64_t flipped = 0;
  for (int q = 0; q < n; ++q) {
    if (assignment.owner(q).x_conjugated) flipped |= std::uint64_t{1} << bit_position(q, n);
  }
  const std::uint64_t all = (std::uint64_t{1} << n) - 1;
  CVector v = CVector::Zero(static_cast<Eigen::Index>(all + 1));
  v(static_cast<Eigen::Index>(flipped)) = 1.0 / std::sqrt(2.0);
  v(static_cast<Eigen::Index>(all ^ flipped)) = 1.0 / std::sqrt(2.0);
  return {QuantumState::pure_unchecked(std::move(v), n), std::move(assignment)};
}

double function_value(const LinearFunctionSpec& spec, const PhaseVector& phases) {
  if (phases.size() != spec.weights.size()) throw QuantumError("function_value: length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < phases.size(); ++i) sum += spec.weights[i] * phases[i];
  return spec.scale * sum;
}

}  // namespace qsnet
