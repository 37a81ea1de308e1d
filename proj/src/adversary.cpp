#include "qsnet/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qsnet/kernels.hpp"

namespace qsnet {

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw QuantumError(std::string(what) + ": probability outside [0, 1]");
}

CMatrix pauli_matrix(int which) {
  CMatrix m = CMatrix::Zero(2, 2);
  switch (which) {
    case 0: m(0, 0) = m(1, 1) = 1.0; break;
    case 1: m(0, 1) = m(1, 0) = 1.0; break;
    case 2: m(0, 1) = cplx(0, -1); m(1, 0) = cplx(0, 1); break;
    default: m(0, 0) = 1.0; m(1, 1) = -1.0; break;
  }
  return m;
}

}  // namespace

NetworkTopology NetworkTopology::all_honest(int n_nodes, std::optional<int> verifier) {
  NetworkTopology t;
  t.n_nodes = n_nodes;
  for (int i = 0; i < n_nodes; ++i) t.honest.push_back(i);
  t.verifier = verifier;
  t.validate();
  return t;
}

void NetworkTopology::validate() const {
  if (n_nodes < 1) throw QuantumError("topology: need at least one node");
  if (!std::is_sorted(honest.begin(), honest.end()) ||
      std::adjacent_find(honest.begin(), honest.end()) != honest.end()) {
    throw QuantumError("topology: honest set must be sorted and duplicate-free");
  }
  if (!honest.empty() && (honest.front() < 0 || honest.back() >= n_nodes)) {
    throw QuantumError("topology: honest node out of range");
  }
  if (verifier && (*verifier < 0 || *verifier >= n_nodes)) throw QuantumError("topology: verifier out of range");
}

bool NetworkTopology::is_honest(int node) const { return std::binary_search(honest.begin(), honest.end(), node); }

NodeSet NetworkTopology::dishonest() const {
  NodeSet out;
  for (int i = 0; i < n_nodes; ++i) {
    if (!is_honest(i)) out.push_back(i);
  }
  return out;
}

KrausChannel::KrausChannel(std::vector<CMatrix> operators, std::string label)
    : ops_(std::move(operators)), label_(std::move(label)), parameter_(std::numeric_limits<double>::quiet_NaN()) {
  if (ops_.empty()) throw QuantumError("Kraus channel: empty operator list");
  CMatrix sum = CMatrix::Zero(2, 2);
  for (const auto& k : ops_) {
    if (k.rows() != 2 || k.cols() != 2) throw QuantumError("Kraus channel: operators must be 2x2");
    sum += k.adjoint() * k;
  }
  if ((sum - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() > 1e-10) {
    throw QuantumError("Kraus channel: operators violate completeness");
  }
}

KrausChannel KrausChannel::identity() {
  KrausChannel ch({pauli_matrix(0)}, "identity");
  ch.parameter_ = 0.0;
  return ch;
}

KrausChannel KrausChannel::dephasing(double p) {
  check_probability(p, "dephasing");
  KrausChannel ch({std::sqrt(1.0 - p) * pauli_matrix(0), std::sqrt(p) * pauli_matrix(3)}, "dephasing");
  ch.parameter_ = p;
  return ch;
}

KrausChannel KrausChannel::depolarizing(double p) {
  check_probability(p, "depolarizing");
  const double a = std::sqrt(1.0 - 3.0 * p / 4.0), b = std::sqrt(p / 4.0);
  KrausChannel ch({a * pauli_matrix(0), b * pauli_matrix(1), b * pauli_matrix(2), b * pauli_matrix(3)},
                  "depolarizing");
  ch.parameter_ = p;
  return ch;
}

QuantumState KrausChannel::apply(const QuantumState& state, int qubit) const {
  const int n = state.n_qubits();
  if (qubit < 0 || qubit >= n) throw QuantumError("Kraus channel: qubit out of range");
  const CMatrix rho = state.density_matrix();
  const std::size_t row_bit[] = {bit_position(qubit, n)};
  const std::size_t col_bit[] = {bit_position(qubit, n) + static_cast<std::size_t>(n)};
  CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& k : ops_) {
    CMatrix term = rho;
    std::span<cplx> flat(term.data(), static_cast<std::size_t>(term.size()));
    kernels::apply_gate(flat, row_bit, k);
    kernels::apply_gate(flat, col_bit, k.conjugate());
    out += term;
  }
  return QuantumState::mixed_unchecked(std::move(out), n);
}

SourceAttack SourceAttack::none() { return {}; }

SourceAttack SourceAttack::replace(QuantumState s) {
  SourceAttack a;
  a.kind = Kind::replace;
  a.state = std::move(s);
  return a;
}

SourceAttack SourceAttack::mixture(QuantumState s, double probability) {
  check_probability(probability, "mixture attack");
  SourceAttack a;
  a.kind = Kind::mixture;
  a.state = std::move(s);
  a.probability = probability;
  return a;
}

SourceAttack SourceAttack::on_every_qubit(KrausChannel ch) {
  SourceAttack a;
  a.kind = Kind::channel;
  a.channel = std::move(ch);
  return a;
}

std::string to_string(SourceAttack::Kind kind) {
  switch (kind) {
    case SourceAttack::Kind::none: return "none";
    case SourceAttack::Kind::replace: return "replace";
    case SourceAttack::Kind::mixture: return "mixture";
    case SourceAttack::Kind::channel: return "channel";
  }
  return "unknown";
}

std::string to_string(VerifierConduct conduct) {
  switch (conduct) {
    case VerifierConduct::faithful: return "faithful";
    case VerifierConduct::all_pass: return "all_pass";
    case VerifierConduct::all_fail: return "all_fail";
  }
  return "unknown";
}

void AdversaryModel::validate(const NetworkTopology& topo) const {
  topo.validate();
  if ((source.kind == SourceAttack::Kind::replace || source.kind == SourceAttack::Kind::mixture) && !source.state) {
    throw QuantumError("adversary: source attack needs a state");
  }
  if (source.kind == SourceAttack::Kind::channel && !source.channel) {
    throw QuantumError("adversary: source channel attack needs a channel");
  }
  check_probability(source.probability, "source attack");
  for (const auto& [node, ch] : channels) {
    if (node < 0 || node >= topo.n_nodes) throw QuantumError("adversary: channel on unknown node " + std::to_string(node));
  }
  for (const auto& [node, b] : dishonest) {
    if (node < 0 || node >= topo.n_nodes) throw QuantumError("adversary: behaviour for unknown node " + std::to_string(node));
    if (topo.is_honest(node)) {
      throw QuantumError("adversary: node " + std::to_string(node) + " is honest but has a dishonest behaviour");
    }
    check_probability(b.flip_probability, "flip");
    if (b.local_unitary && (b.local_unitary->n_qubits() != 1 || !b.local_unitary->is_unitary())) {
      throw QuantumError("adversary: local unitary of node " + std::to_string(node) + " must be a 1-qubit unitary");
    }
  }
}

bool AdversaryModel::leaves_copies_ideal() const {
  if (source.kind != SourceAttack::Kind::none || !channels.empty() || hook) return false;
  return std::none_of(dishonest.begin(), dishonest.end(), [](const auto& kv) { return kv.second.local_unitary.has_value(); });
}

const DishonestBehavior* AdversaryModel::behavior_of(int node) const {
  auto it = dishonest.find(node);
  return it == dishonest.end() ? nullptr : &it->second;
}

int draw_copy_variant(const AdversaryModel& model, Rng& rng) {
  if (model.source.kind != SourceAttack::Kind::mixture) return 0;
  return bernoulli(rng, model.source.probability) ? 1 : 0;
}

QuantumState prepare_variant(const AdversaryModel& model, const QubitAssignment& assignment,
                             const QuantumState& ideal, int variant) {
  if (assignment.n_qubits() != ideal.n_qubits()) throw QuantumError("prepare_copy: assignment size mismatch");
  QuantumState s = ideal;
  switch (model.source.kind) {
    case SourceAttack::Kind::none: break;
    case SourceAttack::Kind::replace: s = *model.source.state; break;
    case SourceAttack::Kind::mixture:
      if (variant == 1) s = *model.source.state;
      break;
    case SourceAttack::Kind::channel:
      for (int q = 0; q < s.n_qubits(); ++q) s = model.source.channel->apply(s, q);
      break;
  }
  if (s.n_qubits() != ideal.n_qubits()) throw QuantumError("prepare_copy: attacker state has the wrong qubit count");
  for (const auto& [node, ch] : model.channels) {
    for (int q : assignment.qubits_of(node)) s = ch.apply(s, q);
  }
  for (const auto& [node, b] : model.dishonest) {
    if (!b.local_unitary) continue;
    for (int q : assignment.qubits_of(node)) {
      const int qubit[] = {q};
      s = apply_unitary(s, *b.local_unitary, qubit);
    }
  }
  return s;
}

QuantumState prepare_copy(const AdversaryModel& model, const NetworkTopology& topo, const QubitAssignment& assignment,
                          const QuantumState& ideal, std::uint64_t copy_index, Rng& rng) {
  model.validate(topo);
  const int variant = draw_copy_variant(model, rng);
  QuantumState s = prepare_variant(model, assignment, ideal, variant);
  if (model.hook) s = model.hook(s, copy_index, rng);
  return s;
}

int report_outcome(const AdversaryModel& model, const NetworkTopology& topo, int node, int true_outcome, Rng& rng) {
  if (node < 0 || node >= topo.n_nodes) throw QuantumError("report_outcome: node out of range");
  if (topo.is_honest(node)) return true_outcome;
  const DishonestBehavior* b = model.behavior_of(node);
  if (b == nullptr || b->flip_probability <= 0.0) return true_outcome;
  return bernoulli(rng, b->flip_probability) ? -true_outcome : true_outcome;
}

QuantumState honest_reduced(const QuantumState& state, const NetworkTopology& topo, const QubitAssignment& assignment) {
  if (assignment.n_qubits() != state.n_qubits()) throw QuantumError("honest_reduced: assignment size mismatch");
  const auto keep = assignment.qubits_of(topo.honest);
  if (keep.empty()) throw QuantumError("honest_reduced: no honest qubits");
  if (static_cast<int>(keep.size()) == state.n_qubits()) return state.as_mixed();
  return partial_trace(state, keep);
}

}  // namespace qsnet
