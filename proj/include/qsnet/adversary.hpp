#pragma once

// Threat models: untrusted source, noisy or hostile channels, dishonest nodes.
//
// A model is plain data. Stochastic parts draw from caller-supplied streams so
// the same coordination seed replays the same attack.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qsnet/encoding.hpp"
#include "qsnet/qcore.hpp"
#include "qsnet/random.hpp"

namespace qsnet {

struct NetworkTopology {
  int n_nodes = 0;
  NodeSet honest;
  /// Node index of the Verifier; nullopt means the common random source.
  std::optional<int> verifier;

  static NetworkTopology all_honest(int n_nodes, std::optional<int> verifier = 0);

  void validate() const;
  bool is_honest(int node) const;
  NodeSet dishonest() const;
};

/// Single-qubit channel as a Kraus list; sum K^dagger K = I within 1e-10.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<CMatrix> operators, std::string label = "custom");

  static KrausChannel identity();
  /// {sqrt(1-p) I, sqrt(p) Z}.
  static KrausChannel dephasing(double p);
  /// {sqrt(1-3p/4) I, sqrt(p/4) X, sqrt(p/4) Y, sqrt(p/4) Z}.
  static KrausChannel depolarizing(double p);

  const std::vector<CMatrix>& operators() const { return ops_; }
  const std::string& label() const { return label_; }
  /// Parameter for the built-in kinds, NaN for custom lists.
  double parameter() const { return parameter_; }

  /// Applies the channel to one qubit; pure input becomes mixed.
  QuantumState apply(const QuantumState& state, int qubit) const;

 private:
  std::vector<CMatrix> ops_;
  std::string label_;
  double parameter_;
};

struct SourceAttack {
  enum class Kind { none, replace, mixture, channel };

  Kind kind = Kind::none;
  /// Attacker's state for replace and mixture.
  std::optional<QuantumState> state;
  /// mixture: each copy independently is `state` with this probability.
  double probability = 1.0;
  /// channel: applied to every qubit of every copy.
  std::optional<KrausChannel> channel;

  static SourceAttack none();
  static SourceAttack replace(QuantumState s);
  static SourceAttack mixture(QuantumState s, double probability);
  static SourceAttack on_every_qubit(KrausChannel ch);
};

std::string to_string(SourceAttack::Kind kind);

/// What a dishonest Verifier does with the reports of the set it oversees.
enum class VerifierConduct { faithful, all_pass, all_fail };

std::string to_string(VerifierConduct conduct);

struct DishonestBehavior {
  /// Probability of flipping each announced outcome or parity.
  double flip_probability = 0.0;
  /// Applied to each of the node's qubits on arrival.
  std::optional<LinearOperator> local_unitary;
  /// Leaves the node's phase out of the sensing round.
  bool skip_encoding = false;
  VerifierConduct as_verifier = VerifierConduct::faithful;
};

/// Extension point for adaptive attacks: sees the prepared copy, returns the
/// copy actually delivered. No built-in strategy uses it.
using AttackHook = std::function<QuantumState(const QuantumState& prepared, std::uint64_t copy_index, Rng& rng)>;

struct AdversaryModel {
  SourceAttack source;
  /// Channel on the link to each node, applied to each qubit the node holds.
  std::map<int, KrausChannel> channels;
  std::map<int, DishonestBehavior> dishonest;
  std::uint64_t coordination_seed = 0;
  AttackHook hook;

  static AdversaryModel none() { return {}; }

  /// Every behaviour must belong to a dishonest node, every index in range.
  void validate(const NetworkTopology& topo) const;

  /// No source attack, channels, local unitaries or hook.
  bool leaves_copies_ideal() const;
  const DishonestBehavior* behavior_of(int node) const;
};

/// Copy variant 0 is the regular copy, 1 the attacker's substitute (mixture only).
int draw_copy_variant(const AdversaryModel& model, Rng& rng);

/// Source attack for `variant`, then channel noise, then dishonest local
/// unitaries. The hook, if any, is not applied here.
QuantumState prepare_variant(const AdversaryModel& model, const QubitAssignment& assignment,
                             const QuantumState& ideal, int variant);

/// Full preparation of one copy including the variant draw and the hook.
QuantumState prepare_copy(const AdversaryModel& model, const NetworkTopology& topo,
                          const QubitAssignment& assignment, const QuantumState& ideal,
                          std::uint64_t copy_index, Rng& rng);

/// Honest nodes report truthfully; dishonest ones flip with their probability.
int report_outcome(const AdversaryModel& model, const NetworkTopology& topo, int node, int true_outcome, Rng& rng);

/// Partial trace onto the qubits of honest nodes (qubit order preserved).
QuantumState honest_reduced(const QuantumState& state, const NetworkTopology& topo,
                            const QubitAssignment& assignment);

}  // namespace qsnet
