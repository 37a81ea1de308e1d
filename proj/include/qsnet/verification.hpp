#pragma once

// Stabilizer-test verification of the shared resource state.
//
// The plain protocol has a fixed honest Verifier; the symmetrised variant draws a
// Verifier per test set from a common random source and tests lambda times
// as many copies.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qsnet/adversary.hpp"
#include "qsnet/encoding.hpp"
#include "qsnet/ghz.hpp"
#include "qsnet/qcore.hpp"

namespace qsnet {

struct VerificationParams {
  double m = 1.0;
  double c = 2.0;
  int n = 4;
  int lambda = 1;
  std::optional<long long> n_test_override;
  /// Run even when 3/(2m) < c < (n-1)^2/4 fails; bounds are then marked
  /// non-applicable.
  bool allow_invalid_constants = false;

  /// Human-readable list of violated constraints; empty when valid.
  std::vector<std::string> constraint_violations() const;
  /// Only the m, c window.
  bool constants_valid() const;
  long long n_test() const;
};

/// ceil(m n^4 ln n).
long long required_tests(double m, int n);
/// 2 n N_test for lambda = 1, (lambda + 1) lambda n N_test otherwise.
long long total_copies(const VerificationParams& params);
double acceptance_threshold(int n, int lambda);
/// max(0, 1 - 2 sqrt(c)/n - 2 n f).
double fidelity_bound(double c, int n, double f);
/// max(0, 1 - n^{1 - 2mc/3}).
double soundness_probability(double m, double c, int n);

struct BoundReport {
  double value = 0.0;
  /// The raw formula fell outside [0, 1] and was clamped.
  bool clamped = false;
  /// False when the protocol constants were overridden.
  bool applicable = true;
};

struct SymmetrisedBounds {
  BoundReport fidelity_floor;
  BoundReport probability_floor;
};

SymmetrisedBounds symmetrised_fidelity_bound(double c, int n, double f, int lambda, int honest_count, double m);

struct TestRecord {
  std::uint64_t copy = 0;
  int generator = 0;
  int set = 0;
  int verifier = -1;
  /// Announced +-1 per node (product over the node's qubits).
  std::vector<int> reported;
  bool passed = true;
};

struct VerificationTranscript {
  /// Failures of generator j summed over its sets, each divided by N_test.
  std::vector<double> f_j;
  /// failures / N_test per (generator, set), generator-major.
  std::vector<double> set_rates;
  /// Verifier node per (generator, set).
  std::vector<int> set_verifiers;
  double f = 0.0;
  long long n_test = 0;
  long long total = 0;
  long long tested = 0;
  long long discarded = 0;
  std::uint64_t target_copy = 0;
  double threshold = 0.0;
  bool accepted = false;
  std::vector<TestRecord> records;
};

struct VerificationOutcome {
  bool accepted = false;
  QuantumState target_state = QuantumState::basis(1, 0);
  /// Copy variant of the target; -1 when an attack hook produced it.
  int target_variant = 0;
  /// Ground truth against the ideal honest reduction; never seen by the nodes.
  double honest_fidelity = 0.0;
  bool constants_valid = true;
  BoundReport fidelity_bound;
  BoundReport soundness;
  std::optional<SymmetrisedBounds> symmetrised;
  VerificationTranscript transcript;
};

/// State under test, who holds which qubit, and the stabilizers checked.
struct Resource {
  QuantumState state;
  QubitAssignment assignment;
  StabilizerSet stabilizers;

  /// GHZ_n, one qubit per node.
  static Resource ghz(int n_nodes);
  /// Function-specific GHZ; stabilizers conjugated by X on flagged qubits.
  static Resource for_function(const LinearFunctionSpec& spec);
};

/// Reusable simulator: prepares the copy variants and their outcome
/// distributions once, then runs independent protocol instances by seed.
class VerificationRunner {
 public:
  VerificationRunner(VerificationParams params, NetworkTopology topo, AdversaryModel model, Resource resource);

  /// The plain protocol when lambda == 1 and the topology names a Verifier (who
  /// must be honest); otherwise the symmetrised protocol.
  VerificationOutcome run(std::uint64_t seed, bool keep_records = false) const;

  const VerificationParams& params() const { return params_; }
  const NetworkTopology& topology() const { return topo_; }
  const AdversaryModel& model() const { return model_; }
  const Resource& resource() const { return resource_; }
  /// Ideal honest reduction used for ground-truth fidelities.
  const QuantumState& ideal_honest() const { return ideal_honest_; }

  /// Prepared copy of `variant`, hook excluded.
  const QuantumState& variant_state(int variant) const;
  int variant_count() const { return static_cast<int>(variants_.size()); }
  bool symmetrised() const { return symmetrised_; }

 private:
  struct Variant {
    QuantumState state;
    std::vector<std::vector<double>> cdf;  // per generator
    double honest_fidelity;
  };

  Variant make_variant(QuantumState s) const;

  VerificationParams params_;
  NetworkTopology topo_;
  AdversaryModel model_;
  Resource resource_;
  QuantumState ideal_honest_;
  std::vector<Variant> variants_;
  std::vector<int> owner_of_qubit_;
  bool symmetrised_ = false;
};

/// The plain (fixed-Verifier) protocol. Throws if lambda != 1, if the Verifier is missing or
/// dishonest, or if the constants are invalid without override.
VerificationOutcome run_verification(const VerificationParams& params, const NetworkTopology& topo,
                                     const AdversaryModel& model, const Resource& resource, std::uint64_t seed,
                                     bool keep_records = false);

/// Symmetrised protocol with a common random source.
VerificationOutcome run_symmetrised_verification(const VerificationParams& params, const NetworkTopology& topo,
                                                 const AdversaryModel& model, const Resource& resource,
                                                 std::uint64_t seed, bool keep_records = false);

}  // namespace qsnet
