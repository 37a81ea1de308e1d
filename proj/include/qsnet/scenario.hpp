#pragma once

// Scenario files.
//
// A scenario is YAML. Every field has a default except `seed` and
// `topology.nodes`; the resolved config, defaults included, is echoed into
// run reports. Unknown keys are errors.
//
//   seed: 42
//   repetitions: 10
//   topology: {nodes: 4, honest: [0, 1, 2], verifier: 0}   # or verifier: crs
//   verification: {m: 1, c: 2, lambda: 1, n_test: 0, allow_invalid_constants: false}
//   adversary:
//     source: {kind: channel, channel: {kind: dephasing, p: 0.1}}
//     channels: [{node: 1, channel: {kind: depolarizing, p: 0.05}}]
//     dishonest: [{node: 3, flip_probability: 0.5, unitary: none,
//                  skip_encoding: false, as_verifier: faithful}]
//     seed: 7
//   function: {scale: 0.25, weights: [1, 1, 1, 1]}
//   phases: [0.2, 0.2, 0.2, 0.2]
//   sensing: {rounds: 1000, branch_window: [0, 3.141592653589793]}
//   qfi: {state: ghz, n: 4, coherence: 1, weights: [], point: 0, step: 1e-4}
//   privacy_audit: {attempts: 50}
//   output: {directory: out, name: run, formats: [json, csv, jsonl]}

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qsnet/adversary.hpp"
#include "qsnet/sensing.hpp"
#include "qsnet/verification.hpp"

namespace qsnet {

/// Parse or validation failure; what() lists every problem, one per line.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

struct ChannelSpec {
  std::string kind = "dephasing";  // dephasing | depolarizing | custom
  double p = 0.0;
  /// custom only: each operator as 8 numbers, row-major (re, im) pairs.
  std::vector<std::vector<double>> operators;
  bool operator==(const ChannelSpec&) const = default;
};

struct SourceSpec {
  std::string kind = "none";     // none | replace | mixture | channel
  std::string state = "zeros";   // zeros | plus | maximally_mixed
  double probability = 1.0;
  ChannelSpec channel;
  bool operator==(const SourceSpec&) const = default;
};

struct LinkChannelSpec {
  int node = 0;
  ChannelSpec channel;
  bool operator==(const LinkChannelSpec&) const = default;
};

struct DishonestSpec {
  int node = 0;
  double flip_probability = 0.0;
  std::string unitary = "none";  // none | x | y | z | h
  bool skip_encoding = false;
  std::string as_verifier = "faithful";  // faithful | all_pass | all_fail
  bool operator==(const DishonestSpec&) const = default;
};

struct TopologySpec {
  int nodes = 0;
  std::vector<int> honest;  // sorted; all nodes when omitted
  int verifier = 0;
  bool crs = false;  // `verifier: crs`
  bool operator==(const TopologySpec&) const = default;
};

struct VerificationSpec {
  double m = 1.0;
  double c = 2.0;
  int lambda = 1;
  long long n_test = 0;  // 0: ceil(m n^4 ln n)
  bool allow_invalid_constants = false;
  bool operator==(const VerificationSpec&) const = default;
};

struct AdversarySpec {
  SourceSpec source;
  std::vector<LinkChannelSpec> channels;
  std::vector<DishonestSpec> dishonest;
  std::uint64_t seed = 0;
  bool operator==(const AdversarySpec&) const = default;
};

struct FunctionSpecConfig {
  double scale = 0.0;        // resolved to 1/nodes when omitted
  std::vector<int> weights;  // resolved to all ones when omitted
  bool operator==(const FunctionSpecConfig&) const = default;
};

struct SensingSpec {
  long long rounds = 1000;
  std::vector<double> branch_window = {0.0, 3.141592653589793};
  bool operator==(const SensingSpec&) const = default;
};

struct QfiSpec {
  std::string state = "ghz";  // ghz | plus | dephased_ghz
  int n = 0;                  // 0: resource qubit count
  double coherence = 1.0;     // dephased_ghz off-diagonal weight
  std::vector<double> weights;  // per-qubit phase weights, all ones when empty
  double point = 0.0;
  double step = 1e-4;
  double tolerance = 1e-10;
  bool operator==(const QfiSpec&) const = default;
};

struct AuditSpec {
  int attempts = 50;
  bool operator==(const AuditSpec&) const = default;
};

struct OutputSpec {
  std::string directory = ".";
  std::string name = "run";
  std::vector<std::string> formats = {"json", "csv"};  // json | csv | jsonl
  bool operator==(const OutputSpec&) const = default;
};

struct ScenarioConfig {
  std::uint64_t seed = 0;
  int repetitions = 1;
  TopologySpec topology;
  VerificationSpec verification;
  AdversarySpec adversary;
  FunctionSpecConfig function;
  std::vector<double> phases;
  SensingSpec sensing;
  QfiSpec qfi;
  AuditSpec privacy_audit;
  OutputSpec output;

  /// sum |k_i|.
  int n_qubits() const;
  bool wants(std::string_view format) const;
  bool operator==(const ScenarioConfig&) const = default;
};

/// Parses and resolves defaults; throws ConfigError with line/column diagnostics.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::string& path);

/// Cross-field checks; every violation is listed. Defaults must be resolved.
std::vector<std::string> validate_config(const ScenarioConfig& cfg);

NetworkTopology build_topology(const ScenarioConfig& cfg);
AdversaryModel build_adversary(const ScenarioConfig& cfg);
VerificationParams build_verification(const ScenarioConfig& cfg);
LinearFunctionSpec build_function(const ScenarioConfig& cfg);
SensingParams build_sensing(const ScenarioConfig& cfg);
KrausChannel build_channel(const ChannelSpec& spec);

/// Replaces the numeric field at dotted `path` (e.g. "adversary.source.channel.p",
/// "phases.2") and revalidates. Throws ConfigError for missing or non-numeric fields.
ScenarioConfig with_numeric(const ScenarioConfig& cfg, std::string_view path, double value);

void to_json(nlohmann::json& j, const ScenarioConfig& c);
void from_json(const nlohmann::json& j, ScenarioConfig& c);

}  // namespace qsnet
