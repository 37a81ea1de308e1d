#pragma once

// Run reports.
//
// The structured record (name.json) is schema "qsnet.run-report", version 1:
// sorted keys, shortest round-trip doubles, no NaN or infinity. Anything that
// can be absent carries an explicit flag instead. Wall-clock timings go to
// name.timings.json so the record itself stays byte-stable for a given seed.
//
// Other outputs: name.csv, one row per repetition; name.tests.jsonl, one line
// per stabilizer test of repetition 0 plus a final target line (verify only).

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qsnet/scenario.hpp"
#include "qsnet/verification.hpp"

namespace qsnet {

inline constexpr const char* kReportSchema = "qsnet.run-report";
inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kArtifactVersion = "0.3.0";

struct BoundRecord {
  double value = 0.0;
  bool clamped = false;
  bool applicable = true;
  bool operator==(const BoundRecord&) const = default;
};

struct VerificationRecord {
  int repetition = 0;
  std::uint64_t seed = 0;
  bool accepted = false;
  double f = 0.0;
  std::vector<double> f_j;
  double threshold = 0.0;
  long long n_test = 0;
  long long total = 0;
  long long tested = 0;
  long long discarded = 0;
  std::uint64_t target_copy = 0;
  int target_variant = 0;
  double honest_fidelity = 0.0;
  bool constants_valid = true;
  BoundRecord fidelity_bound;
  BoundRecord soundness;
  bool symmetrised = false;
  /// Marked non-applicable for single-Verifier runs.
  BoundRecord symmetrised_fidelity_floor;
  BoundRecord symmetrised_probability_floor;
  bool operator==(const VerificationRecord&) const = default;
};

struct IntegrityRecord {
  /// False when the slope vanished and no bound exists.
  bool available = false;
  double epsilon = 0.0;
  double d_obs = 0.0;
  double bias_bound = 0.0;
  double variance_bound = 0.0;
  bool operator==(const IntegrityRecord&) const = default;
};

struct PrivacyCeilingRecord {
  double qfi_ceiling = 0.0;
  double eps_paper = 0.0;
  double eps_definition = 0.0;
  double probability_floor = 0.0;
  bool clamped = false;
  bool operator==(const PrivacyCeilingRecord&) const = default;
};

struct SensingRecord {
  int repetition = 0;
  std::uint64_t seed = 0;
  double estimate = 0.0;
  double true_value = 0.0;
  double mean_parity = 0.0;
  double phase_sum = 0.0;
  double standard_error = 0.0;
  double empirical_bias = 0.0;
  double estimator_variance = 0.0;
  long long rounds_used = 0;
  long long rounds_discarded = 0;
  bool truth_in_window = true;
  double mean_f = 0.0;
  double mean_honest_fidelity = 0.0;
  double o = 1.0;
  IntegrityRecord integrity_apriori;
  IntegrityRecord integrity_measured;
  PrivacyCeilingRecord privacy;
  double soundness = 0.0;
  bool operator==(const SensingRecord&) const = default;
};

struct NodePrivacyRecord {
  int node = 0;
  double qfi_optimal = 0.0;
  double qfi_substitution = 0.0;
  bool operator==(const NodePrivacyRecord&) const = default;
};

struct AuditRecord {
  int repetition = 0;
  std::uint64_t seed = 0;
  bool found_accepted = false;
  int attempts_used = 0;
  double f = 0.0;
  double honest_fidelity = 0.0;
  double epsilon = 0.0;
  double epsilon_substitution = 0.0;
  int worst_node = -1;
  int honest_count = 0;
  std::vector<NodePrivacyRecord> nodes;
  PrivacyCeilingRecord ceiling;
  bool within_ceiling = false;
  bool operator==(const AuditRecord&) const = default;
};

struct QfiRecord {
  std::string method;
  double value = 0.0;
  int rank = 0;
  double tolerance = 0.0;
  double excluded_weight = 0.0;
  bool operator==(const QfiRecord&) const = default;
};

struct QfiReport {
  std::string state;
  int n = 0;
  double point = 0.0;
  double purity = 1.0;
  /// (sum of weights)^2.
  double heisenberg_reference = 0.0;
  std::vector<QfiRecord> results;
  /// 1 / (rounds * QFI) from the spectral value; unavailable when the QFI is 0.
  bool cramer_rao_available = false;
  double cramer_rao_bound = 0.0;
  long long cramer_rao_repetitions = 0;
  bool operator==(const QfiReport&) const = default;
};

/// Quantities fixed by the configuration alone.
struct DerivedRecord {
  int n_qubits = 0;
  long long n_test = 0;
  long long total_copies = 0;
  double threshold = 0.0;
  double soundness = 0.0;
  double theorem1_epsilon = 0.0;
  bool constants_valid = true;
  bool symmetrised = false;
  std::vector<int> qubit_owner;
  std::vector<int> x_flags;
  std::vector<std::string> stabilizers;
  bool operator==(const DerivedRecord&) const = default;
};

struct AggregateRecord {
  int repetitions = 0;
  double acceptance_rate = 0.0;
  double mean_f = 0.0;
  double std_f = 0.0;
  double mean_honest_fidelity = 0.0;
  double mean_fidelity_bound = 0.0;
  bool has_estimate = false;
  double estimate_mean = 0.0;
  double estimate_std = 0.0;
  double mean_standard_error = 0.0;
  bool has_audit = false;
  int audits_found = 0;
  double epsilon_mean = 0.0;
  double epsilon_max = 0.0;
  bool all_within_ceiling = true;
  double mean_eps_paper = 0.0;
  double mean_eps_definition = 0.0;
  bool operator==(const AggregateRecord&) const = default;
};

struct Timings {
  double total_seconds = 0.0;
  int threads = 1;
};

struct RunReport {
  std::string schema = kReportSchema;
  int schema_version = kReportSchemaVersion;
  std::string artifact_version = kArtifactVersion;
  std::string mode;
  ScenarioConfig scenario;
  DerivedRecord derived;
  std::vector<VerificationRecord> verification;
  std::vector<SensingRecord> sensing;
  std::vector<AuditRecord> audits;
  std::vector<QfiReport> qfi;  // at most one
  AggregateRecord aggregate;

  // Not part of the structured record.
  std::vector<TestRecord> test_log;
  VerificationRecord test_log_target;
  Timings timings;

  /// Structured-record equality; ignores the excluded fields.
  bool same_record(const RunReport& other) const;
};

struct SweepRow {
  double value = 0.0;
  double acceptance_rate = 0.0;
  double mean_f = 0.0;
  double fidelity_bound = 0.0;
  double measured_fidelity = 0.0;
  double eps_paper = 0.0;
  double eps_definition = 0.0;
  bool has_measured_epsilon = false;
  double measured_epsilon = 0.0;
  bool has_estimate = false;
  double estimate_mean = 0.0;
  double estimate_std = 0.0;
  double mean_standard_error = 0.0;
  bool operator==(const SweepRow&) const = default;
};

nlohmann::json to_record(const RunReport& report);
RunReport from_record(const nlohmann::json& j);

std::string serialize_report(const RunReport& report);
/// Inverse of serialize_report; throws on schema mismatch.
RunReport parse_report(std::string_view text);

std::string report_csv(const RunReport& report);
std::string test_log_jsonl(const RunReport& report);
std::string sweep_csv(std::string_view axis, const std::vector<SweepRow>& rows);

/// Writes the formats requested in report.scenario.output; returns the paths.
std::vector<std::string> emit_report(const RunReport& report);
std::vector<std::string> emit_sweep(std::string_view axis, const std::vector<SweepRow>& rows,
                                    const std::vector<RunReport>& reports, const OutputSpec& output);

/// Shortest decimal that parses back to the same double.
std::string format_double(double x);

}  // namespace qsnet
