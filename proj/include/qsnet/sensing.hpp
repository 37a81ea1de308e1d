#pragma once

// Verified distributed sensing: every round verifies a fresh resource, the
// nodes encode their phases on the accepted target, measure X and announce
// parities. The mean parity estimates cos(sum_i k_i theta_i).

#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include "qsnet/adversary.hpp"
#include "qsnet/encoding.hpp"
#include "qsnet/metrology.hpp"
#include "qsnet/verification.hpp"

namespace qsnet {

/// Interval on which the phase sum is assumed to lie. Must be [k pi, (k+1) pi]
/// for an integer k, where cos is monotone.
struct BranchWindow {
  double lo = 0.0;
  double hi = std::numbers::pi;

  void validate() const;
  bool contains(double phase_sum) const { return phase_sum >= lo && phase_sum <= hi; }
};

struct SensingParams {
  long long rounds = 1000;
  VerificationParams verification;
  LinearFunctionSpec function;
  PhaseVector phases;
  BranchWindow window;
  bool keep_round_records = false;
};

struct RoundRecord {
  long long round = 0;
  bool accepted = false;
  double f = 0.0;
  double honest_fidelity = 0.0;
  /// Announced parity per node; empty for rejected rounds.
  std::vector<int> parities;
  /// Product of the announced parities (0 for rejected rounds).
  int parity = 0;
};

struct ParityEstimate {
  double mean_parity = 0.0;
  /// Phase sum sum_i k_i theta_i inverted on the branch window.
  double phase_sum = 0.0;
  /// scale * phase_sum.
  double estimate = 0.0;
  /// Delta-method standard error of `estimate`.
  double standard_error = 0.0;
};

/// Inverts the mean parity through arccos on `window`.
ParityEstimate parity_estimator(const std::vector<int>& parities, const LinearFunctionSpec& spec,
                                const BranchWindow& window = {});

/// |d<O>/df| = |sin(phase_sum)| / |scale| for O = X^{(x) n}.
double observable_slope(double phase_sum, double scale);

/// 2 o eps / |d|.
double integrity_bias_bound(double o, double epsilon, double d_obs);
/// 4 o^2 (2 eps / nu + eps^2) / d^2.
double integrity_variance_bound(double o, double epsilon, long long nu, double d_obs);
/// (2 sqrt(c) + 1) / n.
double theorem1_epsilon(double c, int n);

struct PrivacyGuarantee {
  /// 24 sqrt(max(0, 2 sqrt(c)/n - 2 n f)).
  double qfi_ceiling = 0.0;
  /// qfi_ceiling / n_honest.
  double eps_paper = 0.0;
  /// qfi_ceiling / n_honest^2, consistent with QFI <= eps n^2.
  double eps_definition = 0.0;
  double probability_floor = 0.0;
  /// The radicand was negative and clamped to zero.
  bool clamped = false;
};

PrivacyGuarantee privacy_guarantee(double c, int n, double f, int honest_count, double m);

struct IntegrityBounds {
  double epsilon = 0.0;
  double d_obs = 0.0;
  /// Absent when d_obs vanishes.
  std::optional<double> bias;
  std::optional<double> variance;
};

struct EstimateReport {
  double estimate = 0.0;
  double true_value = 0.0;
  double mean_parity = 0.0;
  double phase_sum = 0.0;
  double standard_error = 0.0;
  /// estimate - true_value.
  double empirical_bias = 0.0;
  /// standard_error^2.
  double estimator_variance = 0.0;
  long long rounds_used = 0;
  long long rounds_discarded = 0;
  bool truth_in_window = true;
  double mean_f = 0.0;
  double mean_honest_fidelity = 0.0;
  double o = 1.0;
  /// A-priori eps from the protocol constants, slope at the estimate.
  IntegrityBounds integrity_apriori;
  /// eps = mean (1 - F) of accepted targets, slope at the true phases.
  IntegrityBounds integrity_measured;
  PrivacyGuarantee privacy;
  double soundness = 0.0;
  std::vector<RoundRecord> rounds;
};

/// Throws if rounds < 1, if lengths disagree with the topology, or if no
/// round passes verification.
EstimateReport run_sensing_protocol(const SensingParams& params, const NetworkTopology& topo,
                                    const AdversaryModel& model, std::uint64_t seed);

struct PrivacyAudit {
  bool found_accepted = false;
  int attempts_used = 0;
  double f = 0.0;
  double honest_fidelity = 0.0;
  PrivacyReport measured;
  PrivacyGuarantee guarantee;
  /// measured.epsilon <= guarantee.eps_definition (within 1e-9).
  bool within_ceiling = false;
};

/// Runs verification until a round is accepted (at most `attempts` times)
/// and measures the privacy of that target's honest reduction.
PrivacyAudit empirical_privacy_audit(const VerificationParams& params, const NetworkTopology& topo,
                                     const AdversaryModel& model, const Resource& resource, std::uint64_t seed,
                                     int attempts = 1);

/// Same, reusing a prepared runner.
PrivacyAudit empirical_privacy_audit(const VerificationRunner& runner, std::uint64_t seed, int attempts = 1);

}  // namespace qsnet
