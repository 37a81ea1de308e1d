#include "qsnet/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>

#include "qsnet/ghz.hpp"

namespace qsnet {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> cumulative(std::vector<double> probs) {
  std::partial_sum(probs.begin(), probs.end(), probs.begin());
  return probs;
}

std::size_t sample_cdf(const std::vector<double>& cdf, Rng& rng) {
  const double u = uniform01(rng) * cdf.back();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

IntegrityBounds integrity_at(double epsilon, double d_obs, long long nu) {
  IntegrityBounds b;
  b.epsilon = epsilon;
  b.d_obs = d_obs;
  if (d_obs > 0.0) {
    b.bias = integrity_bias_bound(1.0, epsilon, d_obs);
    b.variance = integrity_variance_bound(1.0, epsilon, nu, d_obs);
  }
  return b;
}

}  // namespace

void BranchWindow::validate() const {
  const double k = lo / kPi;
  if (!std::isfinite(lo) || std::abs(k - std::round(k)) > 1e-12 || std::abs(hi - lo - kPi) > 1e-12) {
    throw QuantumError("branch window must be [k pi, (k+1) pi] for an integer k");
  }
}

ParityEstimate parity_estimator(const std::vector<int>& parities, const LinearFunctionSpec& spec,
                                const BranchWindow& window) {
  if (parities.empty()) throw QuantumError("parity_estimator: no parities");
  window.validate();
  long long sum = 0;
  for (int p : parities) {
    if (p != 1 && p != -1) throw QuantumError("parity_estimator: parities must be +1 or -1");
    sum += p;
  }
  ParityEstimate e;
  const double nu = static_cast<double>(parities.size());
  e.mean_parity = std::clamp(static_cast<double>(sum) / nu, -1.0, 1.0);
  const double base = std::acos(e.mean_parity);
  const auto k = static_cast<long long>(std::llround(window.lo / kPi));
  e.phase_sum = window.lo + (k % 2 == 0 ? base : kPi - base);
  e.estimate = spec.scale * e.phase_sum;
  // Var(mean) = (1 - m^2)/nu and |d arccos/dm| = 1/sqrt(1 - m^2).
  e.standard_error = std::abs(spec.scale) / std::sqrt(nu);
  return e;
}

double observable_slope(double phase_sum, double scale) {
  if (scale == 0.0) throw QuantumError("observable_slope: zero scale");
  return std::abs(std::sin(phase_sum)) / std::abs(scale);
}

double integrity_bias_bound(double o, double epsilon, double d_obs) {
  if (!(epsilon >= 0.0)) throw QuantumError("integrity_bias_bound: epsilon must be nonnegative");
  if (d_obs == 0.0) throw QuantumError("integrity_bias_bound: vanishing slope at the operating point");
  return 2.0 * o * epsilon / std::abs(d_obs);
}

double integrity_variance_bound(double o, double epsilon, long long nu, double d_obs) {
  if (!(epsilon >= 0.0)) throw QuantumError("integrity_variance_bound: epsilon must be nonnegative");
  if (nu < 1) throw QuantumError("integrity_variance_bound: nu must be at least 1");
  if (d_obs == 0.0) throw QuantumError("integrity_variance_bound: vanishing slope at the operating point");
  return 4.0 * o * o * (2.0 * epsilon / static_cast<double>(nu) + epsilon * epsilon) / (d_obs * d_obs);
}

double theorem1_epsilon(double c, int n) {
  if (!(c > 0.0)) throw QuantumError("theorem1_epsilon: c must be positive");
  if (n < 2) throw QuantumError("theorem1_epsilon: n must be at least 2");
  return (2.0 * std::sqrt(c) + 1.0) / n;
}

PrivacyGuarantee privacy_guarantee(double c, int n, double f, int honest_count, double m) {
  if (n < 2) throw QuantumError("privacy_guarantee: n must be at least 2");
  if (honest_count < 1) throw QuantumError("privacy_guarantee: no honest nodes");
  PrivacyGuarantee g;
  const double radicand = 2.0 * std::sqrt(c) / n - 2.0 * n * f;
  g.clamped = radicand < 0.0;
  g.qfi_ceiling = 24.0 * std::sqrt(std::max(0.0, radicand));
  g.eps_paper = g.qfi_ceiling / honest_count;
  g.eps_definition = g.qfi_ceiling / (static_cast<double>(honest_count) * honest_count);
  g.probability_floor = soundness_probability(m, c, n);
  return g;
}

EstimateReport run_sensing_protocol(const SensingParams& params, const NetworkTopology& topo,
                                    const AdversaryModel& model, std::uint64_t seed) {
  if (params.rounds < 1) throw QuantumError("sensing: need at least one round");
  params.window.validate();
  params.function.validate();
  if (static_cast<int>(params.function.weights.size()) != topo.n_nodes) {
    throw QuantumError("sensing: function has " + std::to_string(params.function.weights.size()) +
                       " weights for " + std::to_string(topo.n_nodes) + " nodes");
  }
  if (static_cast<int>(params.phases.size()) != topo.n_nodes) {
    throw QuantumError("sensing: phase vector length differs from the node count");
  }
  if (params.verification.n != params.function.total_qubits()) {
    throw QuantumError("sensing: verification n must equal the resource qubit count " +
                       std::to_string(params.function.total_qubits()));
  }

  const VerificationRunner runner(params.verification, topo, model, Resource::for_function(params.function));
  const auto& assignment = runner.resource().assignment;
  const int n = runner.resource().state.n_qubits();

  // Dishonest nodes may leave their phase out.
  std::vector<double> applied(params.phases.values().begin(), params.phases.values().end());
  for (const auto& [node, b] : model.dishonest) {
    if (b.skip_encoding) applied[static_cast<std::size_t>(node)] = 0.0;
  }
  const PhaseVector applied_phases(applied);
  const PauliString all_x(1, std::vector<Pauli>(static_cast<std::size_t>(n), Pauli::X));
  auto x_distribution = [&](const QuantumState& target) {
    return cumulative(local_outcome_distribution(encode_network(target, applied_phases, assignment), all_x));
  };
  std::vector<std::vector<double>> cached;
  for (int v = 0; v < runner.variant_count(); ++v) cached.push_back(x_distribution(runner.variant_state(v)));

  const auto rounds = static_cast<std::size_t>(params.rounds);
  std::vector<RoundRecord> records(rounds);
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic, 16)
  for (long long r = 0; r < params.rounds; ++r) {
    try {
      const std::uint64_t round_seed = derive_seed(seed, Stream::round, {static_cast<std::uint64_t>(r)});
      const VerificationOutcome vo = runner.run(round_seed);
      RoundRecord& rec = records[static_cast<std::size_t>(r)];
      rec.round = r;
      rec.accepted = vo.accepted;
      rec.f = vo.transcript.f;
      rec.honest_fidelity = vo.honest_fidelity;
      if (!vo.accepted) continue;
      Rng meas = make_rng(derive_seed(round_seed, Stream::sensing_measurement));
      Rng lie = make_rng(derive_seed(round_seed, Stream::parity_lie, {model.coordination_seed}));
      const std::size_t outcome =
          vo.target_variant >= 0 ? sample_cdf(cached[static_cast<std::size_t>(vo.target_variant)], meas)
                                 : sample_cdf(x_distribution(vo.target_state), meas);
      rec.parities.assign(static_cast<std::size_t>(topo.n_nodes), 1);
      for (int q = 0; q < n; ++q) {
        if (outcome >> bit_position(q, n) & 1) rec.parities[static_cast<std::size_t>(assignment.owner(q).node)] *= -1;
      }
      rec.parity = 1;
      for (int node = 0; node < topo.n_nodes; ++node) {
        auto& p = rec.parities[static_cast<std::size_t>(node)];
        p = report_outcome(model, topo, node, p, lie);
        rec.parity *= p;
      }
    } catch (...) {
#pragma omp critical(qsnet_sensing_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  EstimateReport rep;
  std::vector<int> parities;
  double f_sum = 0.0, fid_sum = 0.0;
  for (const auto& rec : records) {
    if (!rec.accepted) continue;
    parities.push_back(rec.parity);
    f_sum += rec.f;
    fid_sum += rec.honest_fidelity;
  }
  rep.rounds_used = static_cast<long long>(parities.size());
  rep.rounds_discarded = params.rounds - rep.rounds_used;
  if (parities.empty()) throw QuantumError("sensing: verification rejected every round, no estimate");

  const auto est = parity_estimator(parities, params.function, params.window);
  rep.estimate = est.estimate;
  rep.mean_parity = est.mean_parity;
  rep.phase_sum = est.phase_sum;
  rep.standard_error = est.standard_error;
  rep.estimator_variance = est.standard_error * est.standard_error;
  rep.true_value = function_value(params.function, params.phases);
  rep.empirical_bias = rep.estimate - rep.true_value;
  const double true_phase_sum = params.function.scale != 0.0 ? rep.true_value / params.function.scale : 0.0;
  rep.truth_in_window = params.window.contains(true_phase_sum);
  const double used = static_cast<double>(rep.rounds_used);
  rep.mean_f = f_sum / used;
  rep.mean_honest_fidelity = fid_sum / used;

  const auto& vp = params.verification;
  rep.integrity_apriori = integrity_at(theorem1_epsilon(vp.c, n), observable_slope(est.phase_sum, params.function.scale),
                                       rep.rounds_used);
  rep.integrity_measured = integrity_at(std::max(0.0, 1.0 - rep.mean_honest_fidelity),
                                        observable_slope(true_phase_sum, params.function.scale), rep.rounds_used);
  rep.privacy = privacy_guarantee(vp.c, n, rep.mean_f, std::max<int>(1, static_cast<int>(topo.honest.size())), vp.m);
  rep.soundness = soundness_probability(vp.m, vp.c, n);
  if (params.keep_round_records) rep.rounds = std::move(records);
  return rep;
}

PrivacyAudit empirical_privacy_audit(const VerificationRunner& runner, std::uint64_t seed, int attempts) {
  if (attempts < 1) throw QuantumError("privacy audit: attempts must be at least 1");
  PrivacyAudit audit;
  const auto& topo = runner.topology();
  const auto& vp = runner.params();
  for (int a = 0; a < attempts; ++a) {
    const auto vo = runner.run(derive_seed(seed, Stream::round, {static_cast<std::uint64_t>(a)}));
    audit.attempts_used = a + 1;
    if (!vo.accepted) continue;
    audit.found_accepted = true;
    audit.f = vo.transcript.f;
    audit.honest_fidelity = vo.honest_fidelity;
    audit.measured = privacy_epsilon(vo.target_state, runner.resource().assignment, topo.honest);
    audit.guarantee = privacy_guarantee(vp.c, vp.n, vo.transcript.f, static_cast<int>(topo.honest.size()), vp.m);
    audit.within_ceiling = audit.measured.epsilon <= audit.guarantee.eps_definition + 1e-9;
    break;
  }
  return audit;
}

PrivacyAudit empirical_privacy_audit(const VerificationParams& params, const NetworkTopology& topo,
                                     const AdversaryModel& model, const Resource& resource, std::uint64_t seed,
                                     int attempts) {
  return empirical_privacy_audit(VerificationRunner(params, topo, model, resource), seed, attempts);
}

}  // namespace qsnet
