#include "qsnet/verification.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qsnet {

namespace {

BoundReport clamp_bound(double raw, bool applicable) {
  BoundReport b;
  b.value = std::clamp(raw, 0.0, 1.0);
  b.clamped = raw < 0.0 || raw > 1.0;
  b.applicable = applicable;
  return b;
}

std::vector<double> cumulative(const std::vector<double>& probs) {
  std::vector<double> cdf(probs.size());
  std::partial_sum(probs.begin(), probs.end(), cdf.begin());
  return cdf;
}

std::size_t sample_cdf(const std::vector<double>& cdf, Rng& rng) {
  const double u = uniform01(rng) * cdf.back();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

}  // namespace

std::vector<std::string> VerificationParams::constraint_violations() const {
  std::vector<std::string> out;
  if (!(m > 0.0) || !std::isfinite(m)) out.push_back("m must be a positive number");
  if (!(c > 0.0) || !std::isfinite(c)) out.push_back("c must be a positive number");
  if (n < 2) out.push_back("n must be at least 2");
  if (lambda < 1) out.push_back("lambda must be at least 1");
  if (n_test_override && *n_test_override < 1) out.push_back("n_test override must be at least 1");
  if (out.empty() && !constants_valid()) {
    out.push_back("constants violate 3/(2m) < c < (n-1)^2/4: need " + std::to_string(1.5 / m) + " < c < " +
                  std::to_string((n - 1) * (n - 1) / 4.0) + ", got c = " + std::to_string(c));
  }
  return out;
}

bool VerificationParams::constants_valid() const {
  return m > 0.0 && n >= 2 && 1.5 / m < c && c < (n - 1) * (n - 1) / 4.0;
}

long long VerificationParams::n_test() const {
  return n_test_override ? *n_test_override : required_tests(m, n);
}

long long required_tests(double m, int n) {
  if (n < 2) throw QuantumError("required_tests: n must be at least 2");
  if (!(m > 0.0)) throw QuantumError("required_tests: m must be positive");
  const double nd = n;
  return static_cast<long long>(std::ceil(m * nd * nd * nd * nd * std::log(nd)));
}

long long total_copies(const VerificationParams& params) {
  const long long nt = params.n_test();
  const long long lam = params.lambda;
  if (lam < 1) throw QuantumError("total_copies: lambda must be at least 1");
  return lam == 1 ? 2LL * params.n * nt : (lam + 1) * lam * params.n * nt;
}

double acceptance_threshold(int n, int lambda) {
  if (n < 2) throw QuantumError("acceptance_threshold: n must be at least 2");
  if (lambda < 1) throw QuantumError("acceptance_threshold: lambda must be at least 1");
  return 1.0 / (2.0 * lambda * n * n);
}

double fidelity_bound(double c, int n, double f) {
  return std::max(0.0, 1.0 - 2.0 * std::sqrt(c) / n - 2.0 * n * f);
}

double soundness_probability(double m, double c, int n) {
  return std::max(0.0, 1.0 - std::pow(static_cast<double>(n), 1.0 - 2.0 * m * c / 3.0));
}

SymmetrisedBounds symmetrised_fidelity_bound(double c, int n, double f, int lambda, int honest_count, double m) {
  if (lambda < 1) throw QuantumError("symmetrised_fidelity_bound: lambda must be at least 1");
  if (n < 1 || honest_count < 0 || honest_count > n) {
    throw QuantumError("symmetrised_fidelity_bound: honest count outside [0, n]");
  }
  const double lam = lambda, nd = n;
  const double fid = 1.0 - (1.0 / lam - 1.0 / (lam * lam)) - (1.0 + 1.0 / lam) * (std::sqrt(c) / nd + lam * nd * f);
  const double h = honest_count / nd;
  const double q = h * std::pow(nd, -2.0 * c * m / 3.0);
  double tail = 0.0;
  for (int x = 0; x <= lambda; ++x) tail += std::pow(1.0 - h, x) * std::pow(q, lambda - x);
  return {clamp_bound(fid, true), clamp_bound(1.0 - tail, true)};
}

Resource Resource::ghz(int n_nodes) {
  return {ghz_state(n_nodes), QubitAssignment::one_per_node(n_nodes), stabilizer_generators(n_nodes)};
}

Resource Resource::for_function(const LinearFunctionSpec& spec) {
  auto rs = resource_state_for_function(spec);
  const int n = rs.state.n_qubits();
  StabilizerSet set = stabilizer_generators(n);
  const auto flags = rs.assignment.x_flags();
  for (auto& g : set.generators) g = g.conjugated_by_x(flags);
  return {std::move(rs.state), std::move(rs.assignment), std::move(set)};
}

VerificationRunner::VerificationRunner(VerificationParams params, NetworkTopology topo, AdversaryModel model,
                                       Resource resource)
    : params_(std::move(params)),
      topo_(std::move(topo)),
      model_(std::move(model)),
      resource_(std::move(resource)),
      ideal_honest_(QuantumState::basis(1, 0)) {
  const auto violations = params_.constraint_violations();
  for (const auto& v : violations) {
    if (v.rfind("constants violate", 0) != 0 || !params_.allow_invalid_constants) {
      throw QuantumError("verification: " + v);
    }
  }
  model_.validate(topo_);
  const int nq = resource_.state.n_qubits();
  if (params_.n != nq) {
    throw QuantumError("verification: n = " + std::to_string(params_.n) + " but the resource has " +
                       std::to_string(nq) + " qubits");
  }
  if (resource_.assignment.n_nodes() != topo_.n_nodes) {
    throw QuantumError("verification: assignment and topology disagree on the node count");
  }
  if (resource_.stabilizers.n != nq) throw QuantumError("verification: stabilizer set size mismatch");
  symmetrised_ = params_.lambda > 1 || !topo_.verifier;
  if (!symmetrised_ && !topo_.is_honest(*topo_.verifier)) {
    throw QuantumError("verification: the fixed-Verifier protocol requires an honest Verifier; use the symmetrised protocol");
  }
  for (int q = 0; q < nq; ++q) owner_of_qubit_.push_back(resource_.assignment.owner(q).node);

  const auto honest_qubits = resource_.assignment.qubits_of(topo_.honest);
  if (!honest_qubits.empty()) ideal_honest_ = honest_reduced(resource_.state, topo_, resource_.assignment);

  variants_.push_back(make_variant(prepare_variant(model_, resource_.assignment, resource_.state, 0)));
  if (model_.source.kind == SourceAttack::Kind::mixture) {
    variants_.push_back(make_variant(prepare_variant(model_, resource_.assignment, resource_.state, 1)));
  }
}

VerificationRunner::Variant VerificationRunner::make_variant(QuantumState s) const {
  Variant v{std::move(s), {}, 0.0};
  for (const auto& g : resource_.stabilizers.generators) v.cdf.push_back(cumulative(local_outcome_distribution(v.state, g)));
  v.honest_fidelity = resource_.assignment.qubits_of(topo_.honest).empty()
                          ? 0.0
                          : fidelity(honest_reduced(v.state, topo_, resource_.assignment), ideal_honest_);
  return v;
}

const QuantumState& VerificationRunner::variant_state(int variant) const {
  if (variant < 0 || variant >= variant_count()) throw QuantumError("verification: no such copy variant");
  return variants_[static_cast<std::size_t>(variant)].state;
}

VerificationOutcome VerificationRunner::run(std::uint64_t seed, bool keep_records) const {
  const int n = params_.n;
  const int lambda = params_.lambda;
  const long long nt = params_.n_test();
  const long long total = total_copies(params_);
  const long long tested = static_cast<long long>(lambda) * n * nt;
  const auto n_gen = resource_.stabilizers.generators.size();

  Rng choice = make_rng(derive_seed(seed, Stream::verifier_choice));
  Rng variant_rng = make_rng(derive_seed(seed, Stream::copy_variant));
  Rng hook_rng = make_rng(derive_seed(seed, Stream::copy_variant, {1}));
  Rng outcome_rng = make_rng(derive_seed(seed, Stream::test_outcome));
  Rng lie_rng = make_rng(derive_seed(seed, Stream::report_lie, {model_.coordination_seed}));
  Rng crs_rng = make_rng(derive_seed(seed, Stream::crs));

  // Roles: positions [0, tested) of the shuffled order are tested in
  // generator-major, set-major order; position `tested` is the target.
  std::vector<std::uint64_t> order(static_cast<std::size_t>(total));
  std::iota(order.begin(), order.end(), std::uint64_t{0});
  for (long long i = 0; i <= tested; ++i) {
    const auto j = i + static_cast<long long>(uniform_index(choice, static_cast<std::uint64_t>(total - i)));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }

  VerificationOutcome out;
  auto& tr = out.transcript;
  tr.n_test = nt;
  tr.total = total;
  tr.tested = tested;
  tr.discarded = total - tested - 1;
  tr.threshold = acceptance_threshold(n, lambda);
  tr.f_j.assign(n_gen, 0.0);

  const bool hooked = static_cast<bool>(model_.hook);
  std::vector<int> reported(static_cast<std::size_t>(topo_.n_nodes));
  long long position = 0;
  for (std::size_t j = 0; j < n_gen; ++j) {
    const PauliString& gen = resource_.stabilizers.generators[j];
    for (int s = 0; s < lambda; ++s) {
      const int verifier =
          symmetrised_ ? static_cast<int>(uniform_index(crs_rng, static_cast<std::uint64_t>(topo_.n_nodes)))
                       : *topo_.verifier;
      const DishonestBehavior* vb = topo_.is_honest(verifier) ? nullptr : model_.behavior_of(verifier);
      const VerifierConduct conduct = vb ? vb->as_verifier : VerifierConduct::faithful;
      long long failures = 0;
      for (long long t = 0; t < nt; ++t, ++position) {
        const std::uint64_t copy = order[static_cast<std::size_t>(position)];
        const int variant = draw_copy_variant(model_, variant_rng);
        std::size_t outcome;
        if (hooked) {
          const QuantumState delivered = model_.hook(variants_[static_cast<std::size_t>(variant)].state, copy, hook_rng);
          outcome = sample_cdf(cumulative(local_outcome_distribution(delivered, gen)), outcome_rng);
        } else {
          outcome = sample_cdf(variants_[static_cast<std::size_t>(variant)].cdf[j], outcome_rng);
        }
        std::fill(reported.begin(), reported.end(), 1);
        for (int q = 0; q < n; ++q) {
          if (outcome >> bit_position(q, n) & 1) reported[static_cast<std::size_t>(owner_of_qubit_[q])] *= -1;
        }
        int product = gen.sign();
        for (int node = 0; node < topo_.n_nodes; ++node) {
          auto& r = reported[static_cast<std::size_t>(node)];
          r = report_outcome(model_, topo_, node, r, lie_rng);
          product *= r;
        }
        bool passed = product == 1;
        if (conduct == VerifierConduct::all_pass) passed = true;
        if (conduct == VerifierConduct::all_fail) passed = false;
        if (!passed) ++failures;
        if (keep_records) tr.records.push_back({copy, static_cast<int>(j), s, verifier, reported, passed});
      }
      const double rate = static_cast<double>(failures) / static_cast<double>(nt);
      tr.set_rates.push_back(rate);
      tr.set_verifiers.push_back(verifier);
      tr.f_j[j] += rate;
    }
  }
  tr.f = std::accumulate(tr.f_j.begin(), tr.f_j.end(), 0.0) / (static_cast<double>(lambda) * n);
  tr.accepted = tr.f <= tr.threshold;
  tr.target_copy = order[static_cast<std::size_t>(tested)];

  const int target_variant = draw_copy_variant(model_, variant_rng);
  const Variant& tv = variants_[static_cast<std::size_t>(target_variant)];
  out.accepted = tr.accepted;
  if (hooked) {
    out.target_state = model_.hook(tv.state, tr.target_copy, hook_rng);
    out.target_variant = -1;
    out.honest_fidelity = resource_.assignment.qubits_of(topo_.honest).empty()
                              ? 0.0
                              : fidelity(honest_reduced(out.target_state, topo_, resource_.assignment), ideal_honest_);
  } else {
    out.target_state = tv.state;
    out.target_variant = target_variant;
    out.honest_fidelity = tv.honest_fidelity;
  }

  out.constants_valid = params_.constants_valid();
  out.fidelity_bound = clamp_bound(1.0 - 2.0 * std::sqrt(params_.c) / n - 2.0 * n * tr.f, out.constants_valid);
  out.soundness = clamp_bound(1.0 - std::pow(static_cast<double>(n), 1.0 - 2.0 * params_.m * params_.c / 3.0),
                              out.constants_valid);
  if (symmetrised_) {
    const int honest_qubits = static_cast<int>(resource_.assignment.qubits_of(topo_.honest).size());
    auto sb = symmetrised_fidelity_bound(params_.c, n, tr.f, lambda, honest_qubits, params_.m);
    sb.fidelity_floor.applicable = sb.probability_floor.applicable = out.constants_valid;
    out.symmetrised = sb;
  }
  return out;
}

VerificationOutcome run_verification(const VerificationParams& params, const NetworkTopology& topo,
                                     const AdversaryModel& model, const Resource& resource, std::uint64_t seed,
                                     bool keep_records) {
  if (params.lambda != 1) throw QuantumError("run_verification: the fixed-Verifier protocol uses lambda = 1");
  if (!topo.verifier) throw QuantumError("run_verification: the fixed-Verifier protocol needs a Verifier node");
  return VerificationRunner(params, topo, model, resource).run(seed, keep_records);
}

VerificationOutcome run_symmetrised_verification(const VerificationParams& params, const NetworkTopology& topo,
                                                 const AdversaryModel& model, const Resource& resource,
                                                 std::uint64_t seed, bool keep_records) {
  NetworkTopology crs = topo;
  crs.verifier.reset();
  return VerificationRunner(params, std::move(crs), model, resource).run(seed, keep_records);
}

}  // namespace qsnet
