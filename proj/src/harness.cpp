#include "qsnet/harness.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <stdexcept>

#include <omp.h>

#include "qsnet/metrology.hpp"
#include "qsnet/sensing.hpp"

namespace qsnet {

namespace {

BoundRecord bound(const BoundReport& b) { return {b.value, b.clamped, b.applicable}; }

PrivacyCeilingRecord ceiling(const PrivacyGuarantee& g) {
  return {g.qfi_ceiling, g.eps_paper, g.eps_definition, g.probability_floor, g.clamped};
}

IntegrityRecord integrity(const IntegrityBounds& b) {
  IntegrityRecord r;
  r.epsilon = b.epsilon;
  r.d_obs = b.d_obs;
  r.available = b.bias.has_value() && b.variance.has_value();
  if (r.available) {
    r.bias_bound = *b.bias;
    r.variance_bound = *b.variance;
  }
  return r;
}

VerificationRecord verification_record(int rep, std::uint64_t seed, const VerificationOutcome& vo) {
  VerificationRecord v;
  const auto& t = vo.transcript;
  v.repetition = rep;
  v.seed = seed;
  v.accepted = vo.accepted;
  v.f = t.f;
  v.f_j = t.f_j;
  v.threshold = t.threshold;
  v.n_test = t.n_test;
  v.total = t.total;
  v.tested = t.tested;
  v.discarded = t.discarded;
  v.target_copy = t.target_copy;
  v.target_variant = vo.target_variant;
  v.honest_fidelity = vo.honest_fidelity;
  v.constants_valid = vo.constants_valid;
  v.fidelity_bound = bound(vo.fidelity_bound);
  v.soundness = bound(vo.soundness);
  v.symmetrised = vo.symmetrised.has_value();
  if (vo.symmetrised) {
    v.symmetrised_fidelity_floor = bound(vo.symmetrised->fidelity_floor);
    v.symmetrised_probability_floor = bound(vo.symmetrised->probability_floor);
  } else {
    v.symmetrised_fidelity_floor.applicable = false;
    v.symmetrised_probability_floor.applicable = false;
  }
  return v;
}

SensingRecord sensing_record(int rep, std::uint64_t seed, const EstimateReport& e) {
  SensingRecord s;
  s.repetition = rep;
  s.seed = seed;
  s.estimate = e.estimate;
  s.true_value = e.true_value;
  s.mean_parity = e.mean_parity;
  s.phase_sum = e.phase_sum;
  s.standard_error = e.standard_error;
  s.empirical_bias = e.empirical_bias;
  s.estimator_variance = e.estimator_variance;
  s.rounds_used = e.rounds_used;
  s.rounds_discarded = e.rounds_discarded;
  s.truth_in_window = e.truth_in_window;
  s.mean_f = e.mean_f;
  s.mean_honest_fidelity = e.mean_honest_fidelity;
  s.o = e.o;
  s.integrity_apriori = integrity(e.integrity_apriori);
  s.integrity_measured = integrity(e.integrity_measured);
  s.privacy = ceiling(e.privacy);
  s.soundness = e.soundness;
  return s;
}

AuditRecord audit_record(int rep, std::uint64_t seed, const PrivacyAudit& a) {
  AuditRecord r;
  r.repetition = rep;
  r.seed = seed;
  r.found_accepted = a.found_accepted;
  r.attempts_used = a.attempts_used;
  r.f = a.f;
  r.honest_fidelity = a.honest_fidelity;
  r.epsilon = a.measured.epsilon;
  r.epsilon_substitution = a.measured.epsilon_substitution;
  r.worst_node = a.measured.worst_node;
  r.honest_count = a.measured.honest_count;
  for (const auto& nd : a.measured.nodes) r.nodes.push_back({nd.node, nd.qfi_optimal, nd.qfi_substitution});
  r.ceiling = ceiling(a.guarantee);
  r.within_ceiling = a.within_ceiling;
  return r;
}

DerivedRecord derive(const ScenarioConfig& cfg) {
  DerivedRecord d;
  const auto vp = build_verification(cfg);
  const auto resource = Resource::for_function(build_function(cfg));
  d.n_qubits = vp.n;
  d.n_test = vp.n_test();
  d.total_copies = total_copies(vp);
  d.threshold = acceptance_threshold(vp.n, vp.lambda);
  d.soundness = soundness_probability(vp.m, vp.c, vp.n);
  d.theorem1_epsilon = theorem1_epsilon(vp.c, vp.n);
  d.constants_valid = vp.constants_valid();
  d.symmetrised = vp.lambda > 1 || cfg.topology.crs;
  for (const auto& o : resource.assignment.owners()) {
    d.qubit_owner.push_back(o.node);
    d.x_flags.push_back(o.x_conjugated ? 1 : 0);
  }
  for (const auto& g : resource.stabilizers.generators) d.stabilizers.push_back(g.str());
  return d;
}

QuantumState qfi_base_state(const QfiSpec& q) {
  const int n = q.n;
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  if (q.state == "plus") return QuantumState::pure(CVector::Constant(dim, std::pow(2.0, -n / 2.0)));
  if (q.state == "dephased_ghz") {
    CMatrix rho = CMatrix::Zero(dim, dim);
    rho(0, 0) = rho(dim - 1, dim - 1) = 0.5;
    rho(0, dim - 1) = rho(dim - 1, 0) = 0.5 * q.coherence;
    return QuantumState::mixed(rho);
  }
  return ghz_state(n);
}

QfiReport run_qfi(const ScenarioConfig& cfg) {
  const auto& q = cfg.qfi;
  const QuantumState base = qfi_base_state(q);
  const auto family = phase_family(base, q.weights, q.point);
  QfiReport rep;
  rep.state = q.state;
  rep.n = q.n;
  rep.point = q.point;
  rep.purity = base.purity();
  double wsum = 0.0;
  for (double w : q.weights) wsum += w;
  rep.heisenberg_reference = wsum * wsum;
  auto add = [&rep](const QfiResult& r) {
    rep.results.push_back({to_string(r.method), r.value, r.rank, r.tolerance, r.excluded_weight});
  };
  if (base.is_pure()) add(qfi_pure(family));
  const QfiResult spectral = qfi_mixed(family, q.tolerance);
  add(spectral);
  add(qfi_bures_oracle(family, q.step));
  const auto dim = static_cast<Eigen::Index>(base.dim());
  CMatrix g = CMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    double diag = 0.0;
    for (int k = 0; k < q.n; ++k) {
      if (static_cast<std::size_t>(i) >> bit_position(k, q.n) & 1) diag += q.weights[static_cast<std::size_t>(k)];
    }
    g(i, i) = diag;
  }
  add(qfi_generator(family.state_at(q.point), LinearOperator(g, true), q.tolerance));
  rep.cramer_rao_repetitions = cfg.sensing.rounds;
  rep.cramer_rao_available = spectral.value > 0.0;
  if (rep.cramer_rao_available) rep.cramer_rao_bound = cramer_rao_bound(spectral.value, cfg.sensing.rounds);
  return rep;
}

double mean(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_std(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

AggregateRecord aggregate(const RunReport& r, const ScenarioConfig& cfg) {
  AggregateRecord a;
  a.repetitions = cfg.repetitions;
  std::vector<double> f, fid, fb, epsp, epsd;
  int accepted = 0;
  const int honest = static_cast<int>(cfg.topology.honest.size());
  const auto vp = build_verification(cfg);
  auto ceilings = [&](double fv) {
    if (honest < 1) return;
    const auto g = privacy_guarantee(vp.c, vp.n, fv, honest, vp.m);
    epsp.push_back(g.eps_paper);
    epsd.push_back(g.eps_definition);
  };
  for (const auto& v : r.verification) {
    accepted += v.accepted ? 1 : 0;
    f.push_back(v.f);
    fid.push_back(v.honest_fidelity);
    fb.push_back(v.fidelity_bound.value);
    ceilings(v.f);
  }
  if (!r.sensing.empty()) {
    std::vector<double> est, se;
    double used = 0.0, total = 0.0;
    for (const auto& s : r.sensing) {
      est.push_back(s.estimate);
      se.push_back(s.standard_error);
      f.push_back(s.mean_f);
      fid.push_back(s.mean_honest_fidelity);
      fb.push_back(fidelity_bound(vp.c, vp.n, s.mean_f));
      epsp.push_back(s.privacy.eps_paper);
      epsd.push_back(s.privacy.eps_definition);
      used += static_cast<double>(s.rounds_used);
      total += static_cast<double>(s.rounds_used + s.rounds_discarded);
    }
    a.acceptance_rate = total > 0.0 ? used / total : 0.0;
    a.has_estimate = true;
    a.estimate_mean = mean(est);
    a.estimate_std = sample_std(est);
    a.mean_standard_error = mean(se);
  }
  if (!r.audits.empty()) {
    a.has_audit = true;
    std::vector<double> eps;
    for (const auto& au : r.audits) {
      if (!au.found_accepted) continue;
      ++a.audits_found;
      eps.push_back(au.epsilon);
      a.epsilon_max = std::max(a.epsilon_max, au.epsilon);
      a.all_within_ceiling = a.all_within_ceiling && au.within_ceiling;
      f.push_back(au.f);
      fid.push_back(au.honest_fidelity);
      fb.push_back(fidelity_bound(vp.c, vp.n, au.f));
      epsp.push_back(au.ceiling.eps_paper);
      epsd.push_back(au.ceiling.eps_definition);
    }
    a.epsilon_mean = mean(eps);
    a.acceptance_rate = static_cast<double>(a.audits_found) / static_cast<double>(r.audits.size());
  }
  if (!r.verification.empty()) a.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(r.verification.size());
  a.mean_f = mean(f);
  a.std_f = sample_std(f);
  a.mean_honest_fidelity = mean(fid);
  a.mean_fidelity_bound = mean(fb);
  a.mean_eps_paper = mean(epsp);
  a.mean_eps_definition = mean(epsd);
  return a;
}

[[noreturn]] void rethrow_tagged(const std::string& step, int rep, std::exception_ptr e) {
  try {
    std::rethrow_exception(e);
  } catch (const std::exception& ex) {
    const std::string where = rep >= 0 ? " repetition " + std::to_string(rep) + ": " : " ";
    throw std::runtime_error("[" + step + "]" + where + ex.what());
  }
}

/// Runs body(r) for every repetition in parallel; the first failure by index wins.
template <class Body>
void for_repetitions(int reps, const std::string& step, Body&& body) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(reps));
#pragma omp parallel for schedule(dynamic, 1)
  for (int r = 0; r < reps; ++r) {
    try {
      body(r);
    } catch (...) {
      errors[static_cast<std::size_t>(r)] = std::current_exception();
    }
  }
  for (int r = 0; r < reps; ++r) {
    if (errors[static_cast<std::size_t>(r)]) rethrow_tagged(step, r, errors[static_cast<std::size_t>(r)]);
  }
}

template <class F>
auto tagged(const std::string& step, F&& f) {
  try {
    return f();
  } catch (const std::exception&) {
    rethrow_tagged(step, -1, std::current_exception());
  }
}

}  // namespace

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::verify: return "verify";
    case Mode::sense: return "sense";
    case Mode::qfi: return "qfi";
    case Mode::privacy_audit: return "privacy-audit";
  }
  return "?";
}

Mode parse_mode(std::string_view name) {
  if (name == "verify") return Mode::verify;
  if (name == "sense") return Mode::sense;
  if (name == "qfi") return Mode::qfi;
  if (name == "privacy-audit") return Mode::privacy_audit;
  throw std::invalid_argument("unknown mode '" + std::string(name) + "'");
}

RunReport run_scenario(const ScenarioConfig& cfg, Mode mode) {
  const auto start = std::chrono::steady_clock::now();
  if (const auto problems = validate_config(cfg); !problems.empty()) throw ConfigError(problems);

  RunReport report;
  report.mode = to_string(mode);
  report.scenario = cfg;
  report.derived = tagged("setup", [&] { return derive(cfg); });
  const int reps = cfg.repetitions;
  auto rep_seed = [&cfg](int r) { return derive_seed(cfg.seed, Stream::repetition, {static_cast<std::uint64_t>(r)}); };

  switch (mode) {
    case Mode::verify: {
      const auto runner = tagged("setup", [&] {
        return VerificationRunner(build_verification(cfg), build_topology(cfg), build_adversary(cfg),
                                  Resource::for_function(build_function(cfg)));
      });
      const bool keep = cfg.wants("jsonl");
      report.verification.resize(static_cast<std::size_t>(reps));
      for_repetitions(reps, "verification", [&](int r) {
        const auto seed = rep_seed(r);
        auto vo = runner.run(seed, keep && r == 0);
        report.verification[static_cast<std::size_t>(r)] = verification_record(r, seed, vo);
        if (keep && r == 0) {
          report.test_log = std::move(vo.transcript.records);
          report.test_log_target = report.verification[0];
        }
      });
      break;
    }
    case Mode::sense: {
      const auto params = tagged("setup", [&] { return build_sensing(cfg); });
      const auto topo = tagged("setup", [&] { return build_topology(cfg); });
      const auto model = tagged("setup", [&] { return build_adversary(cfg); });
      report.sensing.resize(static_cast<std::size_t>(reps));
      for_repetitions(reps, "sensing", [&](int r) {
        const auto seed = rep_seed(r);
        report.sensing[static_cast<std::size_t>(r)] = sensing_record(r, seed, run_sensing_protocol(params, topo, model, seed));
      });
      break;
    }
    case Mode::privacy_audit: {
      if (cfg.topology.honest.size() < 2) {
        throw std::runtime_error("[privacy-audit] needs at least two honest nodes");
      }
      const auto runner = tagged("setup", [&] {
        return VerificationRunner(build_verification(cfg), build_topology(cfg), build_adversary(cfg),
                                  Resource::for_function(build_function(cfg)));
      });
      report.audits.resize(static_cast<std::size_t>(reps));
      for_repetitions(reps, "privacy-audit", [&](int r) {
        const auto seed = rep_seed(r);
        report.audits[static_cast<std::size_t>(r)] =
            audit_record(r, seed, empirical_privacy_audit(runner, seed, cfg.privacy_audit.attempts));
      });
      break;
    }
    case Mode::qfi:
      report.qfi.push_back(tagged("qfi", [&] { return run_qfi(cfg); }));
      break;
  }

  report.aggregate = aggregate(report, cfg);
  report.timings.total_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.timings.threads = omp_get_max_threads();
  return report;
}

SweepRow summarize(double value, const RunReport& r) {
  SweepRow row;
  const auto& a = r.aggregate;
  row.value = value;
  row.acceptance_rate = a.acceptance_rate;
  row.mean_f = a.mean_f;
  row.fidelity_bound = a.mean_fidelity_bound;
  row.measured_fidelity = a.mean_honest_fidelity;
  row.eps_paper = a.mean_eps_paper;
  row.eps_definition = a.mean_eps_definition;
  row.has_measured_epsilon = a.has_audit && a.audits_found > 0;
  row.measured_epsilon = a.epsilon_mean;
  row.has_estimate = a.has_estimate;
  row.estimate_mean = a.estimate_mean;
  row.estimate_std = a.estimate_std;
  row.mean_standard_error = a.mean_standard_error;
  return row;
}

SweepResult sweep(const ScenarioConfig& cfg, Mode mode, std::string_view axis, const std::vector<double>& values) {
  if (values.empty()) throw ConfigError({"sweep: no values"});
  SweepResult out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    ScenarioConfig point = with_numeric(cfg, axis, values[i]);
    point.seed = derive_seed(cfg.seed, Stream::sweep_point, {static_cast<std::uint64_t>(i)});
    out.reports.push_back(run_scenario(point, mode));
    out.rows.push_back(summarize(values[i], out.reports.back()));
  }
  return out;
}

}  // namespace qsnet
