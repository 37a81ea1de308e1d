#include "qsnet/report.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace qsnet {

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(BoundRecord, value, clamped, applicable)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(VerificationRecord, repetition, seed, accepted, f, f_j, threshold, n_test, total,
                                   tested, discarded, target_copy, target_variant, honest_fidelity, constants_valid,
                                   fidelity_bound, soundness, symmetrised, symmetrised_fidelity_floor,
                                   symmetrised_probability_floor)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(IntegrityRecord, available, epsilon, d_obs, bias_bound, variance_bound)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(PrivacyCeilingRecord, qfi_ceiling, eps_paper, eps_definition, probability_floor,
                                   clamped)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SensingRecord, repetition, seed, estimate, true_value, mean_parity, phase_sum,
                                   standard_error, empirical_bias, estimator_variance, rounds_used, rounds_discarded,
                                   truth_in_window, mean_f, mean_honest_fidelity, o, integrity_apriori,
                                   integrity_measured, privacy, soundness)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(NodePrivacyRecord, node, qfi_optimal, qfi_substitution)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(AuditRecord, repetition, seed, found_accepted, attempts_used, f, honest_fidelity,
                                   epsilon, epsilon_substitution, worst_node, honest_count, nodes, ceiling,
                                   within_ceiling)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(QfiRecord, method, value, rank, tolerance, excluded_weight)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(QfiReport, state, n, point, purity, heisenberg_reference, results,
                                   cramer_rao_available, cramer_rao_bound, cramer_rao_repetitions)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(DerivedRecord, n_qubits, n_test, total_copies, threshold, soundness,
                                   theorem1_epsilon, constants_valid, symmetrised, qubit_owner, x_flags, stabilizers)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(AggregateRecord, repetitions, acceptance_rate, mean_f, std_f, mean_honest_fidelity,
                                   mean_fidelity_bound, has_estimate, estimate_mean, estimate_std, mean_standard_error,
                                   has_audit, audits_found, epsilon_mean, epsilon_max, all_within_ceiling,
                                   mean_eps_paper, mean_eps_definition)

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out.flush()) throw std::runtime_error("write failed: " + path.string());
}

std::string b(bool x) { return x ? "1" : "0"; }

class CsvRow {
 public:
  CsvRow& operator<<(double x) { return add(format_double(x)); }
  CsvRow& operator<<(bool x) { return add(b(x)); }
  CsvRow& operator<<(int x) { return add(std::to_string(x)); }
  CsvRow& operator<<(long long x) { return add(std::to_string(x)); }
  CsvRow& operator<<(std::uint64_t x) { return add(std::to_string(x)); }
  CsvRow& operator<<(const std::string& x) { return add(x); }
  CsvRow& operator<<(const char* x) { return add(x); }
  std::string line() const { return text_ + "\n"; }

 private:
  CsvRow& add(const std::string& cell) {
    if (!first_) text_ += ',';
    first_ = false;
    text_ += cell;
    return *this;
  }
  std::string text_;
  bool first_ = true;
};

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

bool RunReport::same_record(const RunReport& o) const {
  return schema == o.schema && schema_version == o.schema_version && artifact_version == o.artifact_version &&
         mode == o.mode && scenario == o.scenario && derived == o.derived && verification == o.verification &&
         sensing == o.sensing && audits == o.audits && qfi == o.qfi && aggregate == o.aggregate;
}

nlohmann::json to_record(const RunReport& r) {
  return nlohmann::json{{"schema", r.schema},
                        {"schema_version", r.schema_version},
                        {"artifact_version", r.artifact_version},
                        {"mode", r.mode},
                        {"scenario", r.scenario},
                        {"derived", r.derived},
                        {"verification", r.verification},
                        {"sensing", r.sensing},
                        {"audits", r.audits},
                        {"qfi", r.qfi},
                        {"aggregate", r.aggregate}};
}

RunReport from_record(const nlohmann::json& j) {
  RunReport r;
  j.at("schema").get_to(r.schema);
  if (r.schema != kReportSchema) throw std::runtime_error("not a run report: schema '" + r.schema + "'");
  j.at("schema_version").get_to(r.schema_version);
  if (r.schema_version != kReportSchemaVersion) {
    throw std::runtime_error("unsupported report schema version " + std::to_string(r.schema_version));
  }
  j.at("artifact_version").get_to(r.artifact_version);
  j.at("mode").get_to(r.mode);
  j.at("scenario").get_to(r.scenario);
  j.at("derived").get_to(r.derived);
  j.at("verification").get_to(r.verification);
  j.at("sensing").get_to(r.sensing);
  j.at("audits").get_to(r.audits);
  j.at("qfi").get_to(r.qfi);
  j.at("aggregate").get_to(r.aggregate);
  return r;
}

std::string serialize_report(const RunReport& report) { return to_record(report).dump(2) + "\n"; }

RunReport parse_report(std::string_view text) {
  return from_record(nlohmann::json::parse(text.begin(), text.end()));
}

std::string report_csv(const RunReport& r) {
  std::string out;
  if (r.mode == "verify") {
    out += "repetition,seed,accepted,f,threshold,honest_fidelity,fidelity_bound,fidelity_bound_clamped,"
           "bounds_applicable,soundness,symmetrised,symmetrised_fidelity_floor,symmetrised_probability_floor,"
           "tested,discarded,target_copy\n";
    for (const auto& v : r.verification) {
      CsvRow row;
      row << v.repetition << v.seed << v.accepted << v.f << v.threshold << v.honest_fidelity << v.fidelity_bound.value
          << v.fidelity_bound.clamped << v.fidelity_bound.applicable << v.soundness.value << v.symmetrised
          << v.symmetrised_fidelity_floor.value << v.symmetrised_probability_floor.value << v.tested << v.discarded
          << v.target_copy;
      out += row.line();
    }
  } else if (r.mode == "sense") {
    out += "repetition,seed,estimate,true_value,standard_error,empirical_bias,mean_parity,rounds_used,"
           "rounds_discarded,truth_in_window,mean_f,mean_honest_fidelity,bias_bound_apriori,variance_bound_apriori,"
           "bias_bound_measured,variance_bound_measured,qfi_ceiling,eps_paper,eps_definition,privacy_clamped\n";
    for (const auto& s : r.sensing) {
      CsvRow row;
      row << s.repetition << s.seed << s.estimate << s.true_value << s.standard_error << s.empirical_bias
          << s.mean_parity << s.rounds_used << s.rounds_discarded << s.truth_in_window << s.mean_f
          << s.mean_honest_fidelity;
      for (const auto* ib : {&s.integrity_apriori, &s.integrity_measured}) {
        if (ib->available) {
          row << ib->bias_bound << ib->variance_bound;
        } else {
          row << "" << "";
        }
      }
      row << s.privacy.qfi_ceiling << s.privacy.eps_paper << s.privacy.eps_definition << s.privacy.clamped;
      out += row.line();
    }
  } else if (r.mode == "privacy-audit") {
    out += "repetition,seed,found_accepted,attempts_used,f,honest_fidelity,epsilon,epsilon_substitution,"
           "worst_node,qfi_ceiling,eps_paper,eps_definition,within_ceiling\n";
    for (const auto& a : r.audits) {
      CsvRow row;
      row << a.repetition << a.seed << a.found_accepted << a.attempts_used << a.f << a.honest_fidelity << a.epsilon
          << a.epsilon_substitution << a.worst_node << a.ceiling.qfi_ceiling << a.ceiling.eps_paper
          << a.ceiling.eps_definition << a.within_ceiling;
      out += row.line();
    }
  } else if (r.mode == "qfi") {
    out += "state,n,point,method,value,rank,tolerance,excluded_weight,heisenberg_reference\n";
    for (const auto& q : r.qfi) {
      for (const auto& res : q.results) {
        CsvRow row;
        row << q.state << q.n << q.point << res.method << res.value << res.rank << res.tolerance
            << res.excluded_weight << q.heisenberg_reference;
        out += row.line();
      }
    }
  }
  return out;
}

std::string test_log_jsonl(const RunReport& r) {
  std::string out;
  for (const auto& t : r.test_log) {
    nlohmann::json j{{"kind", "test"},     {"copy", t.copy},         {"generator", t.generator}, {"set", t.set},
                     {"verifier", t.verifier}, {"reported", t.reported}, {"passed", t.passed}};
    out += j.dump() + "\n";
  }
  const auto& v = r.test_log_target;
  nlohmann::json target{{"kind", "target"},       {"copy", v.target_copy}, {"accepted", v.accepted},
                        {"f", v.f},               {"f_j", v.f_j},          {"threshold", v.threshold},
                        {"fidelity_bound", v.fidelity_bound}};
  out += target.dump() + "\n";
  return out;
}

std::string sweep_csv(std::string_view axis, const std::vector<SweepRow>& rows) {
  std::string out = "value,acceptance_rate,mean_f,fidelity_bound,measured_fidelity,eps_paper,eps_definition,"
                    "measured_epsilon,estimate_mean,estimate_std,mean_standard_error\n";
  out = "# axis=" + std::string(axis) + "\n" + out;
  for (const auto& s : rows) {
    CsvRow row;
    row << s.value << s.acceptance_rate << s.mean_f << s.fidelity_bound << s.measured_fidelity << s.eps_paper
        << s.eps_definition;
    if (s.has_measured_epsilon) {
      row << s.measured_epsilon;
    } else {
      row << "";
    }
    if (s.has_estimate) {
      row << s.estimate_mean << s.estimate_std << s.mean_standard_error;
    } else {
      row << "" << "" << "";
    }
    out += row.line();
  }
  return out;
}

namespace {

std::vector<std::string> emit_as(const RunReport& report, const std::filesystem::path& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> written;
  auto put = [&](const std::string& suffix, const std::string& text) {
    const auto p = dir / (name + suffix);
    write_file(p, text);
    written.push_back(p.string());
  };
  if (report.scenario.wants("json")) put(".json", serialize_report(report));
  if (report.scenario.wants("csv")) put(".csv", report_csv(report));
  if (report.scenario.wants("jsonl") && report.mode == "verify") put(".tests.jsonl", test_log_jsonl(report));
  const nlohmann::json t{{"total_seconds", report.timings.total_seconds}, {"threads", report.timings.threads}};
  put(".timings.json", t.dump(2) + "\n");
  return written;
}

}  // namespace

std::vector<std::string> emit_report(const RunReport& report) {
  return emit_as(report, report.scenario.output.directory, report.scenario.output.name);
}

std::vector<std::string> emit_sweep(std::string_view axis, const std::vector<SweepRow>& rows,
                                    const std::vector<RunReport>& reports, const OutputSpec& output) {
  const std::filesystem::path dir(output.directory);
  std::filesystem::create_directories(dir);
  std::vector<std::string> written;
  const auto table = dir / (output.name + ".sweep.csv");
  write_file(table, sweep_csv(axis, rows));
  written.push_back(table.string());
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto more = emit_as(reports[i], dir, output.name + ".point" + std::to_string(i));
    written.insert(written.end(), more.begin(), more.end());
  }
  return written;
}

}  // namespace qsnet
