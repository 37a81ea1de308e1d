// qsnet: run verification, sensing, QFI and privacy-audit scenarios.
//
//   qsnet verify --config scenario.yaml [--seed S] [--repetitions R]
//   qsnet sweep --config scenario.yaml --mode verify --axis adversary.source.channel.p --values 0,0.1,0.2
//
// Exit status is 0 whenever the run completes, accepted or not.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "qsnet/harness.hpp"
#include "qsnet/report.hpp"
#include "qsnet/scenario.hpp"

namespace {

struct Common {
  std::string config;
  std::uint64_t seed = 0;
  int repetitions = 0;
  std::string output_dir;
  std::string name;
  std::vector<std::string> formats;
  bool quiet = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("-c,--config", c.config, "scenario file (YAML)")->required()->check(CLI::ExistingFile);
  sub->add_option("-s,--seed", c.seed, "override the master seed");
  sub->add_option("-r,--repetitions", c.repetitions, "override the repetition count")->check(CLI::PositiveNumber);
  sub->add_option("-o,--output-dir", c.output_dir, "override output.directory");
  sub->add_option("-n,--name", c.name, "override output.name");
  sub->add_option("-f,--format", c.formats, "json, csv or jsonl; repeatable")
      ->check(CLI::IsMember({"json", "csv", "jsonl"}));
  sub->add_flag("-q,--quiet", c.quiet, "no summary on stdout");
}

qsnet::ScenarioConfig load(const Common& c, const CLI::App* sub) {
  auto cfg = qsnet::load_config(c.config);
  if (sub->count("--seed") > 0) cfg.seed = c.seed;
  if (c.repetitions > 0) cfg.repetitions = c.repetitions;
  if (!c.output_dir.empty()) cfg.output.directory = c.output_dir;
  if (!c.name.empty()) cfg.output.name = c.name;
  if (!c.formats.empty()) cfg.output.formats = c.formats;
  if (const auto problems = qsnet::validate_config(cfg); !problems.empty()) throw qsnet::ConfigError(problems);
  return cfg;
}

void print_summary(const qsnet::RunReport& r) {
  const auto& a = r.aggregate;
  const auto& d = r.derived;
  fmt::print("mode {}  n {}  N_test {}  N_total {}  threshold {:.6g}\n", r.mode, d.n_qubits, d.n_test,
             d.total_copies, d.threshold);
  if (r.mode == "qfi") {
    for (const auto& q : r.qfi) {
      for (const auto& res : q.results) fmt::print("  {:<18} {:.10g}  rank {}\n", res.method, res.value, res.rank);
      fmt::print("  reference (sum w)^2 {:.10g}\n", q.heisenberg_reference);
    }
    return;
  }
  fmt::print("repetitions {}  acceptance {:.4f}  mean f {:.6g} (sd {:.3g})  honest fidelity {:.6f}\n", a.repetitions,
             a.acceptance_rate, a.mean_f, a.std_f, a.mean_honest_fidelity);
  fmt::print("fidelity bound {:.6g}  eps ceiling {:.6g} (per-honest {:.6g})\n", a.mean_fidelity_bound,
             a.mean_eps_definition, a.mean_eps_paper);
  if (a.has_estimate) {
    fmt::print("estimate {:.8g} +- {:.3g}  (spread {:.3g})\n", a.estimate_mean, a.mean_standard_error, a.estimate_std);
  }
  if (a.has_audit) {
    fmt::print("audits {}  eps mean {:.6g}  max {:.6g}  within ceiling {}\n", a.audits_found, a.epsilon_mean,
               a.epsilon_max, a.all_within_ceiling ? "yes" : "no");
  }
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto tok = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tok.size()) throw CLI::ValidationError("--values", "not a number: '" + tok + "'");
    out.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum sensing network simulator"};
  app.require_subcommand(1);

  Common common;
  std::vector<std::pair<CLI::App*, qsnet::Mode>> runs;
  for (auto [name, mode, help] : {std::tuple{"verify", qsnet::Mode::verify, "stabilizer verification only"},
                                  std::tuple{"sense", qsnet::Mode::sense, "verified sensing end to end"},
                                  std::tuple{"qfi", qsnet::Mode::qfi, "quantum Fisher information of a state family"},
                                  std::tuple{"privacy-audit", qsnet::Mode::privacy_audit,
                                             "privacy of accepted targets"}}) {
    auto* sub = app.add_subcommand(name, help);
    add_common(sub, common);
    runs.emplace_back(sub, mode);
  }
  auto* sw = app.add_subcommand("sweep", "repeat a run over values of one numeric field");
  add_common(sw, common);
  std::string sweep_mode = "verify", axis, values_text;
  sw->add_option("-m,--mode", sweep_mode, "verify, sense, qfi or privacy-audit")
      ->check(CLI::IsMember({"verify", "sense", "qfi", "privacy-audit"}));
  sw->add_option("-a,--axis", axis, "dotted field path, e.g. verification.c")->required();
  sw->add_option("-v,--values", values_text, "comma-separated values")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sw->parsed()) {
      const auto cfg = load(common, sw);
      const auto values = parse_values(values_text);
      const auto result = qsnet::sweep(cfg, qsnet::parse_mode(sweep_mode), axis, values);
      const auto paths = qsnet::emit_sweep(axis, result.rows, result.reports, cfg.output);
      if (!common.quiet) {
        std::fputs(qsnet::sweep_csv(axis, result.rows).c_str(), stdout);
        for (const auto& p : paths) fmt::print("wrote {}\n", p);
      }
      return 0;
    }
    for (const auto& [sub, mode] : runs) {
      if (!sub->parsed()) continue;
      const auto cfg = load(common, sub);
      if (cfg.wants("jsonl") && mode != qsnet::Mode::verify) {
        fmt::print(stderr, "note: the per-test log is only written by verify\n");
      }
      const auto report = qsnet::run_scenario(cfg, mode);
      const auto paths = qsnet::emit_report(report);
      if (!common.quiet) {
        print_summary(report);
        for (const auto& p : paths) fmt::print("wrote {}\n", p);
      }
    }
  } catch (const qsnet::ConfigError& e) {
    fmt::print(stderr, "configuration error:\n");
    for (const auto& p : e.problems()) fmt::print(stderr, "  {}\n", p);
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
