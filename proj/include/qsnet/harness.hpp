#pragma once

// Scenario execution: repetitions, aggregation, sweeps.
//
// Repetition r runs with seed derive_seed(master, repetition, r); sweep point
// i uses master' = derive_seed(master, sweep_point, i). Repetitions run in
// parallel and are collected by index, so reports do not depend on the
// thread count.

#include <string>
#include <string_view>
#include <vector>

#include "qsnet/report.hpp"
#include "qsnet/scenario.hpp"

namespace qsnet {

enum class Mode { verify, sense, qfi, privacy_audit };

std::string to_string(Mode mode);
/// "verify", "sense", "qfi", "privacy-audit".
Mode parse_mode(std::string_view name);

/// Errors from the modules are rethrown as std::runtime_error tagged with the
/// protocol step, e.g. "[sensing] repetition 3: ...".
RunReport run_scenario(const ScenarioConfig& cfg, Mode mode);

struct SweepResult {
  std::vector<RunReport> reports;
  std::vector<SweepRow> rows;
};

/// One run per value of the numeric field `axis` (dotted path).
SweepResult sweep(const ScenarioConfig& cfg, Mode mode, std::string_view axis, const std::vector<double>& values);

SweepRow summarize(double value, const RunReport& report);

}  // namespace qsnet
