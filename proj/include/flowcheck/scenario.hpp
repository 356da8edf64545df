#pragma once

#include "flowcheck/casl.hpp"
#include "flowcheck/json_io.hpp"
#include "flowcheck/og.hpp"

#include <optional>
#include <string>
#include <vector>

namespace flowcheck::scenario {

using casl::Verdict;
using io::json;

struct Options {
  casl::Caps caps;
  std::uint64_t seed = 0;
};

struct CheckResult {
  std::string name;
  Verdict verdict = Verdict::Pass;
  std::string detail;
};

struct StepRecord {
  std::size_t index = 0;
  std::string label;
  std::string mode;
  /// Outcome of the step's own checks, before the expectation is applied.
  Verdict outcome = Verdict::Pass;
  /// Outcome measured against the step's "expect" member.
  Verdict verdict = Verdict::Pass;
  bool expectFail = false;
  std::vector<CheckResult> checks;
  std::string detail;
  json witness;
  json info = json::object();
};

struct ScenarioReport {
  std::string algebra;
  Verdict verdict = Verdict::Pass;
  std::vector<StepRecord> steps;
  std::optional<og::OgReport> concurrent;
  AtomUniverse universe;
  std::uint64_t seed = 0;

  json to_json() const;
  /// 0 pass, 1 violation, 3 inconclusive.
  int exit_code() const;
  /// First failing step, if any.
  const StepRecord *first_failure() const;
};

/// Runs a scenario document. Throws InputError on malformed input.
ScenarioReport run_scenario(const json &doc, const Options &opts = {});
ScenarioReport run_scenario_file(const std::string &path,
                                 const Options &opts = {});

/// Human-readable summary, one line per step.
std::string format_report(const ScenarioReport &r);

} // namespace flowcheck::scenario
