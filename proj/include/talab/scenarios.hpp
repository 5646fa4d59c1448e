#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "talab/config.hpp"
#include "talab/report.hpp"

namespace talab {

struct ScenarioOutput {
  std::vector<InequalityReport> reports;
  std::vector<Estimate> estimates;
};

using ParamMap = std::map<std::string, std::string>;

struct BuiltinScenario {
  std::string id;
  std::string description;  // names the inequality the suite exercises
  ParamMap defaults;        // also the set of accepted parameter keys
  std::function<ScenarioOutput(const ParamMap&, std::uint64_t)> run;
};

const std::vector<BuiltinScenario>& builtin_scenarios();
const BuiltinScenario* find_scenario(const std::string& id);

void list_scenarios(std::ostream& os);

struct RunOptions {
  std::string out_dir;  // empty: no files written
  std::optional<std::uint64_t> seed;
  int jobs = 1;
};

// Executes the config's scenarios in order (possibly concurrently),
// writes run_report.json / reports.csv / estimates.csv when an output
// directory is set. Exit code 0: all verdicts pass, 1: some inequality
// verdict failed, 2: configuration or model error.
int run_config(const Config& cfg, const RunOptions& options, std::ostream& diagnostics);

std::uint64_t scenario_stream_seed(std::uint64_t global_seed, const std::string& scenario_id);

}  // namespace talab
