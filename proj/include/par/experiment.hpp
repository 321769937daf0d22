#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "par/metrics.hpp"
#include "par/scenario.hpp"
#include "par/types.hpp"

namespace par {

// Replications per point unless told otherwise.
inline constexpr std::uint32_t kDefaultReplications = 15;

struct RunSpec {
  std::filesystem::path scenario;
  std::vector<Policy> protocols;
  std::vector<std::uint64_t> seeds;      // explicit list, or the base seed with `reps`
  std::optional<std::uint32_t> reps;
  std::filesystem::path out_dir{"results"};
  std::vector<std::pair<std::string, std::string>> overrides;
  bool trace{false};
};

struct RunOutcome {
  Policy protocol{Policy::Par};
  std::uint64_t seed{0};
  MetricsReport report;
};

struct ExperimentResult {
  int exit_code{0};
  std::vector<std::string> diagnostics;
  std::vector<RunOutcome> runs;  // sorted by (protocol name, seed)
  std::vector<std::filesystem::path> files;
};

/// Seeds a RunSpec expands to: the explicit list, or `reps` consecutive seeds
/// from the first listed seed (default: the scenario's rng_seed).
std::vector<std::uint64_t> expand_seeds(const RunSpec& spec, std::uint64_t scenario_seed);

/// Scenario file plus overrides, validated. Throws ScenarioError.
Scenario effective_scenario(const RunSpec& spec);

/// Field/type/range check of a scenario file without running it.
std::vector<std::string> validate_scenario_file(const std::filesystem::path& path);

/// Runs every (protocol, seed) pair and writes summary.csv, flows.csv and,
/// when tracing, one trace per run under spec.out_dir.
ExperimentResult run_experiment(const RunSpec& spec, std::ostream& log);

/// Header block shared by every output: effective configuration plus the
/// metric conventions.
std::string output_header(const Scenario& s, const std::vector<Policy>& protocols,
                          const std::vector<std::uint64_t>& seeds);

std::string summary_columns();
std::string summary_row(const std::string& scenario, std::string_view protocol,
                        std::string_view seed, const MetricsReport& r);

}  // namespace par
