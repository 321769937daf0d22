#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "par/geometry.hpp"
#include "par/protocol_config.hpp"
#include "par/types.hpp"

namespace par {

struct FlowSpec {
  NodeId src;
  NodeId dst;
  double start{0.0};  // seconds
  double rate{1.0};   // packets per second
  double stop{std::numeric_limits<double>::infinity()};
};

struct Placement {
  NodeId node;
  Point pos;
};

/// Scripted relocation, used by repair experiments.
struct Teleport {
  double time{0.0};
  NodeId node;
  Point pos;
};

enum class Mobility : std::uint8_t { RandomWaypoint, Static };

/// Experiment configuration. Defaults follow the single-flow mobile setup
/// (1000 x 1000 m, 250 m range, 160 s, 512-byte packets).
struct Scenario {
  std::string name{"scenario"};
  std::uint32_t node_count{50};
  double area_width{1000.0};
  double area_height{1000.0};
  double tx_range{250.0};
  double sim_time{160.0};
  double speed_min{0.0};
  double speed_max{10.0};
  double pause_time{0.0};
  Mobility mobility{Mobility::RandomWaypoint};
  double data_rate{2e6};  // link bitrate, bits/s
  std::uint32_t packet_size{512};
  double initial_energy{100.0};
  double power_tx{31.32e-3};
  double power_rx{35.28e-3};
  double power_idle{712e-6};
  std::uint64_t rng_seed{1};
  std::vector<FlowSpec> flows;
  std::vector<Placement> placements;
  std::vector<NodeId> static_nodes;
  std::vector<Teleport> teleports;
  ProtocolConfig protocol;
};

/// Parse or validation failure; `diagnostics` holds one message per problem.
class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(std::vector<std::string> diagnostics);
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

/// Parses `key = value` lines; `#` starts a comment. Unknown keys and
/// malformed values are errors. Does not range-check.
Scenario parse_scenario(std::string_view text);

/// Applies one setting as if it were a scenario line. Repeatable keys
/// (flow, place, static, teleport) append.
void apply_setting(Scenario& s, std::string_view key, std::string_view value);

/// Applies `key=value` overrides in order. The first override of a
/// repeatable key replaces the list loaded from the file.
void apply_overrides(Scenario& s, std::span<const std::pair<std::string, std::string>> overrides);

bool is_known_key(std::string_view key);

std::vector<std::string> validate(const Scenario& s);

/// Reads, parses and validates; throws ScenarioError with every diagnostic.
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical text form; parse_scenario(to_text(s)) reproduces `s`.
std::string to_text(const Scenario& s);

}  // namespace par
