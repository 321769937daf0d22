#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "par/types.hpp"

namespace par {

struct ProtocolConfig {
  Policy policy{Policy::Par};
  double width_ratio{0.5};
  double petal_margin{1.0};      // meters
  double tau_init{1.0};
  double evaporation_rate{0.1};  // fraction removed per tick
  double evaporation_tick{1.0};  // seconds
  double tau_min{0.01};
  double discovery_timeout{2.0};  // seconds
  std::uint32_t max_retries{3};
  double data_reinforcement{0.05};
  std::uint32_t buffer_capacity{64};  // packets per destination at the source
  std::uint32_t max_hops{64};
};

/// Range checks; one message per violated constraint.
std::vector<std::string> validate(const ProtocolConfig& cfg);

std::string_view to_string(Policy p);
std::optional<Policy> parse_policy(std::string_view text);

}  // namespace par
