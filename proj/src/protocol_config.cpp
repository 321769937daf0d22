#include "par/protocol_config.hpp"

#include <cmath>

namespace par {

std::vector<std::string> validate(const ProtocolConfig& cfg) {
  std::vector<std::string> out;
  if (!(cfg.width_ratio > 0.0 && cfg.width_ratio <= 1.0))
    out.emplace_back("width_ratio must be in (0, 1]");
  if (!(cfg.petal_margin >= 0.0) || !std::isfinite(cfg.petal_margin))
    out.emplace_back("petal_margin must be >= 0");
  if (!(cfg.tau_init > 0.0)) out.emplace_back("tau_init must be > 0");
  if (!(cfg.evaporation_rate > 0.0 && cfg.evaporation_rate < 1.0))
    out.emplace_back("evaporation_rate must be in (0, 1)");
  if (!(cfg.evaporation_tick > 0.0)) out.emplace_back("evaporation_tick must be > 0");
  if (!(cfg.tau_min > 0.0)) out.emplace_back("tau_min must be > 0");
  if (!(cfg.tau_min < cfg.tau_init)) out.emplace_back("tau_min must be < tau_init");
  if (!(cfg.discovery_timeout > 0.0)) out.emplace_back("discovery_timeout must be > 0");
  if (!(cfg.data_reinforcement >= 0.0)) out.emplace_back("data_reinforcement must be >= 0");
  if (cfg.buffer_capacity == 0) out.emplace_back("buffer_capacity must be >= 1");
  if (cfg.max_hops == 0) out.emplace_back("max_hops must be >= 1");
  return out;
}

std::string_view to_string(Policy p) {
  switch (p) {
    case Policy::Par: return "par";
    case Policy::Cnb: return "cnb";
    case Policy::Flood: return "flood";
  }
  return "?";
}

std::optional<Policy> parse_policy(std::string_view text) {
  if (text == "par") return Policy::Par;
  if (text == "cnb") return Policy::Cnb;
  if (text == "flood") return Policy::Flood;
  return std::nullopt;
}

}  // namespace par
