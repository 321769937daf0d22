#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>

namespace par {

/// Node identifier, unique within a scenario.
struct NodeId {
  std::uint32_t value{std::numeric_limits<std::uint32_t>::max()};

  constexpr NodeId() = default;
  constexpr explicit NodeId(std::uint32_t v) : value(v) {}

  constexpr bool valid() const { return value != std::numeric_limits<std::uint32_t>::max(); }
  constexpr std::size_t index() const { return value; }

  friend constexpr auto operator<=>(const NodeId&, const NodeId&) = default;
};

inline constexpr NodeId kNoNode{};

/// Routing policy applied to forward ants.
enum class Policy : std::uint8_t {
  Par,    // petal-constrained rebroadcast
  Cnb,    // one designated neighbor rebroadcasts
  Flood,  // every node rebroadcasts once
};

}  // namespace par

template <>
struct std::hash<par::NodeId> {
  std::size_t operator()(const par::NodeId& n) const noexcept {
    return std::hash<std::uint32_t>{}(n.value);
  }
};
