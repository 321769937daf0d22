#pragma once

#include <cstdint>
#include <optional>
#include <variant>

#include "par/geometry.hpp"
#include "par/types.hpp"

namespace par {

// On-air sizes of the control packets, in bytes.
inline constexpr std::uint32_t kPFantBytes = 64;
inline constexpr std::uint32_t kPBantBytes = 32;
inline constexpr std::uint32_t kRouteErrorBytes = 24;

/// Forward ant. Carries the full petal so receivers can test membership.
struct PFant {
  std::uint32_t seq{0};
  NodeId src;
  Point src_pos;
  NodeId dst;
  Point dst_pos;
  PetalRegion petal;
  std::uint32_t hop_count{0};
  NodeId prev_hop;
  // Controlled-neighbor-broadcast only: the neighbor asked to rebroadcast.
  NodeId designated;
};

/// Backward ant, unicast from the discovery target back to its originator.
struct PBant {
  std::uint32_t seq{0};
  NodeId src;  // discovery originator
  NodeId dst;  // discovery target, generator of this ant
  std::uint32_t hops_from_dst{0};
  NodeId prev_hop;
};

struct RouteError {
  NodeId unreachable_dst;
  NodeId reporter;
  NodeId origin_src;
  NodeId prev_hop;
  // Route epoch of the data packet that failed; lets the source discard
  // errors about routes it has already replaced.
  std::uint32_t route_seq{0};
  std::uint32_t hops{0};
};

struct DataPacket {
  std::uint32_t flow{0};
  std::uint32_t seq{0};
  NodeId src;
  NodeId dst;
  double created_at{0.0};
  std::uint32_t size{0};
  std::uint32_t route_seq{0};
  std::uint32_t hops{0};
  NodeId prev_hop;  // last transmitter; keeps the reverse trail warm
};

using Packet = std::variant<PFant, PBant, RouteError, DataPacket>;

inline std::uint32_t wire_size(const Packet& p) {
  struct Visitor {
    std::uint32_t operator()(const PFant&) const { return kPFantBytes; }
    std::uint32_t operator()(const PBant&) const { return kPBantBytes; }
    std::uint32_t operator()(const RouteError&) const { return kRouteErrorBytes; }
    std::uint32_t operator()(const DataPacket& d) const { return d.size; }
  };
  return std::visit(Visitor{}, p);
}

inline bool is_control(const Packet& p) { return !std::holds_alternative<DataPacket>(p); }

}  // namespace par
