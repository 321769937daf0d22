#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "par/geometry.hpp"
#include "par/packets.hpp"
#include "par/pheromone_table.hpp"
#include "par/protocol_config.hpp"
#include "par/trace.hpp"
#include "par/types.hpp"

namespace par {

/// Services the simulator provides to each node's routing state machine.
class RouterHost {
 public:
  virtual ~RouterHost() = default;

  virtual double now() const = 0;
  /// Ideal location oracle.
  virtual Point position_of(NodeId node) const = 0;
  virtual std::vector<NodeId> neighbors_of(NodeId node) const = 0;
  /// Uniform draw in [0, n) from the protocol random stream. n > 0.
  virtual std::size_t pick_index(std::size_t n) = 0;

  virtual void broadcast(NodeId from, const Packet& packet) = 0;
  /// Returns false when `to` is out of range (link break); nothing is sent.
  virtual bool unicast(NodeId from, NodeId to, const Packet& packet) = 0;
  virtual void arm_discovery_timer(NodeId node, NodeId dst, std::uint32_t seq, double at) = 0;

  virtual void record(const TraceRecord& r) = 0;
};

enum class FantDecision : std::uint8_t { Rebroadcast, Drop, GenerateBant };
enum class BantDecision : std::uint8_t { ForwardTowardSource, ActivateRoute, Orphan };
enum class DataDecision : std::uint8_t { Deliver, Forward, Buffer, EmitRouteError, Drop };
enum class RouteErrorAction : std::uint8_t { Forwarded, Rediscover, Pruned, Ignored, Dropped };
enum class DiscoveryOutcome : std::uint8_t { Started, Suppressed, Direct };

std::string_view to_string(FantDecision d);
std::string_view to_string(BantDecision d);
std::string_view to_string(DataDecision d);
std::string_view to_string(RouteErrorAction a);

/// Routing state of one node.
///
/// Handles forward-ant dissemination under the configured policy, backward-ant
/// route installation, data forwarding with pheromone reinforcement, and
/// repair on link breaks and route errors. Every side effect goes through the
/// RouterHost; every handler also returns its decision for inspection.
class Router {
 public:
  Router(NodeId self, const ProtocolConfig& cfg, RouterHost& host);

  NodeId id() const { return self_; }
  const ProtocolConfig& config() const { return cfg_; }
  const PheromoneTable& table() const { return table_; }
  PheromoneTable& table() { return table_; }

  /// Broadcasts a fresh forward ant toward `dst` unless a discovery for it is
  /// already pending. Returns Direct when source and destination coincide.
  DiscoveryOutcome start_discovery(NodeId dst);

  FantDecision on_pfant(const PFant& ant);
  BantDecision on_pbant(const PBant& ant);

  /// A freshly generated packet from a local flow.
  DataDecision originate(DataPacket pkt);
  DataDecision on_data(DataPacket pkt);

  /// The neighbor stopped answering; `in_flight` holds the packets whose
  /// unicast just failed.
  void on_link_break(NodeId dead, std::vector<Packet> in_flight);

  RouteErrorAction on_route_error(const RouteError& err);
  void on_discovery_timeout(NodeId dst, std::uint32_t seq);
  void evaporate();

  bool has_route(NodeId dst) const { return select_next_hop(table_, dst).has_value(); }
  bool discovery_pending(NodeId dst) const { return pending_.contains(dst); }
  std::size_t buffered() const;
  std::size_t buffered(NodeId dst) const;
  std::uint32_t route_epoch(NodeId dst) const;

 private:
  struct Pending {
    std::uint32_t seq{0};
    std::uint32_t retries{0};
  };

  void launch_pfant(NodeId dst, Pending& pending);
  NodeId choose_designated(NodeId exclude);
  void rebroadcast(const PFant& ant);
  void send_pbant(PBant ant);
  void send_route_error(RouteError err);
  bool can_report_to(NodeId src, NodeId dst) const;
  DataDecision forward_data(DataPacket pkt);
  void buffer_data(const DataPacket& pkt);
  void flush_buffer(NodeId dst);
  void drop_data(const DataPacket& pkt, std::string_view reason, bool from_buffer);
  void emit_route_error(const DataPacket& pkt);

  TraceRecord make_record(TraceKind kind) const;
  void trace(TraceRecord r) { host_.record(r); }

  NodeId self_;
  ProtocolConfig cfg_;
  RouterHost& host_;
  PheromoneTable table_;

  std::uint32_t next_seq_{0};
  std::set<std::pair<NodeId, std::uint32_t>> seen_;
  std::set<std::pair<NodeId, std::uint32_t>> transmitted_;
  std::map<NodeId, Pending> pending_;
  std::map<NodeId, std::deque<DataPacket>> buffers_;
  std::map<NodeId, std::uint32_t> epochs_;
  // (src, dst) -> neighbor that last handed us data for that pair.
  std::map<std::pair<NodeId, NodeId>, NodeId> upstream_;
};

}  // namespace par
