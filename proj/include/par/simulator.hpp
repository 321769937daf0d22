#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "par/event_queue.hpp"
#include "par/geometry.hpp"
#include "par/metrics.hpp"
#include "par/mobility.hpp"
#include "par/packets.hpp"
#include "par/router.hpp"
#include "par/scenario.hpp"
#include "par/trace.hpp"

namespace par {

// Fixed per-hop propagation delay.
inline constexpr double kPropagationDelay = 1e-6;

/// Serialization time of `bytes` at `bits_per_second`.
inline double airtime(std::uint32_t bytes, double bits_per_second) {
  return static_cast<double>(bytes) * 8.0 / bits_per_second;
}

/// Unit-disk neighborhood: every node other than `origin` within `range`
/// (inclusive) of it.
std::vector<NodeId> neighbors(std::span<const Point> positions, NodeId origin, double range);

struct NodeRuntime {
  NodeId id;
  MotionState motion;
  double tx_seconds{0.0};
  double rx_seconds{0.0};
};

/// Discrete-event run of one scenario.
///
/// Single-threaded. Positions are evaluated lazily from each node's current
/// leg; radio is an ideal unit-disk channel with no contention. Mobility and
/// protocol randomness come from two streams derived from `rng_seed`, so the
/// topology over time is the same for every policy.
class Simulator : private RouterHost {
 public:
  explicit Simulator(Scenario scenario, std::vector<TraceSink*> sinks = {});
  ~Simulator() override;

  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  /// Runs to sim_time; callable once.
  MetricsReport run();

  const Scenario& scenario() const { return scenario_; }
  double now() const override { return now_; }
  Point position(NodeId n) const { return position_of(n); }
  const NodeRuntime& node(NodeId n) const { return nodes_.at(n.index()); }
  const std::vector<NodeRuntime>& nodes() const { return nodes_; }
  const Router& router(NodeId n) const { return *routers_.at(n.index()); }
  double energy_consumed(NodeId n) const;

 private:
  struct Delivery {
    NodeId from;
    NodeId to;
    Packet packet;
  };
  struct MobilityArrival {
    NodeId node;
    std::uint64_t leg;
  };
  struct Evaporation {};
  struct DiscoveryTimer {
    NodeId node;
    NodeId dst;
    std::uint32_t seq;
  };
  struct FlowEmit {
    std::uint32_t flow;
    std::uint32_t index;
  };
  struct TeleportEvent {
    std::size_t index;
  };
  using Payload =
      std::variant<Delivery, MobilityArrival, Evaporation, DiscoveryTimer, FlowEmit, TeleportEvent>;

  // RouterHost
  Point position_of(NodeId node) const override;
  std::vector<NodeId> neighbors_of(NodeId node) const override;
  std::size_t pick_index(std::size_t n) override;
  void broadcast(NodeId from, const Packet& packet) override;
  bool unicast(NodeId from, NodeId to, const Packet& packet) override;
  void arm_discovery_timer(NodeId node, NodeId dst, std::uint32_t seq, double at) override;
  void record(const TraceRecord& r) override;

  void initialize();
  void dispatch(Payload& payload);
  void handle(Delivery& d);
  void handle(const MobilityArrival& m);
  void handle(const Evaporation&);
  void handle(const DiscoveryTimer& t);
  void handle(const FlowEmit& f);
  void handle(const TeleportEvent& t);
  void schedule_arrival(NodeId n);
  void accrue(double& bucket, double duration) const;
  void check_conservation();
  void finish();

  Scenario scenario_;
  RwpParams rwp_;
  std::vector<TraceSink*> sinks_;
  MetricsCollector collector_;
  Rng mobility_rng_;
  Rng protocol_rng_;
  EventQueue<Payload> queue_;
  std::vector<NodeRuntime> nodes_;
  std::vector<std::unique_ptr<Router>> routers_;
  double now_{0.0};
  std::uint64_t data_on_air_{0};
  bool ran_{false};
};

/// Convenience wrapper: builds a Simulator and runs it.
MetricsReport run(const Scenario& scenario, std::vector<TraceSink*> sinks = {});

}  // namespace par
