#pragma once

// Shared fixtures: scenario builders, an in-memory trace sink and a scripted
// RouterHost for driving a single Router by hand.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "par/mobility.hpp"
#include "par/router.hpp"
#include "par/scenario.hpp"
#include "par/simulator.hpp"
#include "par/trace.hpp"

namespace par::testing {

class RecordingSink : public TraceSink {
 public:
  void record(const TraceRecord& r) override { records.push_back(r); }
  std::vector<TraceRecord> records;
};

/// Every node pinned at the given coordinates.
inline Scenario static_scenario(const std::vector<Point>& positions, double range = 250.0) {
  Scenario s;
  s.name = "static";
  s.node_count = static_cast<std::uint32_t>(positions.size());
  s.mobility = Mobility::Static;
  s.tx_range = range;
  double w = 1.0, h = 1.0;
  for (std::uint32_t i = 0; i < positions.size(); ++i) {
    s.placements.push_back({NodeId{i}, positions[i]});
    w = std::max(w, positions[i].x + 1.0);
    h = std::max(h, positions[i].y + 1.0);
  }
  s.area_width = w;
  s.area_height = h;
  return s;
}

/// `n` pinned nodes scattered uniformly, with `flows` random pairs.
inline Scenario random_static_scenario(std::uint64_t seed, std::uint32_t n = 50,
                                       std::uint32_t flows = 2, double sim_time = 20.0) {
  Rng rng(derive_seed(seed, 99));
  Scenario s;
  s.name = "static_random";
  s.node_count = n;
  s.mobility = Mobility::Static;
  s.sim_time = sim_time;
  s.rng_seed = seed;
  for (std::uint32_t i = 0; i < n; ++i)
    s.placements.push_back({NodeId{i}, {rng.uniform(0, s.area_width), rng.uniform(0, s.area_height)}});
  for (std::uint32_t f = 0; f < flows; ++f) {
    const auto src = static_cast<std::uint32_t>(rng.index(n));
    auto dst = static_cast<std::uint32_t>(rng.index(n - 1));
    if (dst >= src) ++dst;
    s.flows.push_back({NodeId{src}, NodeId{dst}, 1.0 + f, 5.0});
  }
  return s;
}

/// Nodes that transmit the forward ant of a single flooded discovery from
/// src to dst on the same static topology, with nothing else going on.
inline std::set<std::uint32_t> lone_flood_transmitters(Scenario s, NodeId src, NodeId dst) {
  s.protocol.policy = Policy::Flood;
  s.flows = {{src, dst, 1.0, 1.0, 1.5}};
  s.sim_time = std::max(5.0, 1.0 + s.protocol.discovery_timeout);
  RecordingSink sink;
  run(s, {&sink});
  std::set<std::uint32_t> out;
  for (const auto& r : sink.records)
    if (r.kind == TraceKind::Tx && r.packet == PacketKind::PFant && r.seq == 1) out.insert(r.node.value);
  return out;
}

/// rows x cols lattice, node id = row * cols + col.
inline std::vector<Point> grid(std::uint32_t rows, std::uint32_t cols, double spacing) {
  std::vector<Point> out;
  for (std::uint32_t r = 0; r < rows; ++r)
    for (std::uint32_t c = 0; c < cols; ++c) out.push_back({c * spacing, r * spacing});
  return out;
}

struct Sent {
  NodeId from;
  NodeId to;  // kNoNode for broadcasts
  Packet packet;
};

/// Records everything a Router asks for; topology and positions are set by
/// the test.
class FakeHost : public RouterHost {
 public:
  double now() const override { return time; }
  Point position_of(NodeId n) const override { return positions.at(n); }
  std::vector<NodeId> neighbors_of(NodeId n) const override {
    auto it = adjacency.find(n);
    return it == adjacency.end() ? std::vector<NodeId>{} : it->second;
  }
  std::size_t pick_index(std::size_t n) override { return next_pick % n; }
  void broadcast(NodeId from, const Packet& p) override { sent.push_back({from, kNoNode, p}); }
  bool unicast(NodeId from, NodeId to, const Packet& p) override {
    if (unreachable.contains(to)) {
      ++failed_unicasts;
      return false;
    }
    sent.push_back({from, to, p});
    return true;
  }
  void arm_discovery_timer(NodeId node, NodeId dst, std::uint32_t seq, double at) override {
    timers.push_back({node, dst, seq, at});
  }
  void record(const TraceRecord& r) override { trace.push_back(r); }

  template <class T>
  std::vector<std::pair<NodeId, T>> sent_of() const {
    std::vector<std::pair<NodeId, T>> out;
    for (const auto& s : sent)
      if (const auto* p = std::get_if<T>(&s.packet)) out.emplace_back(s.to, *p);
    return out;
  }
  std::size_t count(TraceKind k) const {
    std::size_t n = 0;
    for (const auto& r : trace) n += r.kind == k;
    return n;
  }

  struct Timer {
    NodeId node;
    NodeId dst;
    std::uint32_t seq;
    double at;
  };

  double time{0.0};
  std::map<NodeId, Point> positions;
  std::map<NodeId, std::vector<NodeId>> adjacency;
  std::set<NodeId> unreachable;
  std::size_t next_pick{0};
  std::size_t failed_unicasts{0};
  std::vector<Sent> sent;
  std::vector<Timer> timers;
  std::vector<TraceRecord> trace;
};

inline NodeId N(std::uint32_t v) { return NodeId{v}; }

}  // namespace par::testing
