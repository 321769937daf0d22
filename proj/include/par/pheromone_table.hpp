#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "par/types.hpp"

namespace par {

struct PheromoneEntry {
  NodeId next_hop;
  double pheromone{0.0};
  double last_updated{0.0};
};

/// Per-destination next-hop pheromone levels.
///
/// Holds at most one entry per (destination, next hop). An entry exists only
/// while its level is at least `tau_min`; any operation that would leave it
/// lower removes it instead.
class PheromoneTable {
 public:
  explicit PheromoneTable(double tau_min = 0.01) : tau_min_(tau_min) {}

  /// Adds `amount` to the (dst, next_hop) entry, creating it if needed.
  void deposit(NodeId dst, NodeId next_hop, double amount, double now);

  /// Raises the (dst, next_hop) entry to at least `level`.
  void raise_to(NodeId dst, NodeId next_hop, double level, double now);

  std::optional<NodeId> best(NodeId dst) const;

  /// Removes every entry using `next_hop`; returns how many went.
  std::size_t remove_next_hop(NodeId next_hop);

  bool remove(NodeId dst, NodeId next_hop);

  /// Multiplies every level by (1 - rate) and prunes entries under tau_min.
  /// Returns the number of pruned entries.
  std::size_t evaporate(double rate, double now);

  std::span<const PheromoneEntry> entries(NodeId dst) const;
  const PheromoneEntry* find(NodeId dst, NodeId next_hop) const;

  std::size_t size() const;
  bool empty() const { return routes_.empty(); }
  double tau_min() const { return tau_min_; }

  const std::map<NodeId, std::vector<PheromoneEntry>>& routes() const { return routes_; }

 private:
  PheromoneEntry* find_mutable(NodeId dst, NodeId next_hop);

  double tau_min_;
  std::map<NodeId, std::vector<PheromoneEntry>> routes_;
};

/// Highest-pheromone next hop for `dst`; ties go to the lowest NodeId.
inline std::optional<NodeId> select_next_hop(const PheromoneTable& table, NodeId dst) {
  return table.best(dst);
}

}  // namespace par
