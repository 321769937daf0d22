#include "par/pheromone_table.hpp"

#include <algorithm>

namespace par {

PheromoneEntry* PheromoneTable::find_mutable(NodeId dst, NodeId next_hop) {
  auto it = routes_.find(dst);
  if (it == routes_.end()) return nullptr;
  for (auto& e : it->second)
    if (e.next_hop == next_hop) return &e;
  return nullptr;
}

const PheromoneEntry* PheromoneTable::find(NodeId dst, NodeId next_hop) const {
  return const_cast<PheromoneTable*>(this)->find_mutable(dst, next_hop);
}

void PheromoneTable::deposit(NodeId dst, NodeId next_hop, double amount, double now) {
  if (auto* e = find_mutable(dst, next_hop)) {
    e->pheromone += amount;
    e->last_updated = now;
    if (e->pheromone < tau_min_) remove(dst, next_hop);
    return;
  }
  if (amount < tau_min_) return;
  routes_[dst].push_back({next_hop, amount, now});
}

void PheromoneTable::raise_to(NodeId dst, NodeId next_hop, double level, double now) {
  if (auto* e = find_mutable(dst, next_hop)) {
    e->pheromone = std::max(e->pheromone, level);
    e->last_updated = now;
    return;
  }
  if (level < tau_min_) return;
  routes_[dst].push_back({next_hop, level, now});
}

std::optional<NodeId> PheromoneTable::best(NodeId dst) const {
  auto it = routes_.find(dst);
  if (it == routes_.end() || it->second.empty()) return std::nullopt;
  const PheromoneEntry* pick = &it->second.front();
  for (const auto& e : it->second) {
    if (e.pheromone > pick->pheromone ||
        (e.pheromone == pick->pheromone && e.next_hop < pick->next_hop))
      pick = &e;
  }
  return pick->next_hop;
}

std::size_t PheromoneTable::remove_next_hop(NodeId next_hop) {
  std::size_t removed = 0;
  for (auto it = routes_.begin(); it != routes_.end();) {
    removed += std::erase_if(it->second,
                             [&](const PheromoneEntry& e) { return e.next_hop == next_hop; });
    it = it->second.empty() ? routes_.erase(it) : std::next(it);
  }
  return removed;
}

bool PheromoneTable::remove(NodeId dst, NodeId next_hop) {
  auto it = routes_.find(dst);
  if (it == routes_.end()) return false;
  const auto n =
      std::erase_if(it->second, [&](const PheromoneEntry& e) { return e.next_hop == next_hop; });
  if (it->second.empty()) routes_.erase(it);
  return n > 0;
}

std::size_t PheromoneTable::evaporate(double rate, double /*now*/) {
  std::size_t removed = 0;
  for (auto it = routes_.begin(); it != routes_.end();) {
    for (auto& e : it->second) e.pheromone *= (1.0 - rate);
    removed += std::erase_if(it->second,
                             [&](const PheromoneEntry& e) { return e.pheromone < tau_min_; });
    it = it->second.empty() ? routes_.erase(it) : std::next(it);
  }
  return removed;
}

std::span<const PheromoneEntry> PheromoneTable::entries(NodeId dst) const {
  auto it = routes_.find(dst);
  if (it == routes_.end()) return {};
  return it->second;
}

std::size_t PheromoneTable::size() const {
  std::size_t n = 0;
  for (const auto& [dst, list] : routes_) n += list.size();
  return n;
}

}  // namespace par
