#include "par/router.hpp"

#include <algorithm>

namespace par {

std::string_view to_string(FantDecision d) {
  switch (d) {
    case FantDecision::Rebroadcast: return "rebroadcast";
    case FantDecision::Drop: return "drop";
    case FantDecision::GenerateBant: return "generate_bant";
  }
  return "?";
}

std::string_view to_string(BantDecision d) {
  switch (d) {
    case BantDecision::ForwardTowardSource: return "forward";
    case BantDecision::ActivateRoute: return "activate";
    case BantDecision::Orphan: return "orphan";
  }
  return "?";
}

std::string_view to_string(DataDecision d) {
  switch (d) {
    case DataDecision::Deliver: return "deliver";
    case DataDecision::Forward: return "forward";
    case DataDecision::Buffer: return "buffer";
    case DataDecision::EmitRouteError: return "route_error";
    case DataDecision::Drop: return "drop";
  }
  return "?";
}

std::string_view to_string(RouteErrorAction a) {
  switch (a) {
    case RouteErrorAction::Forwarded: return "forward";
    case RouteErrorAction::Rediscover: return "rediscover";
    case RouteErrorAction::Pruned: return "pruned";
    case RouteErrorAction::Ignored: return "ignored";
    case RouteErrorAction::Dropped: return "drop";
  }
  return "?";
}

Router::Router(NodeId self, const ProtocolConfig& cfg, RouterHost& host)
    : self_(self), cfg_(cfg), host_(host), table_(cfg.tau_min) {}

TraceRecord Router::make_record(TraceKind kind) const {
  TraceRecord r;
  r.time = host_.now();
  r.node = self_;
  r.kind = kind;
  return r;
}

namespace {
TraceRecord& describe(TraceRecord& r, const DataPacket& pkt) {
  r.packet = PacketKind::Data;
  r.src = pkt.src;
  r.dst = pkt.dst;
  r.seq = pkt.seq;
  r.flow = pkt.flow;
  r.hops = pkt.hops;
  return r;
}
}  // namespace

// ---------------------------------------------------------------------------
// Discovery

DiscoveryOutcome Router::start_discovery(NodeId dst) {
  if (pending_.contains(dst)) return DiscoveryOutcome::Suppressed;
  try {
    (void)build_petal(host_.position_of(self_), host_.position_of(dst), cfg_.width_ratio,
                      cfg_.petal_margin);
  } catch (const DegeneratePetal&) {
    // Co-located: the destination is its own next hop.
    table_.raise_to(dst, dst, cfg_.tau_init, host_.now());
    return DiscoveryOutcome::Direct;
  }
  launch_pfant(dst, pending_[dst]);
  return DiscoveryOutcome::Started;
}

void Router::launch_pfant(NodeId dst, Pending& pending) {
  const Point self_pos = host_.position_of(self_);
  const Point dst_pos = host_.position_of(dst);

  PFant ant;
  ant.seq = ++next_seq_;
  ant.src = self_;
  ant.src_pos = self_pos;
  ant.dst = dst;
  ant.dst_pos = dst_pos;
  try {
    ant.petal = build_petal(self_pos, dst_pos, cfg_.width_ratio, cfg_.petal_margin);
  } catch (const DegeneratePetal&) {
    // Positions are resampled on retries; a coincidence here is still the
    // one-hop case.
    pending_.erase(dst);
    table_.raise_to(dst, dst, cfg_.tau_init, host_.now());
    flush_buffer(dst);
    return;
  }
  ant.hop_count = 0;
  ant.prev_hop = self_;
  if (cfg_.policy == Policy::Cnb) ant.designated = choose_designated(kNoNode);

  pending.seq = ant.seq;
  seen_.insert({self_, ant.seq});
  transmitted_.insert({self_, ant.seq});

  auto r = make_record(TraceKind::DiscoveryStart);
  r.packet = PacketKind::PFant;
  r.src = self_;
  r.dst = dst;
  r.seq = ant.seq;
  r.hops = pending.retries;
  r.a = petal_area(ant.petal);
  trace(r);

  host_.broadcast(self_, ant);
  host_.arm_discovery_timer(self_, dst, ant.seq, host_.now() + cfg_.discovery_timeout);
}

NodeId Router::choose_designated(NodeId exclude) {
  auto nbrs = host_.neighbors_of(self_);
  if (nbrs.size() > 1) std::erase(nbrs, exclude);
  if (nbrs.empty()) return kNoNode;
  return nbrs[host_.pick_index(nbrs.size())];
}

void Router::rebroadcast(const PFant& ant) {
  PFant out = ant;
  out.hop_count = ant.hop_count + 1;
  out.prev_hop = self_;
  out.designated = cfg_.policy == Policy::Cnb ? choose_designated(ant.prev_hop) : kNoNode;
  transmitted_.insert({ant.src, ant.seq});
  host_.broadcast(self_, out);
}

FantDecision Router::on_pfant(const PFant& ant) {
  if (!is_valid(ant.petal) || !is_finite(ant.src_pos) || !is_finite(ant.dst_pos)) {
    auto r = make_record(TraceKind::ProtocolError);
    r.packet = PacketKind::PFant;
    r.src = ant.src;
    r.dst = ant.dst;
    r.seq = ant.seq;
    r.detail = "malformed_petal";
    trace(r);
    return FantDecision::Drop;
  }

  const std::pair key{ant.src, ant.seq};
  if (seen_.contains(key)) {
    // A controlled broadcast may designate a node that already overheard the
    // same ant from someone else; it still owes its single rebroadcast.
    if (cfg_.policy == Policy::Cnb && ant.designated == self_ && ant.dst != self_ &&
        !transmitted_.contains(key)) {
      rebroadcast(ant);
      return FantDecision::Rebroadcast;
    }
    return FantDecision::Drop;
  }
  seen_.insert(key);
  table_.raise_to(ant.src, ant.prev_hop, cfg_.tau_init / (1.0 + ant.hop_count), host_.now());

  if (ant.dst == self_) {
    PBant bant;
    bant.seq = ant.seq;
    bant.src = ant.src;
    bant.dst = self_;
    bant.hops_from_dst = 0;
    bant.prev_hop = self_;
    if (!host_.unicast(self_, ant.prev_hop, bant)) on_link_break(ant.prev_hop, {bant});
    return FantDecision::GenerateBant;
  }

  bool forward = false;
  switch (cfg_.policy) {
    case Policy::Par: forward = contains(ant.petal, host_.position_of(self_)); break;
    case Policy::Flood: forward = true; break;
    case Policy::Cnb: forward = ant.designated == self_; break;
  }
  if (!forward) return FantDecision::Drop;
  rebroadcast(ant);
  return FantDecision::Rebroadcast;
}

BantDecision Router::on_pbant(const PBant& ant) {
  table_.deposit(ant.dst, ant.prev_hop, cfg_.tau_init / (1.0 + ant.hops_from_dst), host_.now());

  if (ant.src == self_) {
    auto& epoch = epochs_[ant.dst];
    epoch = std::max(epoch, ant.seq);
    if (pending_.erase(ant.dst) > 0) {
      auto r = make_record(TraceKind::RouteActivated);
      r.packet = PacketKind::PBant;
      r.src = self_;
      r.dst = ant.dst;
      r.seq = ant.seq;
      r.hops = ant.hops_from_dst + 1;
      trace(r);
    }
    flush_buffer(ant.dst);
    return BantDecision::ActivateRoute;
  }

  PBant out = ant;
  out.hops_from_dst = ant.hops_from_dst + 1;
  out.prev_hop = self_;
  const bool routable = has_route(ant.src);
  send_pbant(out);
  return routable ? BantDecision::ForwardTowardSource : BantDecision::Orphan;
}

void Router::send_pbant(PBant ant) {
  const auto next = select_next_hop(table_, ant.src);
  if (!next || ant.hops_from_dst >= cfg_.max_hops) {
    auto r = make_record(TraceKind::BantOrphan);
    r.packet = PacketKind::PBant;
    r.src = ant.src;
    r.dst = ant.dst;
    r.seq = ant.seq;
    trace(r);
    return;
  }
  if (!host_.unicast(self_, *next, ant)) on_link_break(*next, {ant});
}

void Router::on_discovery_timeout(NodeId dst, std::uint32_t seq) {
  auto it = pending_.find(dst);
  if (it == pending_.end() || it->second.seq != seq) return;

  auto r = make_record(TraceKind::DiscoveryTimeout);
  r.dst = dst;
  r.seq = seq;
  r.hops = it->second.retries;
  trace(r);

  if (has_route(dst)) {
    // Learned meanwhile, e.g. from the destination's own forward ant.
    pending_.erase(it);
    flush_buffer(dst);
    return;
  }
  if (it->second.retries < cfg_.max_retries) {
    ++it->second.retries;
    launch_pfant(dst, it->second);
    return;
  }

  pending_.erase(it);
  auto f = make_record(TraceKind::DiscoveryFailed);
  f.dst = dst;
  f.seq = seq;
  trace(f);
  auto buf = buffers_.find(dst);
  if (buf == buffers_.end()) return;
  auto packets = std::move(buf->second);
  buffers_.erase(buf);
  for (const auto& pkt : packets) drop_data(pkt, "discovery_failed", true);
}

// ---------------------------------------------------------------------------
// Data

DataDecision Router::originate(DataPacket pkt) {
  auto r = make_record(TraceKind::DataCreated);
  describe(r, pkt);
  r.a = pkt.created_at;
  trace(r);
  return on_data(pkt);
}

DataDecision Router::on_data(DataPacket pkt) {
  if (pkt.dst == self_) {
    auto r = make_record(TraceKind::DataDelivered);
    describe(r, pkt);
    r.a = pkt.created_at;
    trace(r);
    return DataDecision::Deliver;
  }
  if (pkt.hops >= cfg_.max_hops) {
    drop_data(pkt, "hop_limit", false);
    return DataDecision::Drop;
  }
  if (pkt.src != self_ && pkt.prev_hop.valid()) upstream_[{pkt.src, pkt.dst}] = pkt.prev_hop;
  if (has_route(pkt.dst)) return forward_data(pkt);

  if (pkt.src == self_) {
    if (start_discovery(pkt.dst) == DiscoveryOutcome::Direct) return forward_data(pkt);
    buffer_data(pkt);
    return DataDecision::Buffer;
  }
  emit_route_error(pkt);
  drop_data(pkt, "no_route", false);
  return DataDecision::EmitRouteError;
}

DataDecision Router::forward_data(DataPacket pkt) {
  const NodeId next = *select_next_hop(table_, pkt.dst);
  if (pkt.src == self_) pkt.route_seq = route_epoch(pkt.dst);
  table_.deposit(pkt.dst, next, cfg_.data_reinforcement, host_.now());

  DataPacket out = pkt;
  out.hops = pkt.hops + 1;
  out.prev_hop = self_;
  if (!host_.unicast(self_, next, out)) on_link_break(next, {pkt});
  return DataDecision::Forward;
}

void Router::buffer_data(const DataPacket& pkt) {
  auto& queue = buffers_[pkt.dst];
  if (queue.size() >= cfg_.buffer_capacity) {
    const DataPacket oldest = queue.front();
    queue.pop_front();
    drop_data(oldest, "buffer_overflow", true);
  }
  queue.push_back(pkt);
  auto r = make_record(TraceKind::DataBuffered);
  describe(r, pkt);
  trace(r);
}

void Router::flush_buffer(NodeId dst) {
  auto it = buffers_.find(dst);
  if (it == buffers_.end()) return;
  auto packets = std::move(it->second);
  buffers_.erase(it);
  for (const auto& pkt : packets) {
    auto r = make_record(TraceKind::DataUnbuffered);
    describe(r, pkt);
    trace(r);
    on_data(pkt);
  }
}

void Router::drop_data(const DataPacket& pkt, std::string_view reason, bool from_buffer) {
  auto r = make_record(TraceKind::DataDropped);
  describe(r, pkt);
  r.detail = std::string(reason);
  r.b = from_buffer ? 1.0 : 0.0;
  trace(r);
}

void Router::emit_route_error(const DataPacket& pkt) {
  RouteError err;
  err.unreachable_dst = pkt.dst;
  err.reporter = self_;
  err.origin_src = pkt.src;
  err.prev_hop = self_;
  err.route_seq = pkt.route_seq;
  err.hops = 0;
  send_route_error(err);
}

// ---------------------------------------------------------------------------
// Repair

void Router::send_route_error(RouteError err) {
  if (err.hops >= cfg_.max_hops) return;
  // Walk back the way the data came; the reverse trail is the fallback.
  std::optional<NodeId> next;
  if (auto up = upstream_.find({err.origin_src, err.unreachable_dst}); up != upstream_.end())
    next = up->second;
  else
    next = select_next_hop(table_, err.origin_src);
  if (!next) return;
  RouteError out = err;
  out.prev_hop = self_;
  out.hops = err.hops + 1;
  if (!host_.unicast(self_, *next, out)) on_link_break(*next, {err});
}

void Router::on_link_break(NodeId dead, std::vector<Packet> in_flight) {
  const std::size_t pruned = table_.remove_next_hop(dead);
  std::erase_if(upstream_, [dead](const auto& kv) { return kv.second == dead; });
  auto r = make_record(TraceKind::LinkBreak);
  r.peer = dead;
  r.b = static_cast<double>(pruned);
  trace(r);

  for (auto& packet : in_flight) {
    if (auto* data = std::get_if<DataPacket>(&packet)) {
      if (has_route(data->dst)) {
        forward_data(*data);
      } else if (data->src == self_) {
        if (start_discovery(data->dst) == DiscoveryOutcome::Direct)
          forward_data(*data);
        else
          buffer_data(*data);
      } else {
        emit_route_error(*data);
        drop_data(*data, "link_break", false);
      }
    } else if (auto* bant = std::get_if<PBant>(&packet)) {
      send_pbant(*bant);
    } else if (auto* err = std::get_if<RouteError>(&packet)) {
      send_route_error(*err);
    }
  }
}

RouteErrorAction Router::on_route_error(const RouteError& err) {
  const NodeId dst = err.unreachable_dst;
  if (err.origin_src == self_) {
    if (err.route_seq < route_epoch(dst)) return RouteErrorAction::Ignored;
    table_.remove(dst, err.prev_hop);
    if (has_route(dst)) return RouteErrorAction::Pruned;
    return start_discovery(dst) == DiscoveryOutcome::Started ? RouteErrorAction::Rediscover
                                                             : RouteErrorAction::Pruned;
  }
  table_.remove(dst, err.prev_hop);
  if (err.hops >= cfg_.max_hops || !can_report_to(err.origin_src, dst))
    return RouteErrorAction::Dropped;
  send_route_error(err);
  return RouteErrorAction::Forwarded;
}

bool Router::can_report_to(NodeId src, NodeId dst) const {
  return upstream_.contains({src, dst}) || has_route(src);
}

void Router::evaporate() { table_.evaporate(cfg_.evaporation_rate, host_.now()); }

std::size_t Router::buffered() const {
  std::size_t n = 0;
  for (const auto& [dst, q] : buffers_) n += q.size();
  return n;
}

std::size_t Router::buffered(NodeId dst) const {
  auto it = buffers_.find(dst);
  return it == buffers_.end() ? 0 : it->second.size();
}

std::uint32_t Router::route_epoch(NodeId dst) const {
  auto it = epochs_.find(dst);
  return it == epochs_.end() ? 0 : it->second;
}

}  // namespace par
