#include "par/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "par/energy.hpp"

namespace par {

std::vector<NodeId> neighbors(std::span<const Point> positions, NodeId origin, double range) {
  std::vector<NodeId> out;
  const Point& o = positions[origin.index()];
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (i == origin.index()) continue;
    if (distance(o, positions[i]) <= range) out.emplace_back(static_cast<std::uint32_t>(i));
  }
  return out;
}

namespace {

PacketKind kind_of(const Packet& p) {
  switch (p.index()) {
    case 0: return PacketKind::PFant;
    case 1: return PacketKind::PBant;
    case 2: return PacketKind::RouteError;
    default: return PacketKind::Data;
  }
}

// Fills the identifying fields of a trace record from a packet.
void describe(TraceRecord& r, const Packet& p) {
  r.packet = kind_of(p);
  struct Visitor {
    TraceRecord& r;
    void operator()(const PFant& a) const {
      r.src = a.src;
      r.dst = a.dst;
      r.seq = a.seq;
      r.hops = a.hop_count;
    }
    void operator()(const PBant& a) const {
      r.src = a.src;
      r.dst = a.dst;
      r.seq = a.seq;
      r.hops = a.hops_from_dst;
    }
    void operator()(const RouteError& e) const {
      r.src = e.origin_src;
      r.dst = e.unreachable_dst;
      r.seq = e.route_seq;
      r.hops = e.hops;
    }
    void operator()(const DataPacket& d) const {
      r.src = d.src;
      r.dst = d.dst;
      r.seq = d.seq;
      r.flow = d.flow;
      r.hops = d.hops;
    }
  };
  std::visit(Visitor{r}, p);
}

}  // namespace

Simulator::Simulator(Scenario scenario, std::vector<TraceSink*> sinks)
    : scenario_(std::move(scenario)),
      sinks_(std::move(sinks)),
      mobility_rng_(derive_seed(scenario_.rng_seed, 0)),
      protocol_rng_(derive_seed(scenario_.rng_seed, 1)) {
  if (auto d = validate(scenario_); !d.empty()) throw ScenarioError(std::move(d));
  rwp_ = {scenario_.area_width, scenario_.area_height, scenario_.speed_min, scenario_.speed_max,
          scenario_.pause_time};
  initialize();
}

Simulator::~Simulator() = default;

void Simulator::initialize() {
  const auto n = scenario_.node_count;
  nodes_.resize(n);
  std::vector<bool> placed(n, false);
  std::vector<Point> initial(n);
  for (const auto& p : scenario_.placements) {
    initial[p.node.index()] = p.pos;
    placed[p.node.index()] = true;
  }
  // Draw order: unplaced nodes take (x, y) in id order, then every mobile
  // node draws its first leg in id order.
  for (std::uint32_t i = 0; i < n; ++i)
    if (!placed[i])
      initial[i] = {mobility_rng_.uniform(0.0, rwp_.width), mobility_rng_.uniform(0.0, rwp_.height)};

  std::vector<bool> pinned(n, scenario_.mobility == Mobility::Static);
  for (auto id : scenario_.static_nodes) pinned[id.index()] = true;

  for (std::uint32_t i = 0; i < n; ++i) {
    auto& node = nodes_[i];
    node.id = NodeId{i};
    node.motion.origin = initial[i];
    node.motion.waypoint = initial[i];
    routers_.push_back(std::make_unique<Router>(NodeId{i}, scenario_.protocol, static_cast<RouterHost&>(*this)));
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    if (pinned[i]) continue;
    begin_leg(nodes_[i].motion, initial[i], 0.0, mobility_rng_, rwp_);
    schedule_arrival(NodeId{i});
  }

  for (std::size_t i = 0; i < scenario_.teleports.size(); ++i)
    queue_.push(scenario_.teleports[i].time, TeleportEvent{i});
  queue_.push(scenario_.protocol.evaporation_tick, Evaporation{});
  for (std::uint32_t f = 0; f < scenario_.flows.size(); ++f)
    queue_.push(scenario_.flows[f].start, FlowEmit{f, 0});
}

void Simulator::schedule_arrival(NodeId n) {
  const auto& m = nodes_[n.index()].motion;
  queue_.push(m.arrive_time, MobilityArrival{n, m.leg});
}

MetricsReport Simulator::run() {
  if (ran_) throw std::logic_error("Simulator::run called twice");
  ran_ = true;
  while (!queue_.empty() && queue_.top().time <= scenario_.sim_time) {
    auto event = queue_.pop();
    now_ = event.time;
    dispatch(event.payload);
    check_conservation();
  }
  finish();
  return collector_.report(scenario_);
}

void Simulator::dispatch(Payload& payload) {
  std::visit([this](auto& p) { handle(p); }, payload);
}

void Simulator::finish() {
  now_ = scenario_.sim_time;
  // Packets still on the air never arrive.
  while (!queue_.empty()) {
    auto event = queue_.pop();
    auto* d = std::get_if<Delivery>(&event.payload);
    if (!d) continue;
    auto* data = std::get_if<DataPacket>(&d->packet);
    if (!data) continue;
    --data_on_air_;
    TraceRecord r;
    r.time = now_;
    r.node = d->to;
    r.kind = TraceKind::DataDropped;
    describe(r, d->packet);
    r.detail = "in_flight_at_end";
    record(r);
  }
  for (const auto& node : nodes_) {
    TraceRecord r;
    r.time = now_;
    r.node = node.id;
    r.kind = TraceKind::NodeEnergy;
    r.a = node.tx_seconds;
    r.b = node.rx_seconds;
    record(r);
  }
}

void Simulator::check_conservation() {
  std::uint64_t buffered = 0;
  for (const auto& r : routers_) buffered += r->buffered();
  if (collector_.in_network() == data_on_air_ && collector_.buffered() == buffered) return;
  TraceRecord r;
  r.time = now_;
  r.kind = TraceKind::ConservationViolation;
  r.a = static_cast<double>(data_on_air_);
  r.b = static_cast<double>(buffered);
  record(r);
}

double Simulator::energy_consumed(NodeId n) const {
  const auto& node = nodes_.at(n.index());
  return par::energy_consumed(node.tx_seconds, node.rx_seconds, now_,
                              {scenario_.power_tx, scenario_.power_rx, scenario_.power_idle});
}

// ---------------------------------------------------------------------------
// RouterHost

Point Simulator::position_of(NodeId node) const {
  return position_at(nodes_.at(node.index()).motion, now_);
}

std::vector<NodeId> Simulator::neighbors_of(NodeId node) const {
  std::vector<Point> positions(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) positions[i] = position_at(nodes_[i].motion, now_);
  return neighbors(positions, node, scenario_.tx_range);
}

std::size_t Simulator::pick_index(std::size_t n) { return protocol_rng_.index(n); }

void Simulator::accrue(double& bucket, double duration) const {
  bucket += std::clamp(scenario_.sim_time - now_, 0.0, duration);
}

void Simulator::broadcast(NodeId from, const Packet& packet) {
  const double dur = airtime(wire_size(packet), scenario_.data_rate);
  const auto receivers = neighbors_of(from);
  accrue(nodes_[from.index()].tx_seconds, dur);
  for (auto to : receivers) {
    accrue(nodes_[to.index()].rx_seconds, dur);
    queue_.push(now_ + dur + kPropagationDelay, Delivery{from, to, packet});
  }
  if (std::holds_alternative<DataPacket>(packet)) data_on_air_ += receivers.size();

  TraceRecord r;
  r.time = now_;
  r.node = from;
  r.kind = TraceKind::Tx;
  describe(r, packet);
  if (const auto* ant = std::get_if<PFant>(&packet)) r.peer = ant->designated;
  r.detail = "bcast";
  r.a = dur;
  r.b = static_cast<double>(receivers.size());
  record(r);
}

bool Simulator::unicast(NodeId from, NodeId to, const Packet& packet) {
  if (distance(position_of(from), position_of(to)) > scenario_.tx_range) return false;
  const double dur = airtime(wire_size(packet), scenario_.data_rate);
  accrue(nodes_[from.index()].tx_seconds, dur);
  accrue(nodes_[to.index()].rx_seconds, dur);
  queue_.push(now_ + dur + kPropagationDelay, Delivery{from, to, packet});
  if (std::holds_alternative<DataPacket>(packet)) ++data_on_air_;

  TraceRecord r;
  r.time = now_;
  r.node = from;
  r.kind = TraceKind::Tx;
  describe(r, packet);
  r.peer = to;
  r.detail = "ucast";
  r.a = dur;
  r.b = 1.0;
  record(r);
  return true;
}

void Simulator::arm_discovery_timer(NodeId node, NodeId dst, std::uint32_t seq, double at) {
  queue_.push(at, DiscoveryTimer{node, dst, seq});
}

void Simulator::record(const TraceRecord& r) {
  collector_.record(r);
  for (auto* sink : sinks_) sink->record(r);
}

// ---------------------------------------------------------------------------
// Event handlers

void Simulator::handle(Delivery& d) {
  if (std::holds_alternative<DataPacket>(d.packet)) --data_on_air_;
  Router& router = *routers_[d.to.index()];

  TraceRecord r;
  r.time = now_;
  r.node = d.to;
  r.kind = TraceKind::Rx;
  r.peer = d.from;
  describe(r, d.packet);

  struct Visitor {
    Router& router;
    std::string operator()(const PFant& a) const { return std::string(to_string(router.on_pfant(a))); }
    std::string operator()(const PBant& a) const { return std::string(to_string(router.on_pbant(a))); }
    std::string operator()(const RouteError& e) const {
      return std::string(to_string(router.on_route_error(e)));
    }
    std::string operator()(const DataPacket& p) const {
      return std::string(to_string(router.on_data(p)));
    }
  };
  r.detail = std::visit(Visitor{router}, d.packet);
  record(r);
}

void Simulator::handle(const MobilityArrival& m) {
  auto& node = nodes_[m.node.index()];
  if (node.motion.leg != m.leg) return;  // superseded by a teleport

  TraceRecord arrive;
  arrive.time = now_;
  arrive.node = m.node;
  arrive.kind = TraceKind::Waypoint;
  arrive.detail = "arrive";
  arrive.a = node.motion.waypoint.x;
  arrive.b = node.motion.waypoint.y;
  record(arrive);

  rwp_step(node.motion, now_, mobility_rng_, rwp_);

  TraceRecord leg = arrive;
  leg.detail = "leg";
  leg.a = node.motion.waypoint.x;
  leg.b = node.motion.waypoint.y;
  record(leg);
  schedule_arrival(m.node);
}

void Simulator::handle(const Evaporation&) {
  for (auto& r : routers_) r->evaporate();
  queue_.push(now_ + scenario_.protocol.evaporation_tick, Evaporation{});
}

void Simulator::handle(const DiscoveryTimer& t) {
  routers_[t.node.index()]->on_discovery_timeout(t.dst, t.seq);
}

void Simulator::handle(const FlowEmit& f) {
  const auto& flow = scenario_.flows[f.flow];
  if (now_ < flow.stop) {
    DataPacket pkt;
    pkt.flow = f.flow;
    pkt.seq = f.index;
    pkt.src = flow.src;
    pkt.dst = flow.dst;
    pkt.created_at = now_;
    pkt.size = scenario_.packet_size;
    routers_[flow.src.index()]->originate(pkt);
  }
  // Emission times are computed from the index, not accumulated.
  const double next = flow.start + static_cast<double>(f.index + 1) / flow.rate;
  if (next < flow.stop) queue_.push(next, FlowEmit{f.flow, f.index + 1});
}

void Simulator::handle(const TeleportEvent& t) {
  const auto& spec = scenario_.teleports[t.index];
  auto& m = nodes_[spec.node.index()].motion;
  m.origin = spec.pos;
  m.depart_time = now_;
  ++m.leg;
  if (m.mobile) {
    m.arrive_time = now_ + distance(spec.pos, m.waypoint) / m.speed;
    schedule_arrival(spec.node);
  } else {
    m.waypoint = spec.pos;
  }

  TraceRecord r;
  r.time = now_;
  r.node = spec.node;
  r.kind = TraceKind::Teleport;
  r.a = spec.pos.x;
  r.b = spec.pos.y;
  record(r);
}

MetricsReport run(const Scenario& scenario, std::vector<TraceSink*> sinks) {
  Simulator sim(scenario, std::move(sinks));
  return sim.run();
}

}  // namespace par
