#include "par/metrics.hpp"

#include <stdexcept>

#include "par/energy.hpp"

namespace par {

double compute_pdf(double sent, double received) {
  if (sent <= 0.0) return 100.0;
  return 100.0 * received / sent;
}

double compute_delay(std::span<const DeliveryRecord> deliveries) {
  if (deliveries.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& d : deliveries) sum += d.delivered_at - d.created_at;
  return 1000.0 * sum / static_cast<double>(deliveries.size());
}

double compute_overhead(std::uint64_t control_tx_count, std::uint64_t packets_received) {
  if (packets_received == 0) return static_cast<double>(control_tx_count);
  return static_cast<double>(control_tx_count) / static_cast<double>(packets_received);
}

double compute_throughput(std::uint64_t received, std::uint32_t packet_size, double sim_time) {
  if (!(sim_time > 0.0)) throw std::invalid_argument("sim_time must be > 0");
  return static_cast<double>(received) * packet_size * 8.0 / (sim_time * 1000.0);
}

void MetricsCollector::record(const TraceRecord& r) {
  switch (r.kind) {
    case TraceKind::Tx:
      switch (r.packet) {
        case PacketKind::PFant: ++counts_.pfant_tx; break;
        case PacketKind::PBant: ++counts_.pbant_tx; break;
        case PacketKind::RouteError: ++counts_.rerr_tx; break;
        case PacketKind::Data: ++counts_.data_tx; break;
        case PacketKind::None: break;
      }
      break;
    case TraceKind::DataCreated: {
      ++counts_.packets_sent;
      ++in_network_;
      auto& f = flows_[r.flow];
      f.src = r.src;
      f.dst = r.dst;
      ++f.sent;
      break;
    }
    case TraceKind::DataBuffered:
      --in_network_;
      ++buffered_;
      break;
    case TraceKind::DataUnbuffered:
      --buffered_;
      ++in_network_;
      break;
    case TraceKind::DataDelivered:
      ++counts_.packets_received;
      --in_network_;
      deliveries_.push_back({r.a, r.time});
      flows_[r.flow].deliveries.push_back({r.a, r.time});
      break;
    case TraceKind::DataDropped:
      ++counts_.dropped;
      if (r.b != 0.0)
        --buffered_;
      else
        --in_network_;
      if (r.detail == "in_flight_at_end") ++counts_.in_flight_drained;
      break;
    case TraceKind::DiscoveryStart: ++counts_.discoveries; break;
    case TraceKind::DiscoveryFailed: ++counts_.discovery_failures; break;
    case TraceKind::BantOrphan: ++counts_.bant_orphans; break;
    case TraceKind::ProtocolError: ++counts_.protocol_errors; break;
    case TraceKind::LinkBreak: ++counts_.link_breaks; break;
    case TraceKind::ConservationViolation: ++counts_.conservation_violations; break;
    case TraceKind::NodeEnergy: node_energy_.emplace_back(r.a, r.b); break;
    default: break;
  }
}

MetricsReport MetricsCollector::report(const Scenario& scenario) const {
  MetricsReport rep = counts_;
  rep.buffered_at_end = buffered_;
  rep.control_tx_count = rep.pfant_tx + rep.pbant_tx + rep.rerr_tx;
  rep.pdf = compute_pdf(static_cast<double>(rep.packets_sent),
                        static_cast<double>(rep.packets_received));
  rep.avg_end_to_end_delay_ms = compute_delay(deliveries_);
  rep.throughput_kbps =
      compute_throughput(rep.packets_received, scenario.packet_size, scenario.sim_time);
  rep.overhead = compute_overhead(rep.control_tx_count, rep.packets_received);
  rep.no_deliveries = rep.packets_received == 0;
  rep.overhead_degenerate = rep.packets_received == 0 && rep.control_tx_count > 0;

  const RadioPower power{scenario.power_tx, scenario.power_rx, scenario.power_idle};
  rep.energy_consumed = 0.0;
  for (const auto& [tx, rx] : node_energy_)
    rep.energy_consumed += energy_consumed(tx, rx, scenario.sim_time, power);

  rep.flows.clear();
  for (const auto& [id, f] : flows_) {
    FlowReport fr;
    fr.flow = id;
    fr.src = f.src;
    fr.dst = f.dst;
    fr.sent = f.sent;
    fr.received = f.deliveries.size();
    fr.pdf = compute_pdf(static_cast<double>(fr.sent), static_cast<double>(fr.received));
    fr.avg_delay_ms = compute_delay(f.deliveries);
    rep.flows.push_back(fr);
  }
  return rep;
}

MetricsReport recompute_report(const TraceFile& trace) {
  const Scenario scenario = parse_scenario(trace.header);
  MetricsCollector collector;
  for (const auto& r : trace.records) collector.record(r);
  return collector.report(scenario);
}

}  // namespace par
