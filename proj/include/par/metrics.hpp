#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "par/scenario.hpp"
#include "par/trace.hpp"
#include "par/types.hpp"

namespace par {

struct DeliveryRecord {
  double created_at{0.0};    // seconds
  double delivered_at{0.0};  // seconds
};

/// Delivered over sent, in percent; 100 when nothing was sent.
double compute_pdf(double sent, double received);

/// Mean delivery latency in milliseconds over delivered packets; 0 if none.
double compute_delay(std::span<const DeliveryRecord> deliveries);

/// Control transmissions per delivered packet. With nothing delivered the
/// raw control count is returned and the report flags it.
double compute_overhead(std::uint64_t control_tx_count, std::uint64_t packets_received);

/// Delivered payload rate in kbit/s. Throws std::invalid_argument when
/// sim_time <= 0.
double compute_throughput(std::uint64_t received, std::uint32_t packet_size, double sim_time);

struct FlowReport {
  std::uint32_t flow{0};
  NodeId src;
  NodeId dst;
  std::uint64_t sent{0};
  std::uint64_t received{0};
  double pdf{100.0};
  double avg_delay_ms{0.0};
  friend bool operator==(const FlowReport&, const FlowReport&) = default;
};

struct MetricsReport {
  std::uint64_t packets_sent{0};
  std::uint64_t packets_received{0};
  double pdf{100.0};
  double avg_end_to_end_delay_ms{0.0};
  double throughput_kbps{0.0};
  double overhead{0.0};
  double energy_consumed{0.0};  // joules, all nodes

  std::uint64_t control_tx_count{0};
  std::uint64_t pfant_tx{0};
  std::uint64_t pbant_tx{0};
  std::uint64_t rerr_tx{0};
  std::uint64_t data_tx{0};

  std::uint64_t dropped{0};  // includes in_flight_drained
  std::uint64_t buffered_at_end{0};
  std::uint64_t in_flight_drained{0};

  std::uint64_t discoveries{0};
  std::uint64_t discovery_failures{0};
  std::uint64_t bant_orphans{0};
  std::uint64_t protocol_errors{0};
  std::uint64_t link_breaks{0};
  std::uint64_t conservation_violations{0};

  bool no_deliveries{false};
  bool overhead_degenerate{false};

  std::vector<FlowReport> flows;

  /// sent = delivered + dropped + still buffered.
  bool conserved() const {
    return packets_sent == packets_received + dropped + buffered_at_end;
  }

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// Reduces a trace stream to a MetricsReport. Fed live by the simulator or
/// offline from a trace file; both paths produce identical reports.
class MetricsCollector : public TraceSink {
 public:
  void record(const TraceRecord& r) override;

  /// Data packets created and not yet delivered, dropped or buffered.
  std::uint64_t in_network() const { return in_network_; }
  std::uint64_t buffered() const { return buffered_; }

  MetricsReport report(const Scenario& scenario) const;

 private:
  struct FlowCounters {
    NodeId src;
    NodeId dst;
    std::uint64_t sent{0};
    std::vector<DeliveryRecord> deliveries;
  };

  MetricsReport counts_;
  std::vector<DeliveryRecord> deliveries_;
  std::map<std::uint32_t, FlowCounters> flows_;
  std::vector<std::pair<double, double>> node_energy_;  // tx, rx seconds
  std::uint64_t in_network_{0};
  std::uint64_t buffered_{0};
};

/// Rebuilds the report from a trace file whose header is the effective
/// scenario text.
MetricsReport recompute_report(const TraceFile& trace);

}  // namespace par
