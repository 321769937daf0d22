#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "par/types.hpp"

namespace par {

enum class TraceKind : std::uint8_t {
  Tx,               // a packet left a node; a = airtime s, b = receivers
  Rx,               // a packet reached a node; detail = routing decision
  DataCreated,      // seq/flow identify the packet
  DataBuffered,
  DataUnbuffered,
  DataDelivered,    // a = created_at
  DataDropped,      // detail = reason, b = 1 if it left a source buffer
  DiscoveryStart,   // seq = discovery seq, dst = target
  DiscoveryTimeout,
  DiscoveryFailed,
  RouteActivated,
  LinkBreak,        // peer = dead neighbor, b = pruned entries
  BantOrphan,
  ProtocolError,
  Waypoint,         // a, b = new waypoint; detail "arrive" or "leg"
  Teleport,         // a, b = new position
  NodeEnergy,       // a = tx seconds, b = rx seconds
  ConservationViolation,
};

enum class PacketKind : std::uint8_t { None, PFant, PBant, RouteError, Data };

/// One line of the event trace. Field meaning depends on `kind`; unused
/// fields stay at their defaults.
struct TraceRecord {
  double time{0.0};
  NodeId node;
  TraceKind kind{TraceKind::Tx};
  PacketKind packet{PacketKind::None};
  NodeId src;
  NodeId dst;
  std::uint32_t seq{0};
  std::uint32_t flow{0};
  std::uint32_t hops{0};
  NodeId peer;
  std::string detail;
  double a{0.0};
  double b{0.0};

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

std::string_view to_string(TraceKind k);
std::string_view to_string(PacketKind k);
std::optional<TraceKind> parse_trace_kind(std::string_view s);
std::optional<PacketKind> parse_packet_kind(std::string_view s);

/// Receives records as the simulator produces them.
class TraceSink {
 public:
  virtual ~TraceSink() = default;
  virtual void record(const TraceRecord& r) = 0;
};

inline constexpr std::string_view kTraceColumns =
    "time,node,kind,packet,src,dst,seq,flow,hops,peer,detail,a,b";

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

std::string to_csv(const TraceRecord& r);
TraceRecord parse_trace_line(std::string_view line);

/// Streams records as CSV after an optional `# `-prefixed header block.
class TraceWriter : public TraceSink {
 public:
  TraceWriter(std::ostream& out, std::string_view header);
  void record(const TraceRecord& r) override;

 private:
  std::ostream& out_;
};

struct TraceFile {
  std::string header;  // comment lines with the "# " prefix removed
  std::vector<TraceRecord> records;
};

TraceFile read_trace(std::istream& in);

}  // namespace par
