#include "par/trace.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace par {
namespace {

constexpr std::array<std::pair<TraceKind, std::string_view>, 18> kKindNames{{
    {TraceKind::Tx, "tx"},
    {TraceKind::Rx, "rx"},
    {TraceKind::DataCreated, "data_created"},
    {TraceKind::DataBuffered, "data_buffered"},
    {TraceKind::DataUnbuffered, "data_unbuffered"},
    {TraceKind::DataDelivered, "data_delivered"},
    {TraceKind::DataDropped, "data_dropped"},
    {TraceKind::DiscoveryStart, "discovery_start"},
    {TraceKind::DiscoveryTimeout, "discovery_timeout"},
    {TraceKind::DiscoveryFailed, "discovery_failed"},
    {TraceKind::RouteActivated, "route_activated"},
    {TraceKind::LinkBreak, "link_break"},
    {TraceKind::BantOrphan, "bant_orphan"},
    {TraceKind::ProtocolError, "protocol_error"},
    {TraceKind::Waypoint, "waypoint"},
    {TraceKind::Teleport, "teleport"},
    {TraceKind::NodeEnergy, "node_energy"},
    {TraceKind::ConservationViolation, "conservation_violation"},
}};

constexpr std::array<std::pair<PacketKind, std::string_view>, 5> kPacketNames{{
    {PacketKind::None, ""},
    {PacketKind::PFant, "pfant"},
    {PacketKind::PBant, "pbant"},
    {PacketKind::RouteError, "rerr"},
    {PacketKind::Data, "data"},
}};

std::string format_node(NodeId n) { return n.valid() ? std::to_string(n.value) : std::string{}; }

std::uint32_t parse_u32(std::string_view s) {
  std::uint32_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw std::runtime_error("bad integer field '" + std::string(s) + "'");
  return v;
}

double parse_f64(std::string_view s) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw std::runtime_error("bad real field '" + std::string(s) + "'");
  return v;
}

NodeId parse_node(std::string_view s) { return s.empty() ? kNoNode : NodeId{parse_u32(s)}; }

}  // namespace

std::string_view to_string(TraceKind k) {
  for (const auto& [kind, name] : kKindNames)
    if (kind == k) return name;
  return "?";
}

std::string_view to_string(PacketKind k) {
  for (const auto& [kind, name] : kPacketNames)
    if (kind == k) return name;
  return "?";
}

std::optional<TraceKind> parse_trace_kind(std::string_view s) {
  for (const auto& [kind, name] : kKindNames)
    if (name == s) return kind;
  return std::nullopt;
}

std::optional<PacketKind> parse_packet_kind(std::string_view s) {
  for (const auto& [kind, name] : kPacketNames)
    if (name == s) return kind;
  return std::nullopt;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw std::runtime_error("double formatting failed");
  return std::string(buf.data(), p);
}

std::string to_csv(const TraceRecord& r) {
  std::string line;
  line.reserve(96);
  line += format_double(r.time);
  line += ',';
  line += format_node(r.node);
  line += ',';
  line += to_string(r.kind);
  line += ',';
  line += to_string(r.packet);
  line += ',';
  line += format_node(r.src);
  line += ',';
  line += format_node(r.dst);
  line += ',';
  line += std::to_string(r.seq);
  line += ',';
  line += std::to_string(r.flow);
  line += ',';
  line += std::to_string(r.hops);
  line += ',';
  line += format_node(r.peer);
  line += ',';
  line += r.detail;
  line += ',';
  line += format_double(r.a);
  line += ',';
  line += format_double(r.b);
  return line;
}

TraceRecord parse_trace_line(std::string_view line) {
  std::array<std::string_view, 13> f{};
  std::size_t n = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      if (n == f.size()) throw std::runtime_error("too many trace fields");
      f[n++] = line.substr(start, i - start);
      start = i + 1;
    }
  }
  if (n != f.size()) throw std::runtime_error("expected 13 trace fields");

  TraceRecord r;
  r.time = parse_f64(f[0]);
  r.node = parse_node(f[1]);
  auto kind = parse_trace_kind(f[2]);
  auto packet = parse_packet_kind(f[3]);
  if (!kind || !packet) throw std::runtime_error("unknown trace kind in '" + std::string(line) + "'");
  r.kind = *kind;
  r.packet = *packet;
  r.src = parse_node(f[4]);
  r.dst = parse_node(f[5]);
  r.seq = parse_u32(f[6]);
  r.flow = parse_u32(f[7]);
  r.hops = parse_u32(f[8]);
  r.peer = parse_node(f[9]);
  r.detail = std::string(f[10]);
  r.a = parse_f64(f[11]);
  r.b = parse_f64(f[12]);
  return r;
}

TraceWriter::TraceWriter(std::ostream& out, std::string_view header) : out_(out) {
  std::size_t start = 0;
  while (start < header.size()) {
    auto end = header.find('\n', start);
    if (end == std::string_view::npos) end = header.size();
    out_ << "# " << header.substr(start, end - start) << '\n';
    start = end + 1;
  }
  out_ << kTraceColumns << '\n';
}

void TraceWriter::record(const TraceRecord& r) { out_ << to_csv(r) << '\n'; }

TraceFile read_trace(std::istream& in) {
  TraceFile file;
  std::string line;
  bool columns_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (!columns_seen && line.starts_with("# ")) {
      file.header += line.substr(2);
      file.header += '\n';
      continue;
    }
    if (!columns_seen) {
      if (line != kTraceColumns) throw std::runtime_error("missing trace column header");
      columns_seen = true;
      continue;
    }
    file.records.push_back(parse_trace_line(line));
  }
  return file;
}

}  // namespace par
