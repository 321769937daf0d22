#include "par/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "par/trace.hpp"

namespace par {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view want) {
  throw ScenarioError({"malformed value '" + std::string(value) + "' for " + std::string(key) +
                       " (expected " + std::string(want) + ")"});
}

double to_real(std::string_view key, std::string_view token) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || p != token.data() + token.size() || !std::isfinite(v))
    bad_value(key, token, "a finite number");
  return v;
}

template <typename Int>
Int to_int(std::string_view key, std::string_view token) {
  Int v{};
  const auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || p != token.data() + token.size())
    bad_value(key, token, "a non-negative integer");
  return v;
}

NodeId to_node(std::string_view key, std::string_view token) {
  return NodeId{to_int<std::uint32_t>(key, token)};
}

std::string fmt(double v) { return format_double(v); }

struct Field {
  std::string_view key;
  bool repeatable;
  std::function<void(Scenario&, std::string_view)> set;
  // Returns one value per emitted line.
  std::function<std::vector<std::string>(const Scenario&)> get;
};

template <typename T>
Field real_field(std::string_view key, T Scenario::*member) {
  return {key, false,
          [key, member](Scenario& s, std::string_view v) { s.*member = to_real(key, v); },
          [member](const Scenario& s) { return std::vector{fmt(s.*member)}; }};
}

template <typename T>
Field proto_real(std::string_view key, T ProtocolConfig::*member) {
  return {key, false,
          [key, member](Scenario& s, std::string_view v) { s.protocol.*member = to_real(key, v); },
          [member](const Scenario& s) { return std::vector{fmt(s.protocol.*member)}; }};
}

template <typename T>
Field proto_int(std::string_view key, T ProtocolConfig::*member) {
  return {key, false,
          [key, member](Scenario& s, std::string_view v) { s.protocol.*member = to_int<T>(key, v); },
          [member](const Scenario& s) { return std::vector{std::to_string(s.protocol.*member)}; }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back({"name", false, [](Scenario& s, std::string_view v) { s.name = std::string(v); },
                 [](const Scenario& s) { return std::vector{s.name}; }});
    f.push_back({"node_count", false,
                 [](Scenario& s, std::string_view v) {
                   s.node_count = to_int<std::uint32_t>("node_count", v);
                 },
                 [](const Scenario& s) { return std::vector{std::to_string(s.node_count)}; }});
    f.push_back({"area", false,
                 [](Scenario& s, std::string_view v) {
                   const auto x = v.find('x');
                   if (x == std::string_view::npos) bad_value("area", v, "WIDTH x HEIGHT");
                   s.area_width = to_real("area", trim(v.substr(0, x)));
                   s.area_height = to_real("area", trim(v.substr(x + 1)));
                 },
                 [](const Scenario& s) {
                   return std::vector{fmt(s.area_width) + " x " + fmt(s.area_height)};
                 }});
    f.push_back(real_field("tx_range", &Scenario::tx_range));
    f.push_back(real_field("sim_time", &Scenario::sim_time));
    f.push_back(real_field("speed_min", &Scenario::speed_min));
    f.push_back(real_field("speed_max", &Scenario::speed_max));
    f.push_back(real_field("pause_time", &Scenario::pause_time));
    f.push_back({"mobility", false,
                 [](Scenario& s, std::string_view v) {
                   if (v == "rwp")
                     s.mobility = Mobility::RandomWaypoint;
                   else if (v == "static")
                     s.mobility = Mobility::Static;
                   else
                     bad_value("mobility", v, "rwp or static");
                 },
                 [](const Scenario& s) {
                   return std::vector<std::string>{
                       s.mobility == Mobility::Static ? "static" : "rwp"};
                 }});
    f.push_back(real_field("data_rate", &Scenario::data_rate));
    f.push_back({"packet_size", false,
                 [](Scenario& s, std::string_view v) {
                   s.packet_size = to_int<std::uint32_t>("packet_size", v);
                 },
                 [](const Scenario& s) { return std::vector{std::to_string(s.packet_size)}; }});
    f.push_back(real_field("initial_energy", &Scenario::initial_energy));
    f.push_back(real_field("power_tx", &Scenario::power_tx));
    f.push_back(real_field("power_rx", &Scenario::power_rx));
    f.push_back(real_field("power_idle", &Scenario::power_idle));
    f.push_back({"rng_seed", false,
                 [](Scenario& s, std::string_view v) {
                   s.rng_seed = to_int<std::uint64_t>("rng_seed", v);
                 },
                 [](const Scenario& s) { return std::vector{std::to_string(s.rng_seed)}; }});
    f.push_back({"protocol", false,
                 [](Scenario& s, std::string_view v) {
                   auto p = parse_policy(v);
                   if (!p) bad_value("protocol", v, "par, cnb or flood");
                   s.protocol.policy = *p;
                 },
                 [](const Scenario& s) {
                   return std::vector{std::string(to_string(s.protocol.policy))};
                 }});
    f.push_back(proto_real("width_ratio", &ProtocolConfig::width_ratio));
    f.push_back(proto_real("petal_margin", &ProtocolConfig::petal_margin));
    f.push_back(proto_real("tau_init", &ProtocolConfig::tau_init));
    f.push_back(proto_real("evaporation_rate", &ProtocolConfig::evaporation_rate));
    f.push_back(proto_real("evaporation_tick", &ProtocolConfig::evaporation_tick));
    f.push_back(proto_real("tau_min", &ProtocolConfig::tau_min));
    f.push_back(proto_real("discovery_timeout", &ProtocolConfig::discovery_timeout));
    f.push_back(proto_int("max_retries", &ProtocolConfig::max_retries));
    f.push_back(proto_real("data_reinforcement", &ProtocolConfig::data_reinforcement));
    f.push_back(proto_int("buffer_capacity", &ProtocolConfig::buffer_capacity));
    f.push_back(proto_int("max_hops", &ProtocolConfig::max_hops));
    f.push_back({"flow", true,
                 [](Scenario& s, std::string_view v) {
                   const auto t = split_ws(v);
                   if (t.size() != 4 && t.size() != 5)
                     bad_value("flow", v, "SRC DST START RATE [STOP]");
                   FlowSpec flow;
                   flow.src = to_node("flow", t[0]);
                   flow.dst = to_node("flow", t[1]);
                   flow.start = to_real("flow", t[2]);
                   flow.rate = to_real("flow", t[3]);
                   if (t.size() == 5) flow.stop = to_real("flow", t[4]);
                   s.flows.push_back(flow);
                 },
                 [](const Scenario& s) {
                   std::vector<std::string> out;
                   for (const auto& fl : s.flows) {
                     std::string line = std::to_string(fl.src.value) + " " +
                                        std::to_string(fl.dst.value) + " " + fmt(fl.start) +
                                        " " + fmt(fl.rate);
                     if (std::isfinite(fl.stop)) line += " " + fmt(fl.stop);
                     out.push_back(std::move(line));
                   }
                   return out;
                 }});
    f.push_back({"place", true,
                 [](Scenario& s, std::string_view v) {
                   const auto t = split_ws(v);
                   if (t.size() != 3) bad_value("place", v, "NODE X Y");
                   s.placements.push_back(
                       {to_node("place", t[0]), {to_real("place", t[1]), to_real("place", t[2])}});
                 },
                 [](const Scenario& s) {
                   std::vector<std::string> out;
                   for (const auto& p : s.placements)
                     out.push_back(std::to_string(p.node.value) + " " + fmt(p.pos.x) + " " +
                                   fmt(p.pos.y));
                   return out;
                 }});
    f.push_back({"static", true,
                 [](Scenario& s, std::string_view v) {
                   const auto t = split_ws(v);
                   if (t.empty()) bad_value("static", v, "NODE [NODE ...]");
                   for (auto tok : t) s.static_nodes.push_back(to_node("static", tok));
                 },
                 [](const Scenario& s) {
                   std::vector<std::string> out;
                   for (auto n : s.static_nodes) out.push_back(std::to_string(n.value));
                   return out;
                 }});
    f.push_back({"teleport", true,
                 [](Scenario& s, std::string_view v) {
                   const auto t = split_ws(v);
                   if (t.size() != 4) bad_value("teleport", v, "TIME NODE X Y");
                   s.teleports.push_back({to_real("teleport", t[0]), to_node("teleport", t[1]),
                                          {to_real("teleport", t[2]), to_real("teleport", t[3])}});
                 },
                 [](const Scenario& s) {
                   std::vector<std::string> out;
                   for (const auto& tp : s.teleports)
                     out.push_back(fmt(tp.time) + " " + std::to_string(tp.node.value) + " " +
                                   fmt(tp.pos.x) + " " + fmt(tp.pos.y));
                   return out;
                 }});
    return f;
  }();
  return table;
}

const Field* find_field(std::string_view key) {
  for (const auto& f : fields())
    if (f.key == key) return &f;
  return nullptr;
}

void clear_list(Scenario& s, std::string_view key) {
  if (key == "flow") s.flows.clear();
  if (key == "place") s.placements.clear();
  if (key == "static") s.static_nodes.clear();
  if (key == "teleport") s.teleports.clear();
}

}  // namespace

namespace {
std::string join_diagnostics(const std::vector<std::string>& d) {
  std::string out;
  for (const auto& m : d) {
    if (!out.empty()) out += "; ";
    out += m;
  }
  return out;
}
}  // namespace

ScenarioError::ScenarioError(std::vector<std::string> diagnostics)
    : std::runtime_error(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

bool is_known_key(std::string_view key) { return find_field(key) != nullptr; }

void apply_setting(Scenario& s, std::string_view key, std::string_view value) {
  const Field* f = find_field(key);
  if (!f) throw ScenarioError({"unknown key '" + std::string(key) + "'"});
  f->set(s, trim(value));
}

void apply_overrides(Scenario& s,
                     std::span<const std::pair<std::string, std::string>> overrides) {
  std::set<std::string, std::less<>> cleared;
  for (const auto& [key, value] : overrides) {
    const Field* f = find_field(key);
    if (!f) throw ScenarioError({"unknown key '" + key + "'"});
    if (f->repeatable && cleared.insert(key).second) clear_list(s, key);
    f->set(s, trim(value));
  }
}

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  std::vector<std::string> errors;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      errors.push_back("line " + std::to_string(line_no) + ": expected key = value, got '" +
                       std::string(line) + "'");
      continue;
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    try {
      apply_setting(s, key, value);
    } catch (const ScenarioError& e) {
      for (const auto& d : e.diagnostics())
        errors.push_back("line " + std::to_string(line_no) + ": " + d);
    }
  }
  if (!errors.empty()) throw ScenarioError(std::move(errors));
  return s;
}

std::vector<std::string> validate(const Scenario& s) {
  std::vector<std::string> out;
  if (s.node_count < 2) out.emplace_back("node_count must be >= 2");
  if (!(s.area_width > 0.0 && s.area_height > 0.0)) out.emplace_back("area must be positive");
  if (!(s.tx_range > 0.0)) out.emplace_back("tx_range must be > 0");
  if (!(s.sim_time > 0.0)) out.emplace_back("sim_time must be > 0");
  if (!(s.speed_min >= 0.0)) out.emplace_back("speed_min must be >= 0");
  if (!(s.speed_max >= s.speed_min)) out.emplace_back("speed_max must be >= speed_min");
  if (!(s.pause_time >= 0.0)) out.emplace_back("pause_time must be >= 0");
  if (!(s.data_rate > 0.0)) out.emplace_back("data_rate must be > 0");
  if (s.packet_size == 0) out.emplace_back("packet_size must be > 0");
  if (!(s.initial_energy >= 0.0)) out.emplace_back("initial_energy must be >= 0");
  if (!(s.power_tx >= 0.0)) out.emplace_back("power_tx must be >= 0");
  if (!(s.power_rx >= 0.0)) out.emplace_back("power_rx must be >= 0");
  if (!(s.power_idle >= 0.0)) out.emplace_back("power_idle must be >= 0");

  auto node_ok = [&](NodeId n) { return n.value < s.node_count; };
  auto inside = [&](const Point& p) {
    return p.x >= 0.0 && p.x <= s.area_width && p.y >= 0.0 && p.y <= s.area_height;
  };
  for (std::size_t i = 0; i < s.flows.size(); ++i) {
    const auto& f = s.flows[i];
    const std::string tag = "flow " + std::to_string(i) + ": ";
    if (!node_ok(f.src) || !node_ok(f.dst)) out.push_back(tag + "node id out of range");
    if (f.src == f.dst) out.push_back(tag + "src and dst must differ");
    if (!(f.start >= 0.0)) out.push_back(tag + "start must be >= 0");
    if (!(f.rate > 0.0)) out.push_back(tag + "rate must be > 0");
    if (!(f.stop > f.start)) out.push_back(tag + "stop must be after start");
  }
  for (const auto& p : s.placements) {
    if (!node_ok(p.node)) out.push_back("place: node " + std::to_string(p.node.value) + " out of range");
    if (!inside(p.pos)) out.push_back("place: node " + std::to_string(p.node.value) + " outside area");
  }
  for (auto n : s.static_nodes)
    if (!node_ok(n)) out.push_back("static: node " + std::to_string(n.value) + " out of range");
  for (const auto& t : s.teleports) {
    if (!node_ok(t.node)) out.push_back("teleport: node " + std::to_string(t.node.value) + " out of range");
    if (!inside(t.pos)) out.push_back("teleport: node " + std::to_string(t.node.value) + " outside area");
    if (!(t.time >= 0.0)) out.push_back("teleport: time must be >= 0");
  }
  for (auto& m : validate(s.protocol)) out.push_back(std::move(m));
  return out;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError({"cannot open scenario file '" + path.string() + "'"});
  std::stringstream buf;
  buf << in.rdbuf();
  Scenario s = parse_scenario(buf.str());
  auto diagnostics = validate(s);
  if (!diagnostics.empty()) throw ScenarioError(std::move(diagnostics));
  return s;
}

std::string to_text(const Scenario& s) {
  std::string out;
  for (const auto& f : fields())
    for (const auto& v : f.get(s)) {
      out += f.key;
      out += " = ";
      out += v;
      out += '\n';
    }
  return out;
}

}  // namespace par
