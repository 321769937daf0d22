#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>

#include "par/scenario.hpp"
#include "support.hpp"

using namespace par;
using par::testing::N;

namespace {

bool mentions(const std::vector<std::string>& diagnostics, std::string_view needle) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [&](const std::string& d) { return d.find(needle) != std::string::npos; });
}

std::vector<std::string> parse_errors(std::string_view text) {
  try {
    parse_scenario(text);
  } catch (const ScenarioError& e) {
    return e.diagnostics();
  }
  return {};
}

const std::filesystem::path kScenarios = std::filesystem::path(PARSIM_SOURCE_DIR) / "scenarios";

}  // namespace

TEST(Scenario, DefaultsMatchReferenceSetup) {
  const Scenario s;
  EXPECT_EQ(s.node_count, 50u);
  EXPECT_EQ(s.area_width, 1000.0);
  EXPECT_EQ(s.area_height, 1000.0);
  EXPECT_EQ(s.tx_range, 250.0);
  EXPECT_EQ(s.sim_time, 160.0);
  EXPECT_EQ(s.speed_min, 0.0);
  EXPECT_EQ(s.speed_max, 10.0);
  EXPECT_EQ(s.packet_size, 512u);
  EXPECT_EQ(s.initial_energy, 100.0);
  EXPECT_EQ(s.power_tx, 31.32e-3);
  EXPECT_EQ(s.power_rx, 35.28e-3);
  EXPECT_EQ(s.power_idle, 712e-6);
  EXPECT_EQ(s.data_rate, 2e6);
  EXPECT_TRUE(validate(s).empty());
}

TEST(Scenario, ParsesEveryKind) {
  const auto s = parse_scenario(R"(
    # comment line
    name = demo
    node_count = 4      # trailing comment
    area = 300 x 200
    mobility = static
    protocol = flood
    width_ratio = 0.75
    max_retries = 1
    flow = 0 3 1.5 20
    flow = 1 2 0 5 9
    place = 0 10 20
    static = 1 2
    teleport = 4.5 3 100 100
  )");
  EXPECT_EQ(s.name, "demo");
  EXPECT_EQ(s.node_count, 4u);
  EXPECT_EQ(s.area_width, 300.0);
  EXPECT_EQ(s.area_height, 200.0);
  EXPECT_EQ(s.mobility, Mobility::Static);
  EXPECT_EQ(s.protocol.policy, Policy::Flood);
  EXPECT_EQ(s.protocol.width_ratio, 0.75);
  EXPECT_EQ(s.protocol.max_retries, 1u);
  ASSERT_EQ(s.flows.size(), 2u);
  EXPECT_EQ(s.flows[0].src, N(0));
  EXPECT_EQ(s.flows[0].rate, 20.0);
  EXPECT_TRUE(std::isinf(s.flows[0].stop));
  EXPECT_EQ(s.flows[1].stop, 9.0);
  ASSERT_EQ(s.placements.size(), 1u);
  EXPECT_EQ(s.placements[0].pos, (Point{10, 20}));
  EXPECT_EQ(s.static_nodes, (std::vector<NodeId>{N(1), N(2)}));
  ASSERT_EQ(s.teleports.size(), 1u);
  EXPECT_EQ(s.teleports[0].time, 4.5);
  EXPECT_TRUE(validate(s).empty());
}

TEST(Scenario, UnknownKeyIsErrorWithLine) {
  const auto d = parse_errors("node_count = 5\nbandwidth = 11\n");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_TRUE(mentions(d, "line 2"));
  EXPECT_TRUE(mentions(d, "bandwidth"));
}

TEST(Scenario, MalformedValuesAreReported) {
  const auto d = parse_errors("node_count = many\ntx_range = 1e400\nflow = 0 1\narea = 10 by 10\nnoequals\n");
  EXPECT_EQ(d.size(), 5u);
  EXPECT_TRUE(mentions(d, "line 1"));
  EXPECT_TRUE(mentions(d, "line 5"));
  EXPECT_TRUE(mentions(d, "node_count"));
  EXPECT_TRUE(mentions(d, "flow"));
}

TEST(Scenario, ValidationCatchesRangeErrors) {
  Scenario s;
  s.node_count = 1;
  s.tx_range = 0;
  s.speed_min = 5;
  s.speed_max = 1;
  s.power_rx = -1;
  s.flows.push_back({N(0), N(0), 1, 1});
  s.flows.push_back({N(0), N(9), 1, 0});
  s.teleports.push_back({1, N(0), {5000, 0}});
  s.protocol.evaporation_rate = 1.5;
  const auto d = validate(s);
  EXPECT_TRUE(mentions(d, "node_count must be >= 2"));
  EXPECT_TRUE(mentions(d, "tx_range must be > 0"));
  EXPECT_TRUE(mentions(d, "speed_max"));
  EXPECT_TRUE(mentions(d, "power_rx"));
  EXPECT_TRUE(mentions(d, "src and dst must differ"));
  EXPECT_TRUE(mentions(d, "out of range"));
  EXPECT_TRUE(mentions(d, "rate must be > 0"));
  EXPECT_TRUE(mentions(d, "outside area"));
  EXPECT_TRUE(mentions(d, "evaporation_rate"));
}

TEST(Scenario, TextRoundTrip) {
  Scenario s;
  s.name = "rt";
  s.node_count = 7;
  s.tx_range = 123.456789012345;
  s.protocol.policy = Policy::Cnb;
  s.protocol.tau_min = 0.0123;
  s.flows.push_back({N(1), N(2), 0.1, 3.3, 7.7});
  s.flows.push_back({N(3), N(4), 0.0, 1.0});
  s.placements.push_back({N(5), {1.0 / 3.0, 2.0 / 3.0}});
  s.static_nodes = {N(5), N(6)};
  s.teleports.push_back({2.5, N(6), {9, 9}});
  const auto back = parse_scenario(to_text(s));
  EXPECT_EQ(to_text(back), to_text(s));
  EXPECT_EQ(back.tx_range, s.tx_range);
  EXPECT_EQ(back.placements[0].pos, s.placements[0].pos);
}

TEST(Scenario, OverridesReplaceListsOnFirstUse) {
  Scenario s;
  s.flows.push_back({N(0), N(1), 1, 25});
  const std::vector<std::pair<std::string, std::string>> o{
      {"flow", "2 3 0 5"}, {"flow", "4 5 0 5"}, {"width_ratio", "0.8"}};
  apply_overrides(s, o);
  ASSERT_EQ(s.flows.size(), 2u);
  EXPECT_EQ(s.flows[0].src, N(2));
  EXPECT_EQ(s.protocol.width_ratio, 0.8);
}

TEST(Scenario, UnknownOverrideNamesTheKey) {
  Scenario s;
  const std::vector<std::pair<std::string, std::string>> o{{"widht_ratio", "0.8"}};
  try {
    apply_overrides(s, o);
    FAIL();
  } catch (const ScenarioError& e) {
    EXPECT_TRUE(mentions(e.diagnostics(), "widht_ratio"));
  }
  EXPECT_TRUE(is_known_key("width_ratio"));
  EXPECT_FALSE(is_known_key("widht_ratio"));
}

TEST(Scenario, BundledFilesLoad) {
  const auto a = load_scenario(kScenarios / "env_a.scn");
  EXPECT_EQ(a.node_count, 50u);
  EXPECT_EQ(a.flows.size(), 1u);
  EXPECT_EQ(a.flows[0].rate, 25.0);
  const auto b = load_scenario(kScenarios / "env_b.scn");
  EXPECT_EQ(b.node_count, 104u);
  EXPECT_EQ(b.tx_range, 200.0);
  EXPECT_EQ(b.packet_size, 1000u);
  EXPECT_EQ(b.flows.size(), 4u);
  EXPECT_EQ(b.static_nodes.size(), 4u);
}

TEST(Scenario, MissingFileIsError) {
  EXPECT_THROW(load_scenario("/nonexistent/x.scn"), ScenarioError);
}
