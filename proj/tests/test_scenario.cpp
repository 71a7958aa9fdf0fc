#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "v2vlab/errors.hpp"
#include "v2vlab/scenario.hpp"

using namespace v2vlab;
using nlohmann::json;

TEST_CASE("empty document gives the defaults") {
  const Scenario s = parse_scenario(json::object());
  CHECK(s.radio.transmission_range_m == 300.0);
  CHECK(s.radio.interference_ratio == 2.0);
  CHECK(s.radio.channel_capacity_mbps == 27.0);
  CHECK(s.radio.utilization == 0.9);
  CHECK(s.radio.packet_length_bytes == 400);
  CHECK(s.gaps == std::vector<double>{6, 20, 50, 100, 200, 300});
  CHECK(s.lanes == std::vector<int>{2, 4, 6, 8});
  CHECK(s.road.road_length_m == 6000.0);
  CHECK(s.simulation.mac == MacKind::kTdma);
  CHECK_FALSE(s.adaptive_range_multiplier.has_value());
}

TEST_CASE("fields are read from every block") {
  const json doc = json::parse(R"({
    "radio": {"transmission_range_m": 150, "channel_count": 2},
    "road": {"lane_count": 4, "inter_vehicle_gap_m": 50},
    "sweep": {"gaps": [10, 20], "lanes": [1]},
    "classifier": {"spatial_small_max_m": 250},
    "simulation": {"mac": "contention", "seed": 9, "backoff_window": 32, "slot_policy": "proper_coloring"},
    "feasibility": {"apps": ["EBL"], "packet_length_overrides": {"EBL": 200}},
    "adaptive_range": 10
  })");
  const Scenario s = parse_scenario(doc);
  CHECK(s.radio.transmission_range_m == 150.0);
  CHECK(s.radio.channel_count == 2);
  CHECK(s.road.lane_count == 4);
  CHECK(s.road.road_length_m == 3000.0);  // 10 * R * I when not given
  CHECK(s.gaps == std::vector<double>{10, 20});
  CHECK(s.thresholds.spatial_small_max_m == 250.0);
  CHECK(s.simulation.mac == MacKind::kContention);
  CHECK(s.simulation.seed == 9);
  CHECK(s.simulation.backoff_window == 32);
  CHECK(s.simulation.slot_policy == SlotPolicy::kProperColoring);
  CHECK(s.feasibility_options().packet_length_overrides.at("EBL") == 200);
  CHECK(s.feasibility_options().adaptive_range_multiplier == 10.0);
  CHECK(s.sim_config(5.0).duration_s == 5.0);
  CHECK(s.sim_config(5.0).seed == 9);
}

TEST_CASE("invalid documents are rejected") {
  CHECK_THROWS_AS(parse_scenario(json::parse(R"({"radar": {}})")), ValidationError);
  CHECK_THROWS_AS(parse_scenario(json::parse(R"({"radio": {"range": 3}})")), ValidationError);
  CHECK_THROWS_AS(parse_scenario(json::parse(R"({"radio": {"utilization": 2}})")), ValidationError);
  CHECK_THROWS_AS(parse_scenario(json::parse(R"({"radio": {"transmission_range_m": "far"}})")), ValidationError);
  CHECK_THROWS_AS(parse_scenario(json::parse(R"({"sweep": {"gaps": [0]}})")), ValidationError);
  CHECK_THROWS_AS(parse_scenario(json::parse(R"({"simulation": {"mac": "aloha"}})")), ValidationError);
  CHECK_THROWS_AS(parse_scenario(json::parse(R"({"simulation": {"slot_policy": "random"}})")), ValidationError);
  CHECK_THROWS_AS(parse_scenario(json::parse(R"({"adaptive_range": -1})")), ValidationError);
  CHECK_THROWS_AS(parse_scenario(json::parse("[]")), ValidationError);
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), IoError);
}
