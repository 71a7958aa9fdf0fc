#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <utility>

#include "v2vlab/errors.hpp"
#include "v2vlab/feasibility.hpp"
#include "v2vlab/text.hpp"

using namespace v2vlab;

namespace {

const AppRequirement& app(std::string_view id) {
  const AppRequirement* a = find_app(builtin_registry(), id);
  REQUIRE(a != nullptr);
  return *a;
}

RoadScenario road(double gap, int lanes) {
  RoadScenario r;
  r.inter_vehicle_gap_m = gap;
  r.lane_count = lanes;
  return r;
}

std::set<std::pair<double, int>> latency_failures(const SweepResult& sweep) {
  std::set<std::pair<double, int>> cells;
  for (const auto& v : sweep.cells)
    if (!v.latency_ok) cells.insert({v.gap_m, v.lane_count});
  return cells;
}

}  // namespace

TEST_CASE("demand is rate times packet size") {
  CHECK(v2v_demand(app("PCS"), 400).mbps == doctest::Approx(0.16));
  CHECK(v2v_demand(app("EBL"), 400).mbps == doctest::Approx(0.032));
  CHECK(v2v_demand(app("CSW"), 400).mbps == doctest::Approx(0.0032));
  CHECK(v2v_demand(app("EBL"), 200).mbps == doctest::Approx(0.016));
  const Demand event = v2v_demand(app("RVC"), 400);
  CHECK(event.event_driven_only);
  CHECK(event.mbps == 0.0);
  CHECK_THROWS_AS(v2v_demand(app("PCS"), 0), ValidationError);
}

TEST_CASE("latency bounds") {
  CHECK(latency_bound_ms(app("PCS")) == 20.0);
  CHECK(latency_bound_ms(app("Platoon")) == 100.0);
  CHECK(latency_bound_ms(app("CSS")) == 1000.0);
  CHECK_FALSE(latency_bound_ms(app("DID")).has_value());
  CHECK_FALSE(latency_bound_ms(app("PFO")).has_value());
  FeasibilityOptions options;
  options.distance_dependent_bound_ms = 500.0;
  CHECK(latency_bound_ms(app("PFO"), options) == 500.0);
}

TEST_CASE("single checks") {
  const RadioConfig radio;
  const auto ok = check(app("EBL"), radio, road(300, 2));
  CHECK(ok.verdict == Verdict::kFeasibleV2V);
  CHECK(ok.delay_ms == doctest::Approx(3200.0 / 2430.0));
  CHECK(ok.latency_margin_ms == doctest::Approx(100.0 - 3200.0 / 2430.0));

  const auto dense = check(app("EBL"), radio, road(6, 8));
  CHECK(dense.verdict == Verdict::kInfeasibleV2V);
  CHECK_FALSE(dense.latency_ok);
  CHECK_FALSE(dense.throughput_ok);
  CHECK(dense.delay_ms == doctest::Approx(211.7531).epsilon(1e-6));

  // (6, 2): latency fits, and 0.0604 Mbit/s covers the 0.032 Mbit/s demand.
  const auto sparse_lanes = check(app("EBL"), radio, road(6, 2));
  CHECK(sparse_lanes.verdict == Verdict::kFeasibleV2V);

  CHECK(check(app("LEZ"), radio, road(300, 2)).verdict == Verdict::kNotV2VApplication);
  CHECK(std::isinf(check(app("DID"), radio, road(300, 2)).latency_margin_ms));
}

TEST_CASE("short adaptive range is reported against required range") {
  FeasibilityOptions options;
  options.adaptive_range_multiplier = 10.0;
  const auto v = check(app("EBL"), RadioConfig{}, road(6, 8), options);
  CHECK(v.transmission_range_m == 60.0);
  CHECK(v.latency_ok);
  REQUIRE_FALSE(v.notes.empty());
  CHECK(v.notes.front().find("below the required 200 m") != std::string::npos);
}

TEST_CASE("packet length override") {
  FeasibilityOptions options;
  options.packet_length_overrides["EBL"] = 200;
  const auto v = check(app("EBL"), RadioConfig{}, road(6, 8), options);
  CHECK(v.delay_ms == doctest::Approx(211.7531 / 2).epsilon(1e-6));
  CHECK(v.demand_mbps == doctest::Approx(0.016));
}

TEST_CASE("100 ms class sweep flags only the densest cells") {
  const auto apps = hundred_ms_class(builtin_registry());
  CHECK(apps.size() >= 10);
  for (const auto& a : apps) CHECK(latency_bound_ms(a) == 100.0);
  const auto sweep = scenario_sweep(apps, RadioConfig{}, default_gaps(), default_lanes());
  const std::set<std::pair<double, int>> expected = {{6.0, 4}, {6.0, 6}, {6.0, 8}};
  CHECK(latency_failures(sweep) == expected);
  CHECK(sweep.latency_infeasible_count == static_cast<int>(3 * apps.size()));

  FeasibilityOptions adaptive;
  adaptive.adaptive_range_multiplier = 10.0;
  const auto relieved = scenario_sweep(apps, RadioConfig{}, default_gaps(), default_lanes(), adaptive);
  CHECK(latency_failures(relieved).empty());
  CHECK(relieved.latency_infeasible_count == 0);
}

TEST_CASE("aggregate demand") {
  FeasibilityOptions options;
  options.aggregate_demand = true;
  const std::vector<AppRequirement> apps = {app("PCS"), app("EBL")};
  const auto sweep = scenario_sweep(apps, RadioConfig{}, std::vector<double>{300.0}, std::vector<int>{2}, options);
  REQUIRE(sweep.cells.size() == 2);
  for (const auto& v : sweep.cells) CHECK(v.demand_mbps == doctest::Approx(0.192));
}

TEST_CASE("empty grid gives a header-only CSV") {
  const auto sweep = scenario_sweep(builtin_registry(), RadioConfig{}, std::vector<double>{}, std::vector<int>{2});
  CHECK(sweep.cells.empty());
  CHECK(verdicts_csv(sweep.cells) == std::string(kVerdictCsvHeader) + "\n");
}

TEST_CASE("property: verdicts are monotone in density") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> gap(2.0, 400.0);
  std::uniform_int_distribution<int> lanes(1, 10);
  std::uniform_int_distribution<std::size_t> pick(0, builtin_registry().size() - 1);
  for (int trial = 0; trial < 1000; ++trial) {
    const AppRequirement& a = builtin_registry()[pick(gen)];
    const RoadScenario base = road(gap(gen), lanes(gen));
    RoadScenario denser = base;
    denser.inter_vehicle_gap_m *= 0.7;
    denser.lane_count += 1;
    const auto v = check(a, RadioConfig{}, base);
    const auto w = check(a, RadioConfig{}, denser);
    CHECK(w.delay_ms > v.delay_ms);
    CHECK(w.capacity_mbps < v.capacity_mbps);
    if (v.verdict == Verdict::kInfeasibleV2V) CHECK(w.verdict == Verdict::kInfeasibleV2V);
    if (!v.latency_ok) CHECK_FALSE(w.latency_ok);
    CHECK(v.latency_ok == (!v.latency_bound_ms || v.delay_ms <= *v.latency_bound_ms));
  }
}

TEST_CASE("verdict CSV") {
  const auto sweep = scenario_sweep(std::vector<AppRequirement>{app("EBL")}, RadioConfig{}, default_gaps(),
                                    default_lanes());
  const auto lines = split(verdicts_csv(sweep.cells), '\n');
  CHECK(lines[0] == kVerdictCsvHeader);
  CHECK(lines[1].rfind("EBL,6,2,", 0) == 0);
  CHECK(lines[4].find("InfeasibleV2V") != std::string::npos);
}
