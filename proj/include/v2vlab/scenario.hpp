#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "v2vlab/app_registry.hpp"
#include "v2vlab/feasibility.hpp"
#include "v2vlab/model_core.hpp"
#include "v2vlab/simulator.hpp"

namespace v2vlab {

enum class MacKind { kTdma, kContention };

struct SimulationBlock {
  MacKind mac = MacKind::kTdma;
  std::optional<double> duration_s;  // empty: 110 TDMA frames / 10^4 + warm-up contention slots
  std::uint64_t seed = 1;
  int backoff_window = 16;
  double offered_rate_hz = 0.0;
  int queue_capacity = 16;
  int warmup_frames = 10;
  SlotPolicy slot_policy = SlotPolicy::kNeighborhoodExclusive;
};

struct FeasibilityBlock {
  std::vector<std::string> apps;  // empty: every registry entry
  std::map<std::string, int> packet_length_overrides;
  bool aggregate_demand = false;
  std::optional<double> distance_dependent_bound_ms;
};

/// Everything a CLI command needs. Defaults are the typical DSRC settings.
struct Scenario {
  RadioConfig radio;
  RoadScenario road;
  std::vector<double> gaps = default_gaps();
  std::vector<int> lanes = default_lanes();
  ClassifierThresholds thresholds;
  SimulationBlock simulation;
  FeasibilityBlock feasibility;
  std::optional<double> adaptive_range_multiplier;
  std::optional<std::string> registry_file;

  void validate() const;
  FeasibilityOptions feasibility_options() const;
  SimConfig sim_config(double default_duration_s) const;
};

/// Parses a scenario document. Missing keys keep their defaults, unknown keys
/// are rejected, and a missing road length becomes 10 * R * I.
Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::string& path);

std::string_view to_string(MacKind mac);

}  // namespace v2vlab
