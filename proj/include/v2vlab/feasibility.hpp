#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "v2vlab/app_registry.hpp"
#include "v2vlab/model_core.hpp"

namespace v2vlab {

enum class Verdict { kFeasibleV2V, kInfeasibleV2V, kNotV2VApplication };

std::string_view to_string(Verdict v);

struct FeasibilityVerdict {
  std::string app_id;
  double gap_m = 0.0;
  int lane_count = 0;
  double transmission_range_m = 0.0;
  double delay_ms = 0.0;
  std::optional<double> latency_bound_ms;  // empty when the latency is not checked
  bool latency_ok = true;
  double latency_margin_ms = 0.0;  // bound - predicted; +inf when unchecked
  double capacity_mbps = 0.0;
  double demand_mbps = 0.0;
  bool throughput_ok = true;
  double throughput_margin_mbps = 0.0;  // capacity - demand
  Verdict verdict = Verdict::kNotV2VApplication;
  std::vector<std::string> notes;
};

struct FeasibilityOptions {
  // Per-application packet length in bytes; others use the radio's L.
  std::map<std::string, int> packet_length_overrides;
  // Bound applied to "distance-dependent" latencies; unchecked when empty.
  std::optional<double> distance_dependent_bound_ms;
  // Compare capacity with the summed periodic demand of all V2V apps in a sweep.
  bool aggregate_demand = false;
  // Shrink R to multiplier * D (clamped at the configured R) per grid cell.
  std::optional<double> adaptive_range_multiplier;
};

struct Demand {
  double mbps = 0.0;
  bool event_driven_only = false;
};

/// Offered periodic load: rate * 8 * L / 1e6, at the largest stated rate.
Demand v2v_demand(const AppRequirement& app, int packet_length_bytes);

/// Tightest tolerable latency in ms, or empty for best-effort (and for
/// distance-dependent latencies without a configured bound).
std::optional<double> latency_bound_ms(const AppRequirement& app, const FeasibilityOptions& options = {});

int packet_length_for(const AppRequirement& app, const RadioConfig& radio,
                      const FeasibilityOptions& options);

/// Latency and throughput check of one app against the analytic V2V model.
/// `demand_override_mbps` replaces the app's own demand (aggregate mode).
FeasibilityVerdict check(const AppRequirement& app, const RadioConfig& radio, const RoadScenario& road,
                         const FeasibilityOptions& options = {},
                         std::optional<double> demand_override_mbps = std::nullopt);

struct SweepResult {
  std::vector<FeasibilityVerdict> cells;  // app-major, then gap, then lanes
  int infeasible_count = 0;
  int latency_infeasible_count = 0;
};

SweepResult scenario_sweep(std::span<const AppRequirement> apps, const RadioConfig& radio,
                           std::span<const double> gaps, std::span<const int> lanes,
                           const FeasibilityOptions& options = {});

/// V2V-capable applications whose latency bound is exactly 100 ms.
std::vector<AppRequirement> hundred_ms_class(std::span<const AppRequirement> apps);

inline constexpr std::string_view kVerdictCsvHeader =
    "app,D,N,delay_ms,latency_bound_ms,latency_ok,capacity_mbps,demand_mbps,throughput_ok,verdict";

std::string verdicts_csv(std::span<const FeasibilityVerdict> cells);

}  // namespace v2vlab
