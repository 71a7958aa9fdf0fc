#pragma once

#include <span>
#include <vector>

namespace v2vlab {

/// Radio and channel parameters of a V2V broadcast network.
///
/// Defaults are the typical DSRC settings: 300 m range, interference range
/// twice the transmission range, 27 Mbit/s, 90% utilization, 400-byte packets.
struct RadioConfig {
  double transmission_range_m = 300.0;
  double interference_ratio = 2.0;  // interference range / transmission range
  double channel_capacity_mbps = 27.0;
  double utilization = 0.9;  // usable fraction of the raw channel rate
  int packet_length_bytes = 400;
  int channel_count = 1;  // orthogonal channels

  double interference_range_m() const { return transmission_range_m * interference_ratio; }

  // Airtime of one packet at the raw channel rate.
  double packet_airtime_s() const;

  /// Throws ValidationError if any field is out of range.
  void validate() const;
};

/// Straight multi-lane road with uniform spacing. Lanes are aligned, so every
/// lane holds a vehicle at each multiple of the gap.
struct RoadScenario {
  int lane_count = 2;
  double inter_vehicle_gap_m = 300.0;
  double road_length_m = 6000.0;  // only used by the simulator

  void validate() const;
};

struct AnalyticResult {
  double interferer_count = 0.0;
  double per_vehicle_capacity_mbps = 0.0;
  double per_packet_delay_ms = 0.0;
};

/// Vehicles whose transmissions interfere with one transmitter:
/// (2RI/D + 1)N - 1. Continuous in D; not floored.
double interferer_count(const RadioConfig& radio, const RoadScenario& road);

/// Average per-vehicle transmission capacity in Mbit/s:
/// C U k / ((2RI/D + 1) N) for k channels.
double per_vehicle_capacity(const RadioConfig& radio, const RoadScenario& road);

/// Average per-packet transmission delay in ms, 8L / (1000 T).
/// Throws ZeroCapacityError when T = 0.
double per_packet_delay(const RadioConfig& radio, const RoadScenario& road);

AnalyticResult analyze(const RadioConfig& radio, const RoadScenario& road);

using Matrix = std::vector<std::vector<double>>;

// matrix[i][j] is the value at (gaps[i], lanes[j]).
Matrix capacity_table(const RadioConfig& radio, std::span<const double> gaps,
                      std::span<const int> lanes);
Matrix delay_table(const RadioConfig& radio, std::span<const double> gaps,
                   std::span<const int> lanes);

inline constexpr double kDefaultRangeMultiplier = 10.0;

/// Transmission range proportional to the inter-vehicle gap, clamped at
/// `max_range_m` (the configured R).
double adaptive_range(const RoadScenario& road, double gap_multiplier, double max_range_m);

/// per_vehicle_capacity(after) / per_vehicle_capacity(before) on the same road.
double capacity_gain(const RadioConfig& before, const RadioConfig& after,
                     const RoadScenario& road);

/// Ratio of V2V timeliness and per-vehicle throughput to cellular's when
/// interference/communication range ratios match: 2 * cell radius / V2V range.
/// Logs a warning (does not fail) when the V2V range exceeds the cell radius.
double v2v_cellular_advantage(double cell_radius_m, double v2v_range_m);

// Symbolic "cellular radius" when a number is needed. Not a measured value.
inline constexpr double kDefaultCellRadiusM = 3000.0;

/// Round half away from zero at `decimals` places (table precision).
double round_half_up(double value, int decimals);

/// Default sweep grid: gaps {6,20,50,100,200,300} m and lanes {2,4,6,8}.
std::vector<double> default_gaps();
std::vector<int> default_lanes();

}  // namespace v2vlab
