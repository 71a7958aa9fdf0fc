#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "v2vlab/model_core.hpp"

namespace v2vlab {

struct Vehicle {
  int id = 0;
  int lane = 0;
  double position_m = 0.0;
};

/// N * floor(length / D + 1) vehicles, ordered by position then lane; ids
/// equal the index in that order.
std::vector<Vehicle> build_road(const RoadScenario& road);

/// Interference graph: u and v conflict iff |x_u - x_v| <= R * I.
///
/// Vehicles are kept in position order, so every closed neighborhood is a
/// contiguous index range and the graph is stored as one range per vehicle.
class ConflictGraph {
 public:
  ConflictGraph(std::span<const Vehicle> vehicles, double interference_range_m);

  int size() const { return static_cast<int>(positions_.size()); }
  double interference_range_m() const { return range_m_; }
  double position(int v) const { return positions_[v]; }
  const std::vector<double>& positions() const { return positions_; }

  // Half-open index range [first, last) of v's closed neighborhood (v included).
  std::pair<int, int> closed_neighborhood(int v) const { return {first_[v], last_[v]}; }
  int degree(int v) const { return last_[v] - first_[v] - 1; }
  int max_degree() const;
  std::int64_t edge_count() const;
  bool adjacent(int u, int v) const;
  std::vector<int> neighbors(int v) const;

  // Whether two positions are within interference range (tolerates rounding).
  bool within_range(double a, double b) const;

 private:
  std::vector<double> positions_;
  std::vector<int> first_;
  std::vector<int> last_;
  double range_m_;
};

ConflictGraph build_conflict_graph(std::span<const Vehicle> vehicles, const RadioConfig& radio);

enum class SlotPolicy {
  // Every closed interference neighborhood uses pairwise-distinct slots
  // (distance-2 coloring). Each vehicle then shares the channel with exactly
  // its interferers.
  kNeighborhoodExclusive,
  // Plain proper coloring: only adjacent vehicles differ.
  kProperColoring,
};

struct TdmaSchedule {
  std::vector<int> slot_of;
  int frame_length = 0;
  double payload_airtime_s = 0.0;
  double slot_duration_s = 0.0;  // airtime / U: payload then dead time
  SlotPolicy policy = SlotPolicy::kNeighborhoodExclusive;

  double frame_duration_s() const { return frame_length * slot_duration_s; }
};

/// Greedy slot assignment in position order.
TdmaSchedule tdma_schedule(const ConflictGraph& graph, const RadioConfig& radio,
                           SlotPolicy policy = SlotPolicy::kNeighborhoodExclusive);

bool is_proper(const TdmaSchedule& schedule, const ConflictGraph& graph);
bool is_neighborhood_exclusive(const TdmaSchedule& schedule, const ConflictGraph& graph);

struct SimConfig {
  double duration_s = 0.0;
  std::uint64_t seed = 1;
  int warmup_frames = 10;
  // Packets per second per vehicle; 0 keeps every vehicle backlogged.
  double offered_rate_hz = 0.0;
  int queue_capacity = 16;
  // Reporting population: vehicles in [fraction, 1 - fraction] of the road.
  double edge_exclusion_fraction = 0.25;

  void validate() const;
};

struct BackoffConfig {
  // Backoff drawn uniformly from [0, window - 1] slots after each attempt.
  int window = 16;

  void validate() const;
};

struct DelayStats {
  double mean_ms = 0.0;
  double p95_ms = 0.0;
  double max_ms = 0.0;
  std::uint64_t samples = 0;
};

struct VehicleCounters {
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped_collision = 0;
  std::uint64_t dropped_overflow = 0;
  std::uint64_t queued = 0;

  bool conserved() const {
    return generated == delivered + dropped_collision + dropped_overflow + queued;
  }
};

struct SimOutcome {
  std::string mac;
  std::uint64_t seed = 0;
  // Measurement window, reporting population only.
  double per_vehicle_throughput_mbps = 0.0;
  DelayStats delay;
  double delivery_ratio = 1.0;
  double utilization = 0.0;
  int reporting_vehicles = 0;
  double window_s = 0.0;
  // Whole run, all vehicles.
  std::uint64_t event_count = 0;
  std::uint64_t transmissions = 0;
  std::uint64_t collisions = 0;  // transmissions that overlapped a conflicting one
  VehicleCounters totals;
  std::vector<VehicleCounters> per_vehicle;
  // Slot geometry.
  int frame_length = 0;  // TDMA frame or contention window, in slots
  double slot_duration_s = 0.0;
  std::int64_t slots = 0;
};

/// Each vehicle sends one packet in each of its slots when backlogged.
/// Throws ValidationError for an improper schedule or a nonzero duration
/// shorter than 100 frames.
SimOutcome run_tdma(std::span<const Vehicle> vehicles, const TdmaSchedule& schedule,
                    const RadioConfig& radio, const SimConfig& config);

/// Slotted uniform-backoff broadcast with slots of one packet airtime and no
/// acknowledgments. A transmission succeeds iff no conflicting vehicle
/// transmits in the same slot. Nonzero durations must cover 10^4 slots.
SimOutcome run_contention(std::span<const Vehicle> vehicles, const RadioConfig& radio,
                          const SimConfig& config, const BackoffConfig& backoff = {});

struct Discrepancy {
  bool comparable = false;
  double throughput_rel_error = 0.0;
  double delay_rel_error = 0.0;
  double tolerance = 0.10;
  bool flagged = false;  // incomparable, or an error beyond tolerance
  std::string note;
};

Discrepancy compare(const AnalyticResult& analytic, const SimOutcome& sim, double tolerance = 0.10);

nlohmann::json to_json(const SimOutcome& outcome);
nlohmann::json to_json(const Discrepancy& d);

inline constexpr std::string_view kSimCsvHeader =
    "mac,seed,throughput_mbps,delay_mean_ms,delay_p95_ms,delay_max_ms,delivery_ratio,utilization,"
    "generated,delivered,dropped,queued,collisions,events";
std::string sim_csv_row(const SimOutcome& outcome);

}  // namespace v2vlab
