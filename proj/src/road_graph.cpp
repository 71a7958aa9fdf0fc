#include <algorithm>
#include <cmath>

#include "v2vlab/errors.hpp"
#include "v2vlab/simulator.hpp"

namespace v2vlab {

std::vector<Vehicle> build_road(const RoadScenario& road) {
  if (!(road.road_length_m > 0.0)) throw ValidationError("road length must be > 0");
  road.validate();
  const double gap = road.inter_vehicle_gap_m;
  const auto per_lane = static_cast<int>(std::floor(road.road_length_m / gap + 1e-9)) + 1;
  std::vector<Vehicle> vehicles;
  vehicles.reserve(static_cast<std::size_t>(per_lane) * road.lane_count);
  for (int k = 0; k < per_lane; ++k) {
    for (int lane = 0; lane < road.lane_count; ++lane) {
      vehicles.push_back({static_cast<int>(vehicles.size()), lane, k * gap});
    }
  }
  return vehicles;
}

ConflictGraph::ConflictGraph(std::span<const Vehicle> vehicles, double interference_range_m)
    : range_m_(interference_range_m) {
  if (!(interference_range_m >= 0.0)) throw ValidationError("interference range must be >= 0");
  positions_.reserve(vehicles.size());
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    if (vehicles[i].id != static_cast<int>(i))
      throw ValidationError("vehicle ids must equal their index in position order");
    if (i > 0 && vehicles[i].position_m < vehicles[i - 1].position_m)
      throw ValidationError("vehicles must be ordered by position");
    positions_.push_back(vehicles[i].position_m);
  }
  const int n = size();
  first_.resize(n);
  last_.resize(n);
  int lo = 0;
  int hi = 0;
  for (int v = 0; v < n; ++v) {
    while (!within_range(positions_[lo], positions_[v])) ++lo;
    if (hi < v + 1) hi = v + 1;
    while (hi < n && within_range(positions_[hi], positions_[v])) ++hi;
    first_[v] = lo;
    last_[v] = hi;
  }
}

bool ConflictGraph::within_range(double a, double b) const {
  return std::fabs(a - b) <= range_m_ + 1e-9 * std::max(1.0, range_m_);
}

int ConflictGraph::max_degree() const {
  int best = 0;
  for (int v = 0; v < size(); ++v) best = std::max(best, degree(v));
  return best;
}

std::int64_t ConflictGraph::edge_count() const {
  std::int64_t twice = 0;
  for (int v = 0; v < size(); ++v) twice += degree(v);
  return twice / 2;
}

bool ConflictGraph::adjacent(int u, int v) const {
  return u != v && u >= first_[v] && u < last_[v];
}

std::vector<int> ConflictGraph::neighbors(int v) const {
  std::vector<int> out;
  out.reserve(degree(v));
  for (int u = first_[v]; u < last_[v]; ++u)
    if (u != v) out.push_back(u);
  return out;
}

ConflictGraph build_conflict_graph(std::span<const Vehicle> vehicles, const RadioConfig& radio) {
  radio.validate();
  return ConflictGraph(vehicles, radio.interference_range_m());
}

TdmaSchedule tdma_schedule(const ConflictGraph& graph, const RadioConfig& radio, SlotPolicy policy) {
  radio.validate();
  if (!(radio.utilization > 0.0)) throw ValidationError("TDMA needs utilization > 0");
  TdmaSchedule schedule;
  schedule.policy = policy;
  schedule.payload_airtime_s = radio.packet_airtime_s();
  schedule.slot_duration_s = schedule.payload_airtime_s / radio.utilization;

  const int n = graph.size();
  schedule.slot_of.assign(n, -1);
  std::vector<int> seen;  // seen[c] == v marks slot c as taken for vehicle v
  int frame = 1;
  for (int v = 0; v < n; ++v) {
    // Earlier vehicles that may not share v's slot form a contiguous range.
    const int w = graph.closed_neighborhood(v).first;
    const int start = policy == SlotPolicy::kNeighborhoodExclusive ? graph.closed_neighborhood(w).first : w;
    for (int u = start; u < v; ++u) {
      const int c = schedule.slot_of[u];
      if (c >= static_cast<int>(seen.size())) seen.resize(c + 1, -1);
      seen[c] = v;
    }
    int slot = 0;
    while (slot < static_cast<int>(seen.size()) && seen[slot] == v) ++slot;
    schedule.slot_of[v] = slot;
    frame = std::max(frame, slot + 1);
  }
  schedule.frame_length = frame;
  return schedule;
}

bool is_proper(const TdmaSchedule& schedule, const ConflictGraph& graph) {
  if (static_cast<int>(schedule.slot_of.size()) != graph.size()) return false;
  for (int v = 0; v < graph.size(); ++v) {
    const int c = schedule.slot_of[v];
    if (c < 0 || c >= schedule.frame_length) return false;
    const auto [first, last] = graph.closed_neighborhood(v);
    for (int u = first; u < last; ++u)
      if (u != v && schedule.slot_of[u] == c) return false;
  }
  return true;
}

bool is_neighborhood_exclusive(const TdmaSchedule& schedule, const ConflictGraph& graph) {
  if (!is_proper(schedule, graph)) return false;
  std::vector<int> seen(schedule.frame_length, -1);
  for (int v = 0; v < graph.size(); ++v) {
    const auto [first, last] = graph.closed_neighborhood(v);
    for (int u = first; u < last; ++u) {
      const int c = schedule.slot_of[u];
      if (seen[c] == v) return false;
      seen[c] = v;
    }
  }
  return true;
}

}  // namespace v2vlab
