#include "v2vlab/model_core.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <string>

#include "v2vlab/errors.hpp"

namespace v2vlab {

double RadioConfig::packet_airtime_s() const {
  return 8.0 * packet_length_bytes / (channel_capacity_mbps * 1e6);
}

void RadioConfig::validate() const {
  if (!(transmission_range_m > 0.0))
    throw ValidationError("transmission_range_m must be > 0");
  if (!(interference_ratio >= 1.0)) throw ValidationError("interference_ratio must be >= 1");
  if (!(channel_capacity_mbps > 0.0))
    throw ValidationError("channel_capacity_mbps must be > 0");
  if (!(utilization >= 0.0 && utilization <= 1.0))
    throw ValidationError("utilization must lie in [0, 1]");
  if (packet_length_bytes < 1) throw ValidationError("packet_length_bytes must be >= 1");
  if (channel_count < 1) throw ValidationError("channel_count must be >= 1");
}

void RoadScenario::validate() const {
  if (lane_count < 1) throw ValidationError("lane_count must be >= 1");
  if (!(inter_vehicle_gap_m > 0.0)) throw ValidationError("inter_vehicle_gap_m must be > 0");
  if (!(road_length_m >= inter_vehicle_gap_m))
    throw ValidationError("road_length_m must be >= inter_vehicle_gap_m");
}

namespace {

// The analytic model only needs N and D; road length matters to the simulator.
void check_model_inputs(const RadioConfig& radio, const RoadScenario& road) {
  radio.validate();
  if (road.lane_count < 1) throw ValidationError("lane_count must be >= 1");
  if (!(road.inter_vehicle_gap_m > 0.0))
    throw ValidationError("inter_vehicle_gap_m must be > 0");
}

// (2RI/D + 1) N: the transmitter plus everything in its interference range.
double neighborhood_size(const RadioConfig& radio, const RoadScenario& road) {
  return (2.0 * radio.interference_range_m() / road.inter_vehicle_gap_m + 1.0) * road.lane_count;
}

}  // namespace

double interferer_count(const RadioConfig& radio, const RoadScenario& road) {
  check_model_inputs(radio, road);
  return neighborhood_size(radio, road) - 1.0;
}

double per_vehicle_capacity(const RadioConfig& radio, const RoadScenario& road) {
  check_model_inputs(radio, road);
  return radio.channel_capacity_mbps * radio.utilization * radio.channel_count /
         neighborhood_size(radio, road);
}

double per_packet_delay(const RadioConfig& radio, const RoadScenario& road) {
  const double capacity = per_vehicle_capacity(radio, road);
  if (capacity <= 0.0) throw ZeroCapacityError("per-vehicle capacity is zero; delay is unbounded");
  return 8.0 * radio.packet_length_bytes / (1000.0 * capacity);
}

AnalyticResult analyze(const RadioConfig& radio, const RoadScenario& road) {
  AnalyticResult result;
  result.interferer_count = interferer_count(radio, road);
  result.per_vehicle_capacity_mbps = per_vehicle_capacity(radio, road);
  result.per_packet_delay_ms = per_packet_delay(radio, road);
  return result;
}

namespace {

template <typename Fn>
Matrix tabulate(const RadioConfig& radio, std::span<const double> gaps, std::span<const int> lanes,
                Fn cell) {
  Matrix out;
  out.reserve(gaps.size());
  for (double gap : gaps) {
    std::vector<double> row;
    row.reserve(lanes.size());
    for (int lane_count : lanes) {
      RoadScenario road;
      road.lane_count = lane_count;
      road.inter_vehicle_gap_m = gap;
      row.push_back(cell(radio, road));
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

Matrix capacity_table(const RadioConfig& radio, std::span<const double> gaps,
                      std::span<const int> lanes) {
  return tabulate(radio, gaps, lanes, per_vehicle_capacity);
}

Matrix delay_table(const RadioConfig& radio, std::span<const double> gaps,
                   std::span<const int> lanes) {
  return tabulate(radio, gaps, lanes, per_packet_delay);
}

double adaptive_range(const RoadScenario& road, double gap_multiplier, double max_range_m) {
  if (!(gap_multiplier > 0.0)) throw ValidationError("gap multiplier must be > 0");
  if (!(road.inter_vehicle_gap_m > 0.0))
    throw ValidationError("inter_vehicle_gap_m must be > 0");
  if (!(max_range_m > 0.0)) throw ValidationError("maximum range must be > 0");
  return std::min(gap_multiplier * road.inter_vehicle_gap_m, max_range_m);
}

double capacity_gain(const RadioConfig& before, const RadioConfig& after,
                     const RoadScenario& road) {
  const double base = per_vehicle_capacity(before, road);
  if (base <= 0.0) throw ZeroCapacityError("baseline capacity is zero");
  return per_vehicle_capacity(after, road) / base;
}

double v2v_cellular_advantage(double cell_radius_m, double v2v_range_m) {
  if (!(cell_radius_m > 0.0) || !(v2v_range_m > 0.0))
    throw ValidationError("cell radius and V2V range must be > 0");
  if (v2v_range_m > cell_radius_m) {
    std::clog << "warning: V2V range " << v2v_range_m << " m exceeds cell radius "
              << cell_radius_m << " m\n";
  }
  return 2.0 * cell_radius_m / v2v_range_m;
}

double round_half_up(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::copysign(std::floor(std::fabs(value) * scale + 0.5) / scale, value);
}

std::vector<double> default_gaps() { return {6, 20, 50, 100, 200, 300}; }
std::vector<int> default_lanes() { return {2, 4, 6, 8}; }

}  // namespace v2vlab
