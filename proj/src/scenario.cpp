#include "v2vlab/scenario.hpp"

#include <algorithm>
#include <fstream>

#include "v2vlab/errors.hpp"

namespace v2vlab {

using nlohmann::json;

std::string_view to_string(MacKind mac) { return mac == MacKind::kTdma ? "tdma" : "contention"; }

void Scenario::validate() const {
  radio.validate();
  road.validate();
  thresholds.validate();
  for (double gap : gaps)
    if (!(gap > 0.0)) throw ValidationError("sweep gaps must be > 0");
  for (int lane_count : lanes)
    if (lane_count < 1) throw ValidationError("sweep lane counts must be >= 1");
  if (adaptive_range_multiplier && !(*adaptive_range_multiplier > 0.0))
    throw ValidationError("adaptive range multiplier must be > 0");
  if (simulation.duration_s && !(*simulation.duration_s >= 0.0))
    throw ValidationError("simulation duration must be >= 0");
  if (simulation.backoff_window < 1) throw ValidationError("backoff window must be >= 1");
  if (!(simulation.offered_rate_hz >= 0.0)) throw ValidationError("offered rate must be >= 0");
  if (simulation.queue_capacity < 1) throw ValidationError("queue capacity must be >= 1");
  if (simulation.warmup_frames < 0) throw ValidationError("warm-up frames must be >= 0");
  for (const auto& [id, bytes] : feasibility.packet_length_overrides)
    if (bytes < 1) throw ValidationError("packet length override for " + id + " must be >= 1");
  if (feasibility.distance_dependent_bound_ms && !(*feasibility.distance_dependent_bound_ms > 0.0))
    throw ValidationError("distance-dependent latency bound must be > 0");
}

FeasibilityOptions Scenario::feasibility_options() const {
  FeasibilityOptions o;
  o.packet_length_overrides = feasibility.packet_length_overrides;
  o.distance_dependent_bound_ms = feasibility.distance_dependent_bound_ms;
  o.aggregate_demand = feasibility.aggregate_demand;
  o.adaptive_range_multiplier = adaptive_range_multiplier;
  return o;
}

SimConfig Scenario::sim_config(double default_duration_s) const {
  SimConfig c;
  c.duration_s = simulation.duration_s.value_or(default_duration_s);
  c.seed = simulation.seed;
  c.warmup_frames = simulation.warmup_frames;
  c.offered_rate_hz = simulation.offered_rate_hz;
  c.queue_capacity = simulation.queue_capacity;
  return c;
}

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + " must be an object");
  for (const auto& item : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return item.key() == k; }))
      throw ValidationError("unknown key '" + item.key() + "' in " + where);
  }
}

template <typename T>
void read(const json& j, const char* key, T& target) {
  if (j.contains(key)) target = j.at(key).get<T>();
}

template <typename T>
void read_optional(const json& j, const char* key, std::optional<T>& target) {
  if (j.contains(key) && !j.at(key).is_null()) target = j.at(key).get<T>();
}

}  // namespace

Scenario parse_scenario(const json& doc) {
  Scenario s;
  bool road_length_given = false;
  try {
    check_keys(doc, {"radio", "road", "sweep", "classifier", "simulation", "feasibility", "adaptive_range",
                     "registry_file"},
               "scenario");
    if (doc.contains("radio")) {
      const json& r = doc.at("radio");
      check_keys(r, {"transmission_range_m", "interference_ratio", "channel_capacity_mbps", "utilization",
                     "packet_length_bytes", "channel_count"},
                 "radio");
      read(r, "transmission_range_m", s.radio.transmission_range_m);
      read(r, "interference_ratio", s.radio.interference_ratio);
      read(r, "channel_capacity_mbps", s.radio.channel_capacity_mbps);
      read(r, "utilization", s.radio.utilization);
      read(r, "packet_length_bytes", s.radio.packet_length_bytes);
      read(r, "channel_count", s.radio.channel_count);
    }
    if (doc.contains("road")) {
      const json& r = doc.at("road");
      check_keys(r, {"lane_count", "inter_vehicle_gap_m", "road_length_m"}, "road");
      read(r, "lane_count", s.road.lane_count);
      read(r, "inter_vehicle_gap_m", s.road.inter_vehicle_gap_m);
      road_length_given = r.contains("road_length_m");
      read(r, "road_length_m", s.road.road_length_m);
    }
    if (doc.contains("sweep")) {
      const json& r = doc.at("sweep");
      check_keys(r, {"gaps", "lanes"}, "sweep");
      read(r, "gaps", s.gaps);
      read(r, "lanes", s.lanes);
    }
    if (doc.contains("classifier")) {
      const json& r = doc.at("classifier");
      check_keys(r, {"spatial_small_max_m", "spatial_medium_max_m", "temporal_small_max_ms",
                     "temporal_medium_max_ms"},
                 "classifier");
      read(r, "spatial_small_max_m", s.thresholds.spatial_small_max_m);
      read(r, "spatial_medium_max_m", s.thresholds.spatial_medium_max_m);
      read(r, "temporal_small_max_ms", s.thresholds.temporal_small_max_ms);
      read(r, "temporal_medium_max_ms", s.thresholds.temporal_medium_max_ms);
    }
    if (doc.contains("simulation")) {
      const json& r = doc.at("simulation");
      check_keys(r, {"mac", "duration_s", "seed", "backoff_window", "offered_rate_hz", "queue_capacity",
                     "warmup_frames", "slot_policy"},
                 "simulation");
      if (r.contains("mac")) {
        const auto mac = r.at("mac").get<std::string>();
        if (mac == "tdma") s.simulation.mac = MacKind::kTdma;
        else if (mac == "contention") s.simulation.mac = MacKind::kContention;
        else throw ValidationError("unknown MAC '" + mac + "'");
      }
      read_optional(r, "duration_s", s.simulation.duration_s);
      read(r, "seed", s.simulation.seed);
      read(r, "backoff_window", s.simulation.backoff_window);
      read(r, "offered_rate_hz", s.simulation.offered_rate_hz);
      read(r, "queue_capacity", s.simulation.queue_capacity);
      read(r, "warmup_frames", s.simulation.warmup_frames);
      if (r.contains("slot_policy")) {
        const auto policy = r.at("slot_policy").get<std::string>();
        if (policy == "neighborhood_exclusive") s.simulation.slot_policy = SlotPolicy::kNeighborhoodExclusive;
        else if (policy == "proper_coloring") s.simulation.slot_policy = SlotPolicy::kProperColoring;
        else throw ValidationError("unknown slot policy '" + policy + "'");
      }
    }
    if (doc.contains("feasibility")) {
      const json& r = doc.at("feasibility");
      check_keys(r, {"apps", "packet_length_overrides", "aggregate_demand", "distance_dependent_bound_ms"},
                 "feasibility");
      read(r, "apps", s.feasibility.apps);
      read(r, "packet_length_overrides", s.feasibility.packet_length_overrides);
      read(r, "aggregate_demand", s.feasibility.aggregate_demand);
      read_optional(r, "distance_dependent_bound_ms", s.feasibility.distance_dependent_bound_ms);
    }
    read_optional(doc, "adaptive_range", s.adaptive_range_multiplier);
    read_optional(doc, "registry_file", s.registry_file);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed scenario: ") + e.what());
  }
  if (!road_length_given) {
    s.road.road_length_m = std::max(10.0 * s.radio.interference_range_m(), s.road.inter_vehicle_gap_m);
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("scenario file is not valid JSON: " + std::string(e.what()));
  }
  return parse_scenario(doc);
}

}  // namespace v2vlab
