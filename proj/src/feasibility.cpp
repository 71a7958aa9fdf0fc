#include "v2vlab/feasibility.hpp"

#include <limits>
#include <sstream>

#include "v2vlab/errors.hpp"
#include "v2vlab/text.hpp"

namespace v2vlab {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kFeasibleV2V: return "FeasibleV2V";
    case Verdict::kInfeasibleV2V: return "InfeasibleV2V";
    case Verdict::kNotV2VApplication: return "NotV2VApplication";
  }
  return "?";
}

Demand v2v_demand(const AppRequirement& app, int packet_length_bytes) {
  if (packet_length_bytes < 1) throw ValidationError("packet length must be >= 1 byte");
  if (!app.frequency.periodic_hz) return {0.0, true};
  return {*app.frequency.periodic_hz * 8.0 * packet_length_bytes / 1e6, false};
}

std::optional<double> latency_bound_ms(const AppRequirement& app, const FeasibilityOptions& options) {
  switch (app.latency.kind) {
    case LatencySpec::Kind::kBounded:
    case LatencySpec::Kind::kInterval:
    case LatencySpec::Kind::kAtLeast:
      return app.latency.lower_ms;
    case LatencySpec::Kind::kBestEffort:
      return std::nullopt;
    case LatencySpec::Kind::kDistanceDependent:
      return options.distance_dependent_bound_ms;
  }
  return std::nullopt;
}

int packet_length_for(const AppRequirement& app, const RadioConfig& radio,
                      const FeasibilityOptions& options) {
  const auto it = options.packet_length_overrides.find(app.id);
  return it == options.packet_length_overrides.end() ? radio.packet_length_bytes : it->second;
}

FeasibilityVerdict check(const AppRequirement& app, const RadioConfig& radio, const RoadScenario& road,
                         const FeasibilityOptions& options, std::optional<double> demand_override_mbps) {
  app.validate();
  RadioConfig effective = radio;
  effective.packet_length_bytes = packet_length_for(app, radio, options);
  if (options.adaptive_range_multiplier) {
    effective.transmission_range_m =
        adaptive_range(road, *options.adaptive_range_multiplier, radio.transmission_range_m);
  }

  FeasibilityVerdict v;
  v.app_id = app.id;
  v.gap_m = road.inter_vehicle_gap_m;
  v.lane_count = road.lane_count;
  v.transmission_range_m = effective.transmission_range_m;
  v.capacity_mbps = per_vehicle_capacity(effective, road);
  v.delay_ms = v.capacity_mbps > 0.0 ? per_packet_delay(effective, road)
                                     : std::numeric_limits<double>::infinity();

  if (app.range.kind != RangeSpec::Kind::kSymbolic &&
      effective.transmission_range_m < app.range.lower_m) {
    v.notes.push_back("transmission range " + format_shortest(effective.transmission_range_m) +
                      " m is below the required " + format_shortest(app.range.lower_m) + " m");
  }

  v.latency_bound_ms = latency_bound_ms(app, options);
  if (v.latency_bound_ms) {
    v.latency_margin_ms = *v.latency_bound_ms - v.delay_ms;
    v.latency_ok = v.latency_margin_ms >= 0.0;
  } else {
    v.latency_margin_ms = std::numeric_limits<double>::infinity();
    v.latency_ok = true;
    v.notes.emplace_back(app.latency.kind == LatencySpec::Kind::kBestEffort
                             ? "best-effort latency"
                             : "distance-dependent latency not checked");
  }

  const Demand demand = v2v_demand(app, effective.packet_length_bytes);
  v.demand_mbps = demand_override_mbps.value_or(demand.mbps);
  if (demand.event_driven_only) v.notes.emplace_back("event-driven: no periodic load");
  v.throughput_margin_mbps = v.capacity_mbps - v.demand_mbps;
  v.throughput_ok = v.throughput_margin_mbps >= 0.0;

  if (!app.has_v2v_link()) {
    v.verdict = Verdict::kNotV2VApplication;
  } else {
    v.verdict = v.latency_ok && v.throughput_ok ? Verdict::kFeasibleV2V : Verdict::kInfeasibleV2V;
  }
  return v;
}

SweepResult scenario_sweep(std::span<const AppRequirement> apps, const RadioConfig& radio,
                           std::span<const double> gaps, std::span<const int> lanes,
                           const FeasibilityOptions& options) {
  std::optional<double> aggregate;
  if (options.aggregate_demand) {
    double total = 0.0;
    for (const AppRequirement& app : apps)
      if (app.has_v2v_link()) total += v2v_demand(app, packet_length_for(app, radio, options)).mbps;
    aggregate = total;
  }

  SweepResult result;
  for (const AppRequirement& app : apps) {
    for (double gap : gaps) {
      for (int lane_count : lanes) {
        RoadScenario road;
        road.inter_vehicle_gap_m = gap;
        road.lane_count = lane_count;
        FeasibilityVerdict v = check(app, radio, road, options, aggregate);
        if (v.verdict == Verdict::kInfeasibleV2V) ++result.infeasible_count;
        if (v.verdict != Verdict::kNotV2VApplication && !v.latency_ok) ++result.latency_infeasible_count;
        result.cells.push_back(std::move(v));
      }
    }
  }
  return result;
}

std::vector<AppRequirement> hundred_ms_class(std::span<const AppRequirement> apps) {
  std::vector<AppRequirement> out;
  for (const AppRequirement& app : apps) {
    const auto bound = latency_bound_ms(app);
    if (app.has_v2v_link() && bound && *bound == 100.0) out.push_back(app);
  }
  return out;
}

std::string verdicts_csv(std::span<const FeasibilityVerdict> cells) {
  std::ostringstream out;
  out << kVerdictCsvHeader << '\n';
  for (const FeasibilityVerdict& v : cells) {
    out << v.app_id << ',' << format_shortest(v.gap_m) << ',' << v.lane_count << ','
        << format_shortest(v.delay_ms) << ','
        << (v.latency_bound_ms ? format_shortest(*v.latency_bound_ms) : "") << ','
        << (v.latency_ok ? "true" : "false") << ',' << format_shortest(v.capacity_mbps) << ','
        << format_shortest(v.demand_mbps) << ',' << (v.throughput_ok ? "true" : "false") << ','
        << to_string(v.verdict) << '\n';
  }
  return out.str();
}

}  // namespace v2vlab
