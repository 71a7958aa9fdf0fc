#include "v2vlab/commands.hpp"

#include <fstream>
#include <sstream>

#include "v2vlab/errors.hpp"
#include "v2vlab/text.hpp"

namespace v2vlab {

using nlohmann::json;

OutputFormat parse_output_format(std::string_view name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json") return OutputFormat::kJson;
  if (name == "table") return OutputFormat::kTable;
  throw ValidationError("unknown output format '" + std::string(name) + "'");
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ValidationError*>(&e)) return kExitValidation;
  if (dynamic_cast<const IoError*>(&e)) return kExitIo;
  return kExitComputation;
}

double default_tdma_duration_s(const TdmaSchedule& schedule, int warmup_frames) {
  return static_cast<double>((100 + warmup_frames) * static_cast<std::int64_t>(schedule.frame_length)) *
         schedule.slot_duration_s;
}

double default_contention_duration_s(const RadioConfig& radio, int window, int warmup_frames) {
  return static_cast<double>(10000 + static_cast<std::int64_t>(warmup_frames) * window) *
         radio.packet_airtime_s();
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void say(const CommandContext& ctx, const std::string& line) {
  if (ctx.log) *ctx.log << line << '\n';
}

void require_csv_or_json(const CommandContext& ctx, const char* command) {
  if (ctx.format == OutputFormat::kTable)
    throw ValidationError(std::string(command) + " supports --format csv or json");
}

std::string table_csv(const Matrix& m, const std::vector<double>& gaps, const std::vector<int>& lanes) {
  std::ostringstream out;
  out << "D_m";
  for (int n : lanes) out << ",N=" << n;
  out << '\n';
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    out << format_shortest(gaps[i]);
    for (double v : m[i]) out << ',' << format_fixed(v, 4);
    out << '\n';
  }
  return out.str();
}

json table_json(const Matrix& m) {
  json rows = json::array();
  for (const auto& row : m) {
    json r = json::array();
    for (double v : row) r.push_back(round_half_up(v, 4));
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<AppRequirement> selected_apps(const Scenario& s) {
  const std::vector<AppRequirement> registry = load_registry(s.registry_file);
  if (s.feasibility.apps.empty()) return registry;
  std::vector<AppRequirement> out;
  for (const std::string& id : s.feasibility.apps) {
    const AppRequirement* app = find_app(registry, id);
    if (!app) throw ValidationError("unknown application '" + id + "'");
    out.push_back(*app);
  }
  return out;
}

}  // namespace

int cmd_tables(const CommandContext& ctx) {
  require_csv_or_json(ctx, "tables");
  const Scenario& s = ctx.scenario;
  s.validate();
  const Matrix capacity = capacity_table(s.radio, s.gaps, s.lanes);
  const Matrix delay = delay_table(s.radio, s.gaps, s.lanes);
  if (ctx.format == OutputFormat::kJson) {
    const json doc = {{"gaps_m", s.gaps}, {"lanes", s.lanes}, {"capacity_mbps", table_json(capacity)},
                      {"delay_ms", table_json(delay)}};
    write_file(ctx.out_dir / "tables.json", doc.dump(2) + "\n");
  } else {
    write_file(ctx.out_dir / "capacity.csv", table_csv(capacity, s.gaps, s.lanes));
    write_file(ctx.out_dir / "delay.csv", table_csv(delay, s.gaps, s.lanes));
  }
  say(ctx, "tables: " + std::to_string(s.gaps.size() * s.lanes.size()) + " cells");
  return kExitOk;
}

int cmd_classify(const CommandContext& ctx) {
  const Scenario& s = ctx.scenario;
  s.thresholds.validate();
  const std::vector<AppRequirement> apps = load_registry(s.registry_file);

  int violations = 0;
  for (const AppRequirement& app : apps) {
    const Classification c = classify(app, s.thresholds);
    for (const SpatioTemporalClass& k : {c.demanding, c.relaxed}) {
      const bool small_small = k.spatial == Scale::kSmall && k.temporal == Scale::kSmall;
      if ((small_small && k.paradigm != Paradigm::kV2V) ||
          (k.spatial == Scale::kLarge && k.paradigm == Paradigm::kV2V)) {
        say(ctx, "regime rule violated by " + app.id);
        ++violations;
      }
    }
  }

  switch (ctx.format) {
    case OutputFormat::kCsv:
      write_file(ctx.out_dir / "classification.csv", registry_report(apps, ReportFormat::kCsv, s.thresholds));
      break;
    case OutputFormat::kJson:
      write_file(ctx.out_dir / "classification.json", registry_report(apps, ReportFormat::kJson, s.thresholds));
      break;
    case OutputFormat::kTable:
      write_file(ctx.out_dir / "classification.txt", registry_report(apps, ReportFormat::kTable, s.thresholds));
      break;
  }
  say(ctx, "classify: " + std::to_string(apps.size()) + " applications, " + std::to_string(violations) +
               " regime-rule violations");
  return violations == 0 ? kExitOk : kExitComputation;
}

int cmd_feasibility(const CommandContext& ctx) {
  require_csv_or_json(ctx, "feasibility");
  const Scenario& s = ctx.scenario;
  s.validate();
  const std::vector<AppRequirement> apps = selected_apps(s);
  const SweepResult sweep = scenario_sweep(apps, s.radio, s.gaps, s.lanes, s.feasibility_options());

  if (ctx.format == OutputFormat::kJson) {
    json cells = json::array();
    for (const FeasibilityVerdict& v : sweep.cells) {
      cells.push_back({{"app", v.app_id},
                       {"D", v.gap_m},
                       {"N", v.lane_count},
                       {"transmission_range_m", v.transmission_range_m},
                       {"delay_ms", v.delay_ms},
                       {"latency_bound_ms", v.latency_bound_ms ? json(*v.latency_bound_ms) : json(nullptr)},
                       {"latency_ok", v.latency_ok},
                       {"capacity_mbps", v.capacity_mbps},
                       {"demand_mbps", v.demand_mbps},
                       {"throughput_ok", v.throughput_ok},
                       {"verdict", to_string(v.verdict)},
                       {"notes", v.notes}});
    }
    const json doc = {{"cells", cells},
                      {"infeasible_cells", sweep.infeasible_count},
                      {"latency_infeasible_cells", sweep.latency_infeasible_count}};
    write_file(ctx.out_dir / "feasibility.json", doc.dump(2) + "\n");
  } else {
    write_file(ctx.out_dir / "feasibility.csv", verdicts_csv(sweep.cells));
  }
  say(ctx, "feasibility: " + std::to_string(sweep.cells.size()) + " cells, " +
               std::to_string(sweep.infeasible_count) + " infeasible, " +
               std::to_string(sweep.latency_infeasible_count) + " latency-infeasible");
  return kExitOk;
}

namespace {

struct RunResult {
  SimOutcome outcome;
  AnalyticResult analytic;
  Discrepancy discrepancy;
  RadioConfig radio;
};

RunResult run_one(const Scenario& s, const RoadScenario& road, MacKind mac) {
  RadioConfig radio = s.radio;
  if (s.adaptive_range_multiplier)
    radio.transmission_range_m = adaptive_range(road, *s.adaptive_range_multiplier, s.radio.transmission_range_m);
  const std::vector<Vehicle> vehicles = build_road(road);

  RunResult r;
  r.radio = radio;
  if (mac == MacKind::kTdma) {
    const ConflictGraph graph = build_conflict_graph(vehicles, radio);
    const TdmaSchedule schedule = tdma_schedule(graph, radio, s.simulation.slot_policy);
    const SimConfig config = s.sim_config(default_tdma_duration_s(schedule, s.simulation.warmup_frames));
    r.outcome = run_tdma(vehicles, schedule, radio, config);
  } else {
    const SimConfig config = s.sim_config(
        default_contention_duration_s(radio, s.simulation.backoff_window, s.simulation.warmup_frames));
    r.outcome = run_contention(vehicles, radio, config, BackoffConfig{s.simulation.backoff_window});
  }
  r.analytic = analyze(radio, road);
  r.discrepancy = compare(r.analytic, r.outcome);
  return r;
}

bool conserved(const SimOutcome& o) {
  if (!o.totals.conserved()) return false;
  for (const VehicleCounters& c : o.per_vehicle)
    if (!c.conserved()) return false;
  return true;
}

}  // namespace

int cmd_simulate(const CommandContext& ctx) {
  require_csv_or_json(ctx, "simulate");
  const Scenario& s = ctx.scenario;
  s.validate();
  const RunResult r = run_one(s, s.road, s.simulation.mac);

  json summary = to_json(r.outcome);
  summary["scenario"] = {{"D", s.road.inter_vehicle_gap_m},
                         {"N", s.road.lane_count},
                         {"road_length_m", s.road.road_length_m},
                         {"transmission_range_m", r.radio.transmission_range_m},
                         {"interference_ratio", r.radio.interference_ratio}};
  write_file(ctx.out_dir / "sim_outcome.json", summary.dump(2) + "\n");
  write_file(ctx.out_dir / "sim_outcome.csv", std::string(kSimCsvHeader) + "\n" + sim_csv_row(r.outcome) + "\n");
  json report = to_json(r.discrepancy);
  report["analytic"] = {{"interferer_count", r.analytic.interferer_count},
                        {"per_vehicle_capacity_mbps", r.analytic.per_vehicle_capacity_mbps},
                        {"per_packet_delay_ms", r.analytic.per_packet_delay_ms}};
  report["simulated"] = {{"per_vehicle_throughput_mbps", r.outcome.per_vehicle_throughput_mbps},
                         {"mean_delay_ms", r.outcome.delay.mean_ms}};
  write_file(ctx.out_dir / "compare.json", report.dump(2) + "\n");

  say(ctx, "simulate: " + r.outcome.mac + " throughput " + format_shortest(r.outcome.per_vehicle_throughput_mbps) +
               " Mbps, utilization " + format_shortest(r.outcome.utilization) +
               (r.outcome.utilization < 0.5 ? " (below 0.5)" : "") + ", " + r.discrepancy.note);
  if (s.simulation.mac == MacKind::kTdma && r.outcome.collisions != 0) {
    say(ctx, "error: TDMA collision detected");
    return kExitComputation;
  }
  if (!conserved(r.outcome)) {
    say(ctx, "error: packet conservation violated");
    return kExitComputation;
  }
  return kExitOk;
}

int cmd_compare(const CommandContext& ctx) {
  require_csv_or_json(ctx, "compare");
  const Scenario& s = ctx.scenario;
  s.validate();

  std::ostringstream csv;
  csv << "D,N,analytic_capacity_mbps,analytic_delay_ms,tdma_throughput_mbps,tdma_delay_ms,tdma_utilization,"
         "tdma_rel_error,tdma_flagged,contention_throughput_mbps,contention_utilization,contention_rel_error,"
         "contention_flagged\n";
  json cells = json::array();
  int violations = 0;
  for (double gap : s.gaps) {
    for (int lane_count : s.lanes) {
      RoadScenario road = s.road;
      road.inter_vehicle_gap_m = gap;
      road.lane_count = lane_count;
      road.road_length_m = std::max(road.road_length_m, gap);
      const RunResult tdma = run_one(s, road, MacKind::kTdma);
      const RunResult contention = run_one(s, road, MacKind::kContention);
      if (tdma.outcome.collisions != 0 || !conserved(tdma.outcome) || !conserved(contention.outcome)) ++violations;

      csv << format_shortest(gap) << ',' << lane_count << ','
          << format_shortest(tdma.analytic.per_vehicle_capacity_mbps) << ','
          << format_shortest(tdma.analytic.per_packet_delay_ms) << ','
          << format_shortest(tdma.outcome.per_vehicle_throughput_mbps) << ','
          << format_shortest(tdma.outcome.delay.mean_ms) << ',' << format_shortest(tdma.outcome.utilization) << ','
          << format_shortest(tdma.discrepancy.throughput_rel_error) << ','
          << (tdma.discrepancy.flagged ? "true" : "false") << ','
          << format_shortest(contention.outcome.per_vehicle_throughput_mbps) << ','
          << format_shortest(contention.outcome.utilization) << ','
          << format_shortest(contention.discrepancy.throughput_rel_error) << ','
          << (contention.discrepancy.flagged ? "true" : "false") << '\n';
      cells.push_back({{"D", gap},
                       {"N", lane_count},
                       {"analytic_capacity_mbps", tdma.analytic.per_vehicle_capacity_mbps},
                       {"analytic_delay_ms", tdma.analytic.per_packet_delay_ms},
                       {"tdma", to_json(tdma.outcome)},
                       {"tdma_compare", to_json(tdma.discrepancy)},
                       {"contention", to_json(contention.outcome)},
                       {"contention_compare", to_json(contention.discrepancy)}});
    }
  }
  if (ctx.format == OutputFormat::kJson) {
    write_file(ctx.out_dir / "compare_grid.json", json{{"cells", cells}}.dump(2) + "\n");
  } else {
    write_file(ctx.out_dir / "compare_grid.csv", csv.str());
  }
  say(ctx, "compare: " + std::to_string(cells.size()) + " cells, " + std::to_string(violations) +
               " invariant violations");
  return violations == 0 ? kExitOk : kExitComputation;
}

}  // namespace v2vlab
