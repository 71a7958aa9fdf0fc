// Command-line front end for the v2vlab library.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "v2vlab/commands.hpp"
#include "v2vlab/errors.hpp"

namespace {

struct Options {
  std::string scenario_path;
  std::optional<std::vector<double>> gaps;
  std::optional<std::vector<int>> lanes;
  std::optional<double> adaptive_range;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mac;
  std::optional<double> duration_s;
  std::string out_dir = ".";
  std::string format = "csv";
};

void add_common(CLI::App* sub, Options& opt, bool grid, bool sim) {
  sub->add_option("--scenario", opt.scenario_path, "Scenario JSON file")->check(CLI::ExistingFile);
  sub->add_option("--out", opt.out_dir, "Output directory");
  sub->add_option("--format", opt.format, "Output format")
      ->check(CLI::IsMember({"csv", "json", "table"}));
  if (grid) {
    sub->add_option("--gaps", opt.gaps, "Inter-vehicle gaps in metres")->delimiter(',');
    sub->add_option("--lanes", opt.lanes, "Lane counts")->delimiter(',');
    sub->add_option("--adaptive-range", opt.adaptive_range, "Set R to this multiple of the gap");
  }
  if (sim) {
    sub->add_option("--seed", opt.seed, "Random seed");
    sub->add_option("--mac", opt.mac, "tdma or contention")->check(CLI::IsMember({"tdma", "contention"}));
    sub->add_option("--duration", opt.duration_s, "Simulated seconds");
  }
}

v2vlab::Scenario build_scenario(const Options& opt, bool single_cell) {
  v2vlab::Scenario s = opt.scenario_path.empty() ? v2vlab::Scenario{} : v2vlab::load_scenario(opt.scenario_path);
  if (opt.gaps) s.gaps = *opt.gaps;
  if (opt.lanes) s.lanes = *opt.lanes;
  if (opt.adaptive_range) s.adaptive_range_multiplier = *opt.adaptive_range;
  if (opt.seed) s.simulation.seed = *opt.seed;
  if (opt.mac) s.simulation.mac = *opt.mac == "tdma" ? v2vlab::MacKind::kTdma : v2vlab::MacKind::kContention;
  if (opt.duration_s) s.simulation.duration_s = *opt.duration_s;
  if (single_cell) {
    // simulate runs one road: --gaps and --lanes pick it when given.
    if (opt.gaps) {
      if (opt.gaps->size() != 1) throw v2vlab::ValidationError("simulate takes a single --gaps value");
      s.road.inter_vehicle_gap_m = opt.gaps->front();
    }
    if (opt.lanes) {
      if (opt.lanes->size() != 1) throw v2vlab::ValidationError("simulate takes a single --lanes value");
      s.road.lane_count = opt.lanes->front();
    }
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vehicular network capacity, feasibility and MAC simulation toolkit"};
  app.require_subcommand(1);
  Options opt;

  auto* tables = app.add_subcommand("tables", "Per-vehicle capacity and delay tables");
  auto* classify = app.add_subcommand("classify", "Classify the application registry");
  auto* feasibility = app.add_subcommand("feasibility", "Check V2V feasibility per application and grid cell");
  auto* simulate = app.add_subcommand("simulate", "Simulate one road with TDMA or contention MAC");
  auto* compare = app.add_subcommand("compare", "Paired TDMA and contention runs over the grid");
  add_common(tables, opt, true, false);
  add_common(classify, opt, false, false);
  add_common(feasibility, opt, true, false);
  add_common(simulate, opt, true, true);
  add_common(compare, opt, true, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? v2vlab::kExitOk : v2vlab::kExitValidation;
  }

  try {
    v2vlab::CommandContext ctx;
    ctx.scenario = build_scenario(opt, simulate->parsed());
    ctx.out_dir = opt.out_dir;
    ctx.format = v2vlab::parse_output_format(opt.format);
    ctx.log = &std::cout;
    if (tables->parsed()) return v2vlab::cmd_tables(ctx);
    if (classify->parsed()) return v2vlab::cmd_classify(ctx);
    if (feasibility->parsed()) return v2vlab::cmd_feasibility(ctx);
    if (simulate->parsed()) return v2vlab::cmd_simulate(ctx);
    return v2vlab::cmd_compare(ctx);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return v2vlab::exit_code_for(e);
  }
}
