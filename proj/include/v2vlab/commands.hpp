#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "v2vlab/scenario.hpp"

namespace v2vlab {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 2,
  kExitComputation = 3,
  kExitIo = 4,
};

enum class OutputFormat { kCsv, kJson, kTable };

OutputFormat parse_output_format(std::string_view name);

struct CommandContext {
  Scenario scenario;
  std::filesystem::path out_dir = ".";
  OutputFormat format = OutputFormat::kCsv;
  std::ostream* log = nullptr;  // summary lines; may be null
};

// Each command writes its files under out_dir and returns an exit code.
// Validation and I/O problems surface as exceptions (see exit_code_for).

/// capacity.csv and delay.csv (or tables.json), 4-decimal table precision.
int cmd_tables(const CommandContext& ctx);

/// classification.csv / .json / .txt for the registry. Returns
/// kExitComputation if a regime-rule invariant fails.
int cmd_classify(const CommandContext& ctx);

/// feasibility.csv (or .json) over apps x gaps x lanes, plus a summary line.
int cmd_feasibility(const CommandContext& ctx);

/// One simulation run on scenario.road: sim_outcome.json, sim_outcome.csv and
/// compare.json. Returns kExitComputation on a TDMA collision or a packet
/// conservation failure.
int cmd_simulate(const CommandContext& ctx);

/// Paired TDMA and contention runs on every grid cell versus the analytic
/// model: compare_grid.csv (or .json).
int cmd_compare(const CommandContext& ctx);

/// Maps an exception thrown by a command to its exit code.
int exit_code_for(const std::exception& e);

// Default run lengths used when the scenario gives no duration.
double default_tdma_duration_s(const TdmaSchedule& schedule, int warmup_frames);
double default_contention_duration_s(const RadioConfig& radio, int window, int warmup_frames);

}  // namespace v2vlab
