#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "drpid/scenario.hpp"

namespace drpid::cli {

// Command implementations return process exit codes and report problems on
// stderr; the thin binary in tools/ only parses arguments.

struct RunOptions {
  std::string scenario_path;
  std::optional<std::uint64_t> seed;
  std::optional<ControllerVariant> variant;
  std::optional<bool> prediction;
  std::string out_dir = "out";
};
int cmd_run(const RunOptions& opt);

struct CompareOptions {
  std::string scenario_path;
  std::vector<std::uint64_t> seeds;  // empty: the scenario's seed
  std::string out_dir = "out";
};
int cmd_compare(const CompareOptions& opt);

struct SweepOptions {
  std::string scenario_path;
  std::string grid_spec;  // "q=0,20,30;r=0,8,12"; empty: scenario defaults
  std::vector<std::uint64_t> seeds;
  std::string out_dir = "out";
};
int cmd_sweep(const SweepOptions& opt);

struct PlotdataOptions {
  std::vector<std::string> trace_files;
  std::string out_dir = "out";
  int stride = 1;
};
int cmd_plotdata(const PlotdataOptions& opt);

int cmd_validate(const std::string& scenario_path);

// Relative output directories are rooted at $DRPID_OUT_ROOT when it is set.
std::string resolve_out_dir(const std::string& out_dir);

}  // namespace drpid::cli
