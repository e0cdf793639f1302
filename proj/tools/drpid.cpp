// Command-line front end for the dual-rate networked control simulator.
//
// Verbs:
//   run       simulate one scenario, write trace/events CSVs and indexes
//   compare   run nominal + the three networked variants on common random
//             numbers and report the cost indexes
//   sweep     model-mismatch robustness grid over (q, r) decrements
//   plotdata  turn trace CSVs into plot-ready overlay / XY / dropout files
//   validate  load a scenario and check every invariant
//
// Relative --out paths are rooted at $DRPID_OUT_ROOT when it is set.

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "drpid/cli.hpp"

namespace {

std::vector<std::uint64_t> parse_seeds(const std::string& spec) {
  std::vector<std::uint64_t> out;
  std::string item;
  std::stringstream ss(spec);
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoull(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dual-rate networked control simulator"};
  app.require_subcommand(1);

  std::string scenario, out_dir = "out", grid, seeds_spec, variant;
  std::int64_t seed = -1;
  bool no_prediction = false;
  int stride = 1;
  std::vector<std::string> trace_files;

  auto* run = app.add_subcommand("run", "simulate one scenario");
  run->add_option("--scenario", scenario, "scenario file")->required();
  run->add_option("--seed", seed, "override the scenario seed");
  run->add_option("--variant", variant, "delay_dependent or delay_independent");
  run->add_flag("--no-prediction", no_prediction, "disable the prediction stage");
  run->add_option("--out", out_dir, "output directory");

  auto* compare = app.add_subcommand("compare", "four-variant comparison");
  compare->add_option("--scenario", scenario, "scenario file")->required();
  compare->add_option("--seeds", seeds_spec, "comma-separated seed list");
  compare->add_option("--seed", seed, "single seed");
  compare->add_option("--out", out_dir, "output directory");

  auto* sweep = app.add_subcommand("sweep", "robustness grid");
  sweep->add_option("--scenario", scenario, "scenario file")->required();
  sweep->add_option("--grid", grid, "grid spec, e.g. q=0,20,30;r=0,8,12");
  sweep->add_option("--seeds", seeds_spec, "comma-separated seed list");
  sweep->add_option("--out", out_dir, "output directory");

  auto* plotdata = app.add_subcommand("plotdata", "plot-ready CSV export");
  plotdata->add_option("traces", trace_files, "trace CSV files")->required();
  plotdata->add_option("--stride", stride, "downsampling stride");
  plotdata->add_option("--out", out_dir, "output directory");

  auto* validate = app.add_subcommand("validate", "check a scenario file");
  validate->add_option("--scenario", scenario, "scenario file")->required();

  CLI11_PARSE(app, argc, argv);

  using namespace drpid;

  if (run->parsed()) {
    cli::RunOptions opt;
    opt.scenario_path = scenario;
    opt.out_dir = out_dir;
    if (seed >= 0) opt.seed = static_cast<std::uint64_t>(seed);
    if (!variant.empty()) {
      if (variant == "delay_dependent") opt.variant = ControllerVariant::delay_dependent;
      else if (variant == "delay_independent") opt.variant = ControllerVariant::delay_independent;
      else {
        std::fprintf(stderr, "error: unknown variant '%s'\n", variant.c_str());
        return 1;
      }
    }
    if (no_prediction) opt.prediction = false;
    return cli::cmd_run(opt);
  }
  if (compare->parsed()) {
    cli::CompareOptions opt;
    opt.scenario_path = scenario;
    opt.out_dir = out_dir;
    opt.seeds = parse_seeds(seeds_spec);
    if (seed >= 0) opt.seeds.push_back(static_cast<std::uint64_t>(seed));
    return cli::cmd_compare(opt);
  }
  if (sweep->parsed()) {
    cli::SweepOptions opt;
    opt.scenario_path = scenario;
    opt.grid_spec = grid;
    opt.seeds = parse_seeds(seeds_spec);
    opt.out_dir = out_dir;
    return cli::cmd_sweep(opt);
  }
  if (plotdata->parsed()) {
    cli::PlotdataOptions opt;
    opt.trace_files = trace_files;
    opt.out_dir = out_dir;
    opt.stride = stride;
    return cli::cmd_plotdata(opt);
  }
  return cli::cmd_validate(scenario);
}
