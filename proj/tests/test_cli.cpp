#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "drpid/cli.hpp"
#include "drpid/csv.hpp"

namespace fs = std::filesystem;
using namespace drpid;

namespace {

std::string scenario_path(const std::string& name) {
  return std::string(DRPID_SCENARIO_DIR) + "/" + name;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "drpid_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> read_kv(const fs::path& p) {
  std::map<std::string, std::string> kv;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

}  // namespace

TEST_CASE("bundled scenarios validate") {
  for (const char* name : {"nominal.scenario", "paper_sec4.scenario", "robustness.scenario",
                           "experiment_like.scenario", "lissajous.scenario"}) {
    CHECK(cli::cmd_validate(scenario_path(name)) == 0);
  }
  CHECK(cli::cmd_validate("/no/such/file.scenario") == 1);
}

TEST_CASE("scenario parsing: violations named, unknown keys rejected") {
  const std::string base = slurp(scenario_path("paper_sec4.scenario"));
  CHECK_THROWS_WITH_AS(parse_scenario(base + "\nnetwork.tau_max = 0.3\n"),
                       doctest::Contains("disorder"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_scenario(base + "\nnot.a.key = 1\n"),
                       doctest::Contains("unknown scenario key"), std::invalid_argument);
  CHECK_THROWS(parse_scenario("pid.kp = banana\n"));

  // Round trip: the canonical dump reloads to the same hash.
  const ScenarioConfig cfg = parse_scenario(base);
  const ScenarioConfig reloaded = parse_scenario(canonical_dump(cfg));
  CHECK(config_hash(cfg) == config_hash(reloaded));
}

TEST_CASE("cmd_run: outputs, manifest coverage, byte-identical repetition") {
  const fs::path dir = fresh_dir("run1");
  cli::RunOptions opt;
  opt.scenario_path = scenario_path("paper_sec4.scenario");
  opt.seed = 7;
  opt.out_dir = dir.string();
  REQUIRE(cli::cmd_run(opt) == 0);

  for (const char* f : {"trace_di_p.csv", "events_di_p.csv", "trace_nominal.csv", "indexes.csv",
                        "resolved_config.txt", "manifest.txt"}) {
    CHECK(fs::exists(dir / f));
  }

  // Manifest lists exactly the emitted files (itself excluded).
  const auto kv = read_kv(dir / "manifest.txt");
  CHECK(kv.at("command") == "run");
  std::set<std::string> listed;
  for (const auto& [k, v] : kv) {
    if (k.rfind("file.", 0) == 0) listed.insert(v);
  }
  std::set<std::string> present;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name != "manifest.txt") present.insert(name);
  }
  CHECK(listed == present);

  // Re-running with identical inputs reproduces every byte.
  std::map<std::string, std::string> before;
  for (const auto& name : present) before[name] = slurp(dir / name);
  const std::string manifest_before = slurp(dir / "manifest.txt");
  REQUIRE(cli::cmd_run(opt) == 0);
  for (const auto& name : present) CHECK(before.at(name) == slurp(dir / name));
  CHECK(manifest_before == slurp(dir / "manifest.txt"));
}

TEST_CASE("cmd_run: variant and prediction overrides select the controller") {
  const fs::path dir = fresh_dir("run_ddnp");
  cli::RunOptions opt;
  opt.scenario_path = scenario_path("paper_sec4.scenario");
  opt.variant = ControllerVariant::delay_dependent;
  opt.prediction = false;
  opt.out_dir = dir.string();
  REQUIRE(cli::cmd_run(opt) == 0);
  CHECK(fs::exists(dir / "trace_dd_np.csv"));
  CHECK(fs::exists(dir / "events_dd_np.csv"));
}

TEST_CASE("cmd_run: validation failure names the violated condition") {
  const fs::path dir = fresh_dir("run_bad");
  const fs::path bad = dir / "bad.scenario";
  std::ofstream(bad) << slurp(scenario_path("paper_sec4.scenario")) << "\nnetwork.tau_max = 0.3\n";
  cli::RunOptions opt;
  opt.scenario_path = bad.string();
  opt.out_dir = (dir / "out").string();
  CHECK(cli::cmd_run(opt) == 1);
  CHECK_FALSE(fs::exists(dir / "out" / "trace_di_p.csv"));
}

TEST_CASE("cmd_compare: report rows and per-seed layout") {
  const fs::path dir = fresh_dir("cmp");
  cli::CompareOptions opt;
  opt.scenario_path = scenario_path("paper_sec4.scenario");
  opt.seeds = {1, 2};
  opt.out_dir = dir.string();
  REQUIRE(cli::cmd_compare(opt) == 0);

  CHECK(fs::exists(dir / "seed_1" / "report.csv"));
  CHECK(fs::exists(dir / "seed_2" / "trace_dd_np.csv"));
  CHECK(fs::exists(dir / "report_mean.csv"));

  const CsvTable report = read_csv((dir / "report_mean.csv").string());
  REQUIRE(report.rows.size() == 3);
  CHECK(report.rows[0][0] == "dd_np");
  CHECK(report.rows[2][0] == "di_p");

  const auto summary = read_kv(dir / "summary.txt");
  CHECK(summary.at("j1.di_p") == "100");
  CHECK(summary.at("e.di_p") == "0");
}

TEST_CASE("cmd_sweep: table shapes, degenerate single cell") {
  const fs::path dir = fresh_dir("sweep");
  cli::SweepOptions opt;
  opt.scenario_path = scenario_path("robustness.scenario");
  opt.seeds = {1, 2};
  opt.out_dir = dir.string();
  REQUIRE(cli::cmd_sweep(opt) == 0);

  for (const char* f : {"ew.csv", "j3.csv", "ow.csv", "j4.csv", "ew_spread.csv", "j3_spread.csv"}) {
    CHECK(fs::exists(dir / f));
  }
  const CsvTable j3 = read_csv((dir / "j3.csv").string());
  REQUIRE(j3.rows.size() == 3);
  CHECK(j3.rows[0][1] == "100");  // origin cell, averaged over seeds
  CHECK(j3.rows[2][3] == "0");    // worst cell

  cli::SweepOptions degen = opt;
  degen.grid_spec = "q=0;r=0";
  degen.out_dir = fresh_dir("sweep_degen").string();
  degen.seeds = {1};
  REQUIRE(cli::cmd_sweep(degen) == 0);
  const auto summary = read_kv(fs::path(degen.out_dir) / "summary.txt");
  CHECK(summary.at("degenerate") == "1");

  cli::SweepOptions bad = opt;
  bad.grid_spec = "nope";
  CHECK(cli::cmd_sweep(bad) == 1);
}

TEST_CASE("cmd_plotdata: overlay, xy paths, dropout markers, empty input") {
  const fs::path cmpdir = fresh_dir("plot_src");
  cli::CompareOptions cmp;
  cmp.scenario_path = scenario_path("paper_sec4.scenario");
  cmp.seeds = {3};
  cmp.out_dir = cmpdir.string();
  REQUIRE(cli::cmd_compare(cmp) == 0);

  const fs::path plotdir = fresh_dir("plot_out");
  cli::PlotdataOptions opt;
  for (const char* v : {"nominal", "dd_np", "dd_p", "di_p"}) {
    opt.trace_files.push_back((cmpdir / ("trace_" + std::string(v) + ".csv")).string());
  }
  opt.out_dir = plotdir.string();
  opt.stride = 5;
  REQUIRE(cli::cmd_plotdata(opt) == 0);

  const CsvTable overlay = read_csv((plotdir / "overlay_axis0.csv").string());
  CHECK(overlay.column("y_nominal_m") >= 0);
  CHECK(overlay.column("y_di_p_m") >= 0);
  CHECK(overlay.column("reference_m") >= 0);
  CHECK(overlay.rows.size() == 600);  // 3000 ticks, stride 5
  CHECK(fs::exists(plotdir / "dropouts.csv"));

  // Two-axis run produces XY paths.
  const fs::path lisdir = fresh_dir("plot_lis");
  cli::RunOptions lis;
  lis.scenario_path = scenario_path("lissajous.scenario");
  lis.out_dir = lisdir.string();
  REQUIRE(cli::cmd_run(lis) == 0);
  cli::PlotdataOptions lopt;
  lopt.trace_files = {(lisdir / "trace_di_p.csv").string()};
  lopt.out_dir = fresh_dir("plot_lis_out").string();
  REQUIRE(cli::cmd_plotdata(lopt) == 0);
  const CsvTable xy = read_csv((fs::path(lopt.out_dir) / "xy_di_p.csv").string());
  CHECK(xy.column("x_m") == 0);
  CHECK(xy.column("y_m") == 1);
  CHECK(xy.rows.size() == 3000);

  cli::PlotdataOptions empty_opt;
  const fs::path empty_csv = fresh_dir("plot_empty") / "trace_empty.csv";
  std::ofstream(empty_csv) << "axis,tick,time_s,reference_m,output_m,u_raw_cau,u_applied_cau\n";
  empty_opt.trace_files = {empty_csv.string()};
  empty_opt.out_dir = (fs::path(empty_csv).parent_path() / "out").string();
  CHECK(cli::cmd_plotdata(empty_opt) == 1);
  CHECK_FALSE(fs::exists(fs::path(empty_opt.out_dir) / "overlay_axis0.csv"));
}

TEST_CASE("resolve_out_dir honors the environment root for relative paths") {
  ::setenv("DRPID_OUT_ROOT", "/tmp/drpid_root", 1);
  CHECK(cli::resolve_out_dir("runs/x") == "/tmp/drpid_root/runs/x");
  CHECK(cli::resolve_out_dir("/abs/path") == "/abs/path");
  ::unsetenv("DRPID_OUT_ROOT");
  CHECK(cli::resolve_out_dir("runs/x") == "runs/x");
}
