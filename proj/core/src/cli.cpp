#include "drpid/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "drpid/csv.hpp"
#include "drpid/engine.hpp"
#include "drpid/metrics.hpp"

namespace fs = std::filesystem;

namespace drpid::cli {

namespace {

// Collects every file a command emits so the manifest can list them all.
class OutputSink {
 public:
  explicit OutputSink(const std::string& dir) : root_(dir) { fs::create_directories(root_); }

  std::string path(const std::string& rel) {
    const fs::path p = root_ / rel;
    fs::create_directories(p.parent_path());
    files_.push_back(rel);
    return p.string();
  }

  void write_text(const std::string& rel, const std::string& text) {
    std::ofstream out(path(rel));
    if (!out) throw std::runtime_error("cannot write file: " + (root_ / rel).string());
    out << text;
  }

  void write_manifest(const std::string& command, const std::string& scenario,
                      std::uint64_t cfg_hash, const std::vector<std::uint64_t>& seeds) {
    std::ostringstream os;
    os << "command=" << command << '\n'
       << "scenario=" << scenario << '\n'
       << "config_hash=" << std::hex << cfg_hash << std::dec << '\n';
    os << "seeds=";
    for (std::size_t i = 0; i < seeds.size(); ++i) os << (i ? "," : "") << seeds[i];
    os << '\n' << "out_dir=" << root_.string() << '\n';
    for (std::size_t i = 0; i < files_.size(); ++i) {
      os << "file." << i << '=' << files_[i] << '\n';
    }
    std::ofstream out(root_ / "manifest.txt");
    if (!out) throw std::runtime_error("cannot write manifest");
    out << os.str();
  }

 private:
  fs::path root_;
  std::vector<std::string> files_;
};

int fail(const std::string& msg) {
  std::cerr << "error: " << msg << '\n';
  return 1;
}

std::vector<std::uint64_t> seeds_or_default(const std::vector<std::uint64_t>& seeds,
                                            const ScenarioConfig& cfg) {
  return seeds.empty() ? std::vector<std::uint64_t>{cfg.seed} : seeds;
}

std::string matrix_csv(const std::vector<double>& q, const std::vector<double>& r,
                       const std::vector<std::vector<double>>& cells) {
  std::ostringstream os;
  os << "r_pct\\q_pct";
  for (const double v : q) os << ',' << fmt_g17(v);
  os << '\n';
  for (std::size_t ir = 0; ir < r.size(); ++ir) {
    os << fmt_g17(r[ir]);
    for (std::size_t iq = 0; iq < q.size(); ++iq) os << ',' << fmt_g17(cells[ir][iq]);
    os << '\n';
  }
  return os.str();
}

void write_run_outputs(OutputSink& sink, const std::string& prefix, const SimTrace& trace) {
  write_trace_csv(sink.path(prefix + "trace_" + trace.variant_label + ".csv"), trace);
  write_events_csv(sink.path(prefix + "events_" + trace.variant_label + ".csv"), trace);
}

std::string summary_text(const IndexReport& report) {
  std::ostringstream os;
  for (const IndexRow& row : report.rows) {
    os << "e." << row.name << '=' << fmt_g17(row.e) << '\n'
       << "j1." << row.name << '=' << fmt_g17(row.j1) << '\n'
       << "o." << row.name << '=' << fmt_g17(row.o) << '\n'
       << "j2." << row.name << '=' << fmt_g17(row.j2) << '\n';
  }
  os << "degenerate=" << (report.degenerate ? 1 : 0) << '\n';
  return os.str();
}

bool parse_grid_spec(const std::string& spec, std::vector<double>& q, std::vector<double>& r) {
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ';')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) return false;
    const std::string key = part.substr(0, eq);
    std::vector<double> vals;
    std::stringstream vs(part.substr(eq + 1));
    std::string item;
    while (std::getline(vs, item, ',')) {
      try {
        vals.push_back(std::stod(item));
      } catch (const std::exception&) {
        return false;
      }
    }
    if (vals.empty()) return false;
    if (key == "q") q = vals;
    else if (key == "r") r = vals;
    else return false;
  }
  return !q.empty() && !r.empty();
}

}  // namespace

std::string resolve_out_dir(const std::string& out_dir) {
  const char* root = std::getenv("DRPID_OUT_ROOT");
  if (root != nullptr && *root != '\0' && fs::path(out_dir).is_relative()) {
    return (fs::path(root) / out_dir).string();
  }
  return out_dir;
}

int cmd_run(const RunOptions& opt) {
  try {
    ScenarioConfig cfg = load_scenario(opt.scenario_path);
    if (opt.seed) cfg.seed = *opt.seed;
    if (opt.variant) cfg.variant = *opt.variant;
    if (opt.prediction) cfg.prediction = *opt.prediction;
    cfg.validate();

    const SimTrace trace = run(cfg);
    // Index the run against its ideal-channel twin.
    const SimTrace nominal = run_nominal(cfg);

    OutputSink sink(resolve_out_dir(opt.out_dir));
    write_run_outputs(sink, "", trace);
    write_run_outputs(sink, "", nominal);

    const auto skip = static_cast<std::size_t>(
        std::max(0.0, std::ceil(cfg.gamma_skip / cfg.design.sensor_period() - 1e-12)));
    std::ostringstream idx;
    idx << "output,E,O\n";
    for (std::size_t axis = 0; axis < trace.axes.size(); ++axis) {
      const auto y = sensor_grid_output(trace.axes[axis], cfg.ticks_per_period(), skip);
      const auto ynom = sensor_grid_output(nominal.axes[axis], cfg.ticks_per_period(), skip);
      idx << trace.variant_label << "_axis" << axis << ',' << fmt_g17(accumulated_error(y, ynom))
          << ',' << fmt_g17(overshoot(y, ynom)) << '\n';
    }
    sink.write_text("indexes.csv", idx.str());
    sink.write_text("resolved_config.txt", canonical_dump(cfg));
    sink.write_manifest("run", opt.scenario_path, config_hash(cfg), {cfg.seed});
    return 0;
  } catch (const std::exception& e) {
    return fail(e.what());
  }
}

int cmd_compare(const CompareOptions& opt) {
  try {
    ScenarioConfig cfg = load_scenario(opt.scenario_path);
    const auto seeds = seeds_or_default(opt.seeds, cfg);

    OutputSink sink(resolve_out_dir(opt.out_dir));
    std::vector<IndexReport> reports;
    for (const std::uint64_t seed : seeds) {
      ScenarioConfig c = cfg;
      c.seed = seed;
      const ComparisonTraces traces = run_comparison(c);
      const IndexReport report = comparison_report(traces, c.gamma_skip);
      reports.push_back(report);

      const std::string prefix = seeds.size() == 1 ? "" : "seed_" + std::to_string(seed) + "/";
      write_run_outputs(sink, prefix, traces.nominal);
      write_run_outputs(sink, prefix, traces.dd_np);
      write_run_outputs(sink, prefix, traces.dd_p);
      write_run_outputs(sink, prefix, traces.di_p);
      write_report_csv(sink.path(prefix + "report.csv"), report);
      sink.write_text(prefix + "summary.txt", summary_text(report));
    }

    if (seeds.size() > 1) {
      IndexReport mean = reports.front();
      for (std::size_t v = 0; v < mean.rows.size(); ++v) {
        double e = 0, o = 0, j1 = 0, j2 = 0;
        for (const IndexReport& r : reports) {
          e += r.rows[v].e;
          o += r.rows[v].o;
          j1 += r.rows[v].j1;
          j2 += r.rows[v].j2;
        }
        const auto ns = static_cast<double>(reports.size());
        mean.rows[v].e = e / ns;
        mean.rows[v].o = o / ns;
        mean.rows[v].j1 = j1 / ns;
        mean.rows[v].j2 = j2 / ns;
      }
      write_report_csv(sink.path("report_mean.csv"), mean);
      sink.write_text("summary.txt", summary_text(mean));
    }
    sink.write_text("resolved_config.txt", canonical_dump(cfg));
    sink.write_manifest("compare", opt.scenario_path, config_hash(cfg), seeds);
    return 0;
  } catch (const std::exception& e) {
    return fail(e.what());
  }
}

int cmd_sweep(const SweepOptions& opt) {
  try {
    ScenarioConfig cfg = load_scenario(opt.scenario_path);
    std::vector<double> q = cfg.grid_q;
    std::vector<double> r = cfg.grid_r;
    if (!opt.grid_spec.empty() && !parse_grid_spec(opt.grid_spec, q, r)) {
      return fail("bad --grid spec, expected q=a,b,...;r=c,d,...");
    }
    const auto seeds = seeds_or_default(opt.seeds, cfg);

    std::vector<RobustnessReport> per_seed;
    for (const std::uint64_t seed : seeds) {
      ScenarioConfig c = cfg;
      c.seed = seed;
      per_seed.push_back(robustness_grid(c, q, r));
    }

    auto cell_stat = [&](auto getter, bool spread) {
      std::vector<std::vector<double>> m(r.size(), std::vector<double>(q.size(), 0.0));
      for (std::size_t ir = 0; ir < r.size(); ++ir) {
        for (std::size_t iq = 0; iq < q.size(); ++iq) {
          double lo = 0, hi = 0, sum = 0;
          for (std::size_t s = 0; s < per_seed.size(); ++s) {
            const double v = getter(per_seed[s].at(ir, iq));
            sum += v;
            if (s == 0) lo = hi = v;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
          }
          m[ir][iq] = spread ? hi - lo : sum / static_cast<double>(per_seed.size());
        }
      }
      return m;
    };

    OutputSink sink(resolve_out_dir(opt.out_dir));
    auto e_get = [](const RobustnessCell& c) { return c.e; };
    auto o_get = [](const RobustnessCell& c) { return c.o; };
    auto j3_get = [](const RobustnessCell& c) { return c.j3; };
    auto j4_get = [](const RobustnessCell& c) { return c.j4; };
    sink.write_text("ew.csv", matrix_csv(q, r, cell_stat(e_get, false)));
    sink.write_text("j3.csv", matrix_csv(q, r, cell_stat(j3_get, false)));
    sink.write_text("ow.csv", matrix_csv(q, r, cell_stat(o_get, false)));
    sink.write_text("j4.csv", matrix_csv(q, r, cell_stat(j4_get, false)));
    if (seeds.size() > 1) {
      sink.write_text("ew_spread.csv", matrix_csv(q, r, cell_stat(e_get, true)));
      sink.write_text("j3_spread.csv", matrix_csv(q, r, cell_stat(j3_get, true)));
      sink.write_text("ow_spread.csv", matrix_csv(q, r, cell_stat(o_get, true)));
      sink.write_text("j4_spread.csv", matrix_csv(q, r, cell_stat(j4_get, true)));
    }

    std::ostringstream sum;
    bool degenerate = false;
    for (const auto& rep : per_seed) degenerate = degenerate || rep.degenerate;
    sum << "cells=" << q.size() * r.size() << '\n'
        << "seeds=" << seeds.size() << '\n'
        << "degenerate=" << (degenerate ? 1 : 0) << '\n';
    sink.write_text("summary.txt", sum.str());
    sink.write_text("resolved_config.txt", canonical_dump(cfg));
    sink.write_manifest("sweep", opt.scenario_path, config_hash(cfg), seeds);
    return 0;
  } catch (const std::exception& e) {
    return fail(e.what());
  }
}

namespace {

struct LoadedTrace {
  std::string name;
  CsvTable table;
  int axes = 1;
};

std::string variant_name_of(const std::string& file) {
  std::string stem = fs::path(file).stem().string();
  if (stem.rfind("trace_", 0) == 0) stem = stem.substr(6);
  return stem;
}

}  // namespace

int cmd_plotdata(const PlotdataOptions& opt) {
  try {
    if (opt.trace_files.empty()) return fail("plotdata: no trace files given");
    if (opt.stride < 1) return fail("plotdata: stride must be >= 1");

    std::vector<LoadedTrace> traces;
    for (const std::string& file : opt.trace_files) {
      LoadedTrace lt;
      lt.name = variant_name_of(file);
      lt.table = read_csv(file);
      if (lt.table.rows.empty()) return fail("plotdata: empty trace: " + file);
      const int axis_col = lt.table.column("axis");
      const int need[] = {axis_col, lt.table.column("time_s"), lt.table.column("output_m"),
                          lt.table.column("reference_m")};
      for (const int c : need) {
        if (c < 0) return fail("plotdata: malformed trace (missing column): " + file);
      }
      for (const auto& row : lt.table.rows) {
        lt.axes = std::max(lt.axes, std::stoi(row[static_cast<std::size_t>(axis_col)]) + 1);
      }
      traces.push_back(std::move(lt));
    }

    OutputSink sink(resolve_out_dir(opt.out_dir));

    // Per-axis overlay of all variants on the shared tick grid.
    for (int axis = 0; axis < traces.front().axes; ++axis) {
      std::vector<std::vector<const std::vector<std::string>*>> rows_per_trace;
      for (const LoadedTrace& lt : traces) {
        std::vector<const std::vector<std::string>*> rows;
        const auto ac = static_cast<std::size_t>(lt.table.column("axis"));
        for (const auto& row : lt.table.rows) {
          if (std::stoi(row[ac]) == axis) rows.push_back(&row);
        }
        rows_per_trace.push_back(std::move(rows));
      }
      const std::size_t ticks = rows_per_trace.front().size();
      for (const auto& rows : rows_per_trace) {
        if (rows.size() != ticks) return fail("plotdata: traces disagree on the tick grid");
      }

      std::ostringstream os;
      os << "time_s,reference_m";
      for (const LoadedTrace& lt : traces) os << ",y_" << lt.name << "_m";
      os << '\n';
      const auto tcol = static_cast<std::size_t>(traces.front().table.column("time_s"));
      const auto rcol = static_cast<std::size_t>(traces.front().table.column("reference_m"));
      for (std::size_t i = 0; i < ticks; i += static_cast<std::size_t>(opt.stride)) {
        os << (*rows_per_trace.front()[i])[tcol] << ',' << (*rows_per_trace.front()[i])[rcol];
        for (std::size_t v = 0; v < traces.size(); ++v) {
          const auto ycol = static_cast<std::size_t>(traces[v].table.column("output_m"));
          os << ',' << (*rows_per_trace[v][i])[ycol];
        }
        os << '\n';
      }
      sink.write_text("overlay_axis" + std::to_string(axis) + ".csv", os.str());
    }

    // XY path files for two-axis traces.
    for (const LoadedTrace& lt : traces) {
      if (lt.axes < 2) continue;
      const auto ac = static_cast<std::size_t>(lt.table.column("axis"));
      const auto yc = static_cast<std::size_t>(lt.table.column("output_m"));
      std::vector<std::string> x_vals, y_vals;
      for (const auto& row : lt.table.rows) {
        if (std::stoi(row[ac]) == 0) x_vals.push_back(row[yc]);
        else if (std::stoi(row[ac]) == 1) y_vals.push_back(row[yc]);
      }
      std::ostringstream os;
      os << "x_m,y_m\n";
      const std::size_t nrows = std::min(x_vals.size(), y_vals.size());
      for (std::size_t i = 0; i < nrows; i += static_cast<std::size_t>(opt.stride)) {
        os << x_vals[i] << ',' << y_vals[i] << '\n';
      }
      sink.write_text("xy_" + lt.name + ".csv", os.str());
    }

    // Dropout markers from the first events file found next to a trace, in
    // the style of the output figures: marker height counts the consecutive
    // losses up to that period.
    for (const std::string& file : opt.trace_files) {
      fs::path events = fs::path(file).parent_path() /
                        ("events_" + variant_name_of(file) + ".csv");
      if (!fs::exists(events)) continue;
      const CsvTable ev = read_csv(events.string());
      const int ac = ev.column("axis"), tc = ev.column("time_s");
      const int lr = ev.column("delivered_lr"), rl = ev.column("delivered_rl");
      if (ac < 0 || tc < 0 || lr < 0 || rl < 0) continue;
      std::ostringstream os;
      os << "time_s,link,consecutive\n";
      std::map<std::string, int> run_lr, run_rl;
      for (const auto& row : ev.rows) {
        const std::string axis = row[static_cast<std::size_t>(ac)];
        const std::string time = row[static_cast<std::size_t>(tc)];
        int& clr = run_lr[axis];
        int& crl = run_rl[axis];
        clr = row[static_cast<std::size_t>(lr)] == "0" ? clr + 1 : 0;
        crl = row[static_cast<std::size_t>(rl)] == "0" ? crl + 1 : 0;
        if (clr > 0) os << time << ",lr," << clr << '\n';
        if (crl > 0) os << time << ",rl," << crl << '\n';
      }
      sink.write_text("dropouts.csv", os.str());
      break;
    }

    sink.write_manifest("plotdata", "", 0, {});
    return 0;
  } catch (const std::exception& e) {
    return fail(e.what());
  }
}

int cmd_validate(const std::string& scenario_path) {
  try {
    const ScenarioConfig cfg = load_scenario(scenario_path);
    std::cout << "ok: " << scenario_path << " (config_hash=" << std::hex << config_hash(cfg)
              << std::dec << ")\n";
    return 0;
  } catch (const std::exception& e) {
    return fail(e.what());
  }
}

}  // namespace drpid::cli
