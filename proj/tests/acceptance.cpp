// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Runs the bundled comparison scenario end to end, so it exercises the same
// configuration the CLI ships with.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "drpid/cli.hpp"
#include "drpid/engine.hpp"
#include "drpid/metrics.hpp"
#include "drpid/network.hpp"

using namespace drpid;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int number, const std::string& name, bool ok, const std::string& detail = "") {
  std::printf("%s  criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", number, name.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) ++failures;
}

std::string scenario_path(const std::string& name) {
  return std::string(DRPID_SCENARIO_DIR) + "/" + name;
}

double max_abs_tick_deviation(const SimTrace& a, const SimTrace& b) {
  double worst = 0.0;
  for (std::size_t ax = 0; ax < a.axes.size(); ++ax) {
    const auto& ya = a.axes[ax].ticks.output;
    const auto& yb = b.axes[ax].ticks.output;
    for (std::size_t i = 0; i < ya.size(); ++i) {
      worst = std::max(worst, std::fabs(ya[i] - yb[i]));
    }
  }
  return worst;
}

// Simpson quadrature over the truncated density; independent of the sampler.
double truncated_mean_numeric(double eta, double phi, double tau_max) {
  const int n = 200000;
  const double h = (tau_max - eta) / n;
  auto pdf = [&](double x) { return std::exp(-(x - eta) / phi) / phi; };
  double norm = 0.0, first = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = eta + i * h;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    norm += w * pdf(x);
    first += w * x * pdf(x);
  }
  return first / norm;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  const ScenarioConfig base = load_scenario(scenario_path("paper_sec4.scenario"));
  const int num_seeds = 10;

  // Shared runs for criteria 1 and 2.
  std::vector<ComparisonTraces> comparisons;
  std::vector<IndexReport> reports;
  for (int s = 1; s <= num_seeds; ++s) {
    ScenarioConfig cfg = base;
    cfg.seed = static_cast<std::uint64_t>(s);
    comparisons.push_back(run_comparison(cfg));
    reports.push_back(comparison_report(comparisons.back(), cfg.gamma_skip));
  }

  // 1. Nominal equivalence of the packet-based controller under loss + delay.
  {
    double worst_dev = 0.0;
    bool indexes_ok = true;
    for (int i = 0; i < num_seeds; ++i) {
      worst_dev = std::max(worst_dev,
                           max_abs_tick_deviation(comparisons[i].di_p, comparisons[i].nominal));
      const IndexRow& di = reports[i].rows[2];
      indexes_ok = indexes_ok && di.j1 >= 99.9 && di.j2 == 100.0;
    }
    ScenarioConfig timed = base;
    timed.seed = 1;
    const auto t0 = std::chrono::steady_clock::now();
    const SimTrace tr = run(timed);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = worst_dev < 1e-6 && indexes_ok && secs < 1.0 && !tr.axes.empty();
    std::ostringstream det;
    det << "max tick deviation " << worst_dev << ", run time " << secs << " s";
    report(1, "nominal equivalence across " + std::to_string(num_seeds) + " seeds", ok, det.str());
  }

  // 2. Error ordering per seed; mid-band improvement for the retuned variant.
  {
    bool order_ok = true;
    double j1_sum = 0.0;
    for (const IndexReport& r : reports) {
      const double e_ddnp = r.rows[0].e, e_ddp = r.rows[1].e, e_dip = r.rows[2].e;
      order_ok = order_ok && e_dip < e_ddp && e_ddp < e_ddnp;
      j1_sum += r.rows[1].j1;
    }
    const double j1_mean = j1_sum / num_seeds;
    const bool ok = order_ok && j1_mean >= 20.0 && j1_mean <= 70.0;
    std::ostringstream det;
    det << "mean J1(dd_p) = " << j1_mean;
    report(2, "per-seed error ordering and mid-band J1(dd_p)", ok, det.str());
  }

  // 3. Robustness grid: exact corners, monotone degradation, per seed.
  {
    bool ok = true;
    std::string why;
    for (int s = 1; s <= 3 && ok; ++s) {
      ScenarioConfig cfg = base;
      cfg.seed = static_cast<std::uint64_t>(s);
      const RobustnessReport rep = robustness_grid(cfg, cfg.grid_q, cfg.grid_r);
      if (rep.at(0, 0).j3 != 100.0 || rep.at(0, 0).j4 != 100.0) { ok = false; why = "origin not exactly 100"; }
      if (rep.at(2, 2).j3 != 0.0 || rep.at(2, 2).j4 != 0.0) { ok = false; why = "worst cell not exactly 0"; }
      for (std::size_t ir = 0; ir < 3 && ok; ++ir) {
        for (std::size_t iq = 0; iq + 1 < 3 && ok; ++iq) {
          if (rep.at(ir, iq + 1).j3 > rep.at(ir, iq).j3 || rep.at(iq + 1, ir).j3 > rep.at(iq, ir).j3 ||
              rep.at(ir, iq + 1).j4 > rep.at(ir, iq).j4 || rep.at(iq + 1, ir).j4 > rep.at(iq, ir).j4) {
            ok = false;
            why = "grid not monotone at seed " + std::to_string(s);
          }
        }
      }
    }
    report(3, "robustness grid corners and monotonicity", ok, why);
  }

  // 4. Discretization against the fine-step integration oracle.
  {
    const ContinuousPlant plant{6.3, 17.7};
    bool ok = true;
    for (const double h : {0.01, 0.1, 0.2}) {
      const DiscretePlant dp = discretize_zoh(plant, h);
      // RK4, step 1e-6, from a nonzero state with held input. Position slope
      // is the velocity; velocity slope is f(v) = -pole*v + gain*u.
      double p = 0.02, v = -0.1;
      const double u = 0.7;
      const double dt = 1e-6;
      auto f = [&](double vv) { return -17.7 * vv + 6.3 * u; };
      const auto steps = static_cast<long long>(std::llround(h / dt));
      for (long long i = 0; i < steps; ++i) {
        const double k1p = v, k1v = f(v);
        const double k2p = v + 0.5 * dt * k1v, k2v = f(k2p);
        const double k3p = v + 0.5 * dt * k2v, k3v = f(k3p);
        const double k4p = v + dt * k3v, k4v = f(k4p);
        p += dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
      }
      const StepResult s = step(dp, {0.02, -0.1}, u);
      ok = ok && std::fabs(s.y - p) < 1e-8;
    }
    const DiscretePlant fast = discretize_zoh(plant, 0.1);
    const DiscretePlant slow = discretize_zoh(plant, 0.2);
    ok = ok && std::fabs(slow.a12 - (fast.a11 * fast.a12 + fast.a12 * fast.a22)) < 1e-12 &&
         std::fabs(slow.a22 - fast.a22 * fast.a22) < 1e-12 &&
         std::fabs(slow.b1 - (fast.a11 * fast.b1 + fast.a12 * fast.b2 + fast.b1)) < 1e-12 &&
         std::fabs(slow.b2 - (fast.a22 * fast.b2 + fast.b2)) < 1e-12;
    report(4, "ZOH discretization matches integration oracle and composition identity", ok);
  }

  // 5. Channel statistics and trace-level guarantees.
  {
    const DelayModel dm{0.04, 0.012, 0.08};
    RngStream rng(2024);
    double lo = 1e9, hi = -1e9, sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
      const double tau = sample_delay(rng, dm);
      lo = std::min(lo, tau);
      hi = std::max(hi, tau);
      sum += tau;
    }
    const double mean_target = truncated_mean_numeric(0.04, 0.012, 0.08);
    bool ok = lo >= 0.04 && hi <= 0.08 &&
              std::fabs(sum / n - mean_target) < 0.02 * mean_target;

    RngStream drop_rng(77);
    ChannelState cs;
    const DropoutModel uncapped{0.3, 1 << 30};
    int drops = 0;
    for (int i = 0; i < n; ++i) {
      if (!sample_dropout(drop_rng, uncapped, cs).delivered) ++drops;
    }
    const double rate = static_cast<double>(drops) / n;
    ok = ok && rate > 0.29 && rate < 0.31;

    for (int s = 1; s <= 5 && ok; ++s) {
      ScenarioConfig cfg = base;
      cfg.seed = static_cast<std::uint64_t>(s + 100);
      cfg.dropout.p = 0.6;
      const SimTrace t = run(cfg);
      int run_lr = 0, run_rl = 0;
      double last_arrival = -1.0;
      for (const PeriodEvent& ev : t.axes[0].periods) {
        run_lr = ev.delivered_lr ? 0 : run_lr + 1;
        run_rl = ev.delivered_rl ? 0 : run_rl + 1;
        if (run_lr > cfg.dropout.max_consecutive || run_rl > cfg.dropout.max_consecutive) ok = false;
        if (ev.delivered_rl) {
          const double arrival = ev.time + ev.tau_rt;
          if (arrival <= last_arrival) ok = false;
          last_arrival = arrival;
        }
      }
    }
    std::ostringstream det;
    det << "delay mean " << sum / n << " vs " << mean_target << ", drop rate " << rate;
    report(5, "channel statistics, loss cap, packet ordering", ok, det.str());
  }

  // 6. Gain schedule spot values, exact.
  {
    const PidDesign d = base.design;
    const GainScheduleLaw law{-50.0, 0.5, 0.08};
    const ScheduledGains g0 = schedule_gains(0.0, d, law);
    const ScheduledGains g4 = schedule_gains(0.04, d, law);
    const ScheduledGains g8 = schedule_gains(0.08, d, law);
    const bool ok = g0.kpd_tau == 12.0 && g0.td_tau == 0.01 && g4.kpd_tau == 10.0 &&
                    g4.td_tau == 0.03 && g8.kpd_tau == 8.0 && g8.td_tau == 0.05;
    report(6, "gain schedule spot values", ok);
  }

  // 7. Byte-identical CLI reruns.
  {
    const fs::path dir = fs::temp_directory_path() / "drpid_acceptance" / "rerun";
    fs::remove_all(dir);
    cli::RunOptions opt;
    opt.scenario_path = scenario_path("paper_sec4.scenario");
    opt.seed = 5;
    opt.out_dir = dir.string();
    bool ok = cli::cmd_run(opt) == 0;
    std::map<std::string, std::string> first;
    if (ok) {
      for (const auto& e : fs::directory_iterator(dir)) {
        first[e.path().filename().string()] = slurp(e.path());
      }
      ok = cli::cmd_run(opt) == 0;
      for (const auto& e : fs::directory_iterator(dir)) {
        ok = ok && first.at(e.path().filename().string()) == slurp(e.path());
      }
      ok = ok && !first.empty();
    }
    report(7, "identical manifest inputs give byte-identical outputs", ok);
  }

  // 8. Degenerate channel collapses all variants onto the nominal trace.
  {
    ScenarioConfig cfg = base;
    cfg.delay = DelayModel{0.0, 0.0, 0.0};
    cfg.dropout.p = 0.0;
    cfg.lr_wait = -1.0;
    cfg.seed = 123;
    const ComparisonTraces t = run_comparison(cfg);
    auto same = [&](const SimTrace& x) {
      return x.axes[0].ticks.output == t.nominal.axes[0].ticks.output &&
             x.axes[0].ticks.u_applied == t.nominal.axes[0].ticks.u_applied;
    };
    report(8, "degenerate channel collapse, bitwise", same(t.di_p) && same(t.dd_p) && same(t.dd_np));
  }

  // Bench-like scenario keeps the qualitative ordering with degraded indexes.
  {
    const ScenarioConfig exp_cfg = load_scenario(scenario_path("experiment_like.scenario"));
    double j1_di = 0.0, j1_dd = 0.0, j1_di_max = -1e9;
    for (int s = 1; s <= num_seeds; ++s) {
      ScenarioConfig cfg = exp_cfg;
      cfg.seed = static_cast<std::uint64_t>(s);
      const IndexReport rep = comparison_report(run_comparison(cfg), cfg.gamma_skip);
      j1_di += rep.rows[2].j1;
      j1_dd += rep.rows[1].j1;
      j1_di_max = std::max(j1_di_max, rep.rows[2].j1);
    }
    j1_di /= num_seeds;
    j1_dd /= num_seeds;
    const bool ok = j1_di > j1_dd && j1_dd > 0.0 && j1_di < 100.0 && j1_di_max < 100.0;
    std::ostringstream det;
    det << "mean J1(di_p) = " << j1_di << ", mean J1(dd_p) = " << j1_dd;
    report(9, "bench-like scenario ordering with degraded indexes", ok, det.str());
  }

  if (failures == 0) {
    std::printf("all acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criteria FAILED\n", failures);
  return 1;
}
