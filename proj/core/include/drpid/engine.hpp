#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "drpid/network.hpp"
#include "drpid/predictor.hpp"
#include "drpid/scenario.hpp"

namespace drpid {

// Actuation patterns inside one sensor period, keyed by how the local side
// fills the basic-period grid.
enum class PatternTag {
  uniform_3_17,     // stored estimates from tick 0 (independent, packet lost)
  nonuniform_3_13,  // estimated head, actual actions from the arrival tick
  nonuniform_3_10,  // previous action held, actual actions from the arrival tick
  nonuniform_3_15,  // previous action held, stored estimates from the waiting time
};

std::string to_string(PatternTag tag);

struct ActuationSchedule {
  std::vector<double> values;  // one entry per basic period, length L*N
  PatternTag pattern;
};

// Fills one sensor period on the basic grid. tau_ticks is the switch instant
// for the non-uniform patterns; slots are aligned to fast-period boundaries.
ActuationSchedule build_schedule(ControllerVariant variant, bool delivered, int tau_ticks,
                                 std::span<const double> new_actions,
                                 std::span<const double> stored_estimates,
                                 double last_prev_action, int ticks_per_fast);

struct TickSeries {
  std::vector<double> time;
  std::vector<double> reference;
  std::vector<double> output;     // position read at the tick instant
  std::vector<double> u_raw;      // schedule value applied over the tick
  std::vector<double> u_applied;  // after saturation / dead zone
};

struct PeriodEvent {
  std::int64_t k = 0;
  double time = 0.0;
  // Recorded channel realization (shared across compared variants).
  double tau_rt = 0.0, tau_lr = 0.0, tau_rl = 0.0;
  bool delivered_lr = true, delivered_rl = true;
  bool forced_lr = false, forced_rl = false;
  // What the controller actually did this period.
  int arrival_tick = 0;
  PatternTag pattern = PatternTag::nonuniform_3_13;
  bool remote_sent = true;
  bool remote_estimated = false;
  double u_pi_used = 0.0;
  double kpd_used = 0.0, td_used = 0.0;
  ControlPacket packet;
};

struct AxisTrace {
  TickSeries ticks;
  std::vector<PeriodEvent> periods;
};

struct SimTrace {
  std::vector<AxisTrace> axes;
  double t_basic = 0.0;
  double sensor_period = 0.0;
  int ticks_per_fast = 0;
  int n = 0;
  int m_horizon = 0;
  std::size_t num_periods = 0;
  std::string variant_label;
  std::uint64_t cfg_hash = 0;
};

// Output samples on the sensor grid, skipping the first skip_periods entries.
std::vector<double> sensor_grid_output(const AxisTrace& axis, int ticks_per_period,
                                       std::size_t skip_periods);

SimTrace run(const ScenarioConfig& cfg);

// Same scenario against an ideal channel (no delay, no loss).
SimTrace run_nominal(const ScenarioConfig& cfg);

struct ComparisonTraces {
  SimTrace nominal;
  SimTrace dd_np;
  SimTrace dd_p;
  SimTrace di_p;
};

// Runs the nominal loop and the three networked variants against one shared
// channel realization (common random numbers) so the traces are comparable
// tick by tick.
ComparisonTraces run_comparison(const ScenarioConfig& cfg);

}  // namespace drpid
