#include "drpid/engine.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace drpid {

namespace {

enum class RunKind { nominal, dd_np, dd_p, di_p };

std::string label(RunKind kind) {
  switch (kind) {
    case RunKind::nominal: return "nominal";
    case RunKind::dd_np: return "dd_np";
    case RunKind::dd_p: return "dd_p";
    case RunKind::di_p: return "di_p";
  }
  return "?";
}

RunKind kind_from_config(const ScenarioConfig& cfg) {
  if (cfg.variant == ControllerVariant::delay_independent) {
    // The packet-based controller is defined with its prediction stage; there
    // is no meaningful delay-independent no-prediction mode.
    return RunKind::di_p;
  }
  return cfg.prediction ? RunKind::dd_p : RunKind::dd_np;
}

struct RemoteNode {
  PiState pi;
  PredictorState pred;
};

struct LocalNode {
  double u_pi_memory = 0.0;      // fast-rate PI input memory (the PD z^-1 term)
  double prev_last_action = 0.0; // last schedule value of the previous period
  ControlPacket stored;          // newest delivered packet
};

std::vector<double> pd_sequence(RunKind kind, double u_pi, double memory,
                                const PidDesign& design, const ScheduledGains& gains) {
  if (kind == RunKind::dd_p || kind == RunKind::dd_np) {
    return predict_pd_actions_dependent(u_pi, memory, gains, gains, 1, design.t_fast, design.n);
  }
  return predict_pd_actions_independent(u_pi, memory, design);
}

// One axis, one controller kind, against a fixed channel realization.
// `control` drives the loop; `recorded` is what lands in the event rows (the
// comparison runner hands the shared realization to the nominal run too).
AxisTrace simulate_axis(const ScenarioConfig& cfg, RunKind kind, int axis,
                        const std::vector<PeriodChannel>& control,
                        const std::vector<PeriodChannel>& recorded) {
  const int L = cfg.ticks_per_fast();
  const int n = cfg.design.n;
  const int ticks_per_period = L * n;
  const std::size_t periods = cfg.num_periods();
  const int m = cfg.dropout.max_consecutive;
  const double nt = cfg.design.sensor_period();
  const double wait_lr = cfg.resolved_lr_wait();

  const DiscretePlant plant_t = discretize_zoh(cfg.real_plant(), cfg.t_basic);
  const DiscretePlant model_t = discretize_zoh(cfg.plant, cfg.t_basic);

  GainScheduleLaw law = cfg.gain_law;
  law.tau_max = cfg.delay.tau_max;

  const bool dependent = kind == RunKind::dd_p || kind == RunKind::dd_np;
  CascadeConfig cascade;
  cascade.variant =
      dependent ? ControllerVariant::delay_dependent : ControllerVariant::delay_independent;
  cascade.design = cfg.design;
  cascade.law = law;
  cascade.delay = cfg.delay;
  cascade.model_t = model_t;
  cascade.ticks_per_fast = L;
  cascade.m_horizon = m;

  auto r_sensor = [&](std::int64_t k) {
    return k < 0 ? 0.0 : reference(cfg.ref, axis, static_cast<double>(k) * nt);
  };
  auto window = [&](std::int64_t k) {
    std::vector<double> w(static_cast<std::size_t>(m) + 1);
    for (int i = 0; i <= m; ++i) w[static_cast<std::size_t>(i)] = r_sensor(k + i);
    return w;
  };

  RemoteNode remote;
  LocalNode local;
  const bool has_predictor = kind != RunKind::dd_np;
  if (has_predictor) {
    // Seed the predictor and the locally stored packet with a cascade run for
    // the period before the start, everything at rest. This gives the first
    // periods coherent estimates even if their packets are lost.
    CascadeInputs init;
    init.k = -1;
    init.reference_window = window(-1);
    local.stored = build_packet(init, remote.pred, cascade);
  }

  AxisTrace trace;
  trace.ticks.time.reserve(periods * static_cast<std::size_t>(ticks_per_period));
  trace.periods.reserve(periods);

  State2 x{0.0, 0.0};

  for (std::size_t kp = 0; kp < periods; ++kp) {
    const auto k = static_cast<std::int64_t>(kp);
    const PeriodChannel& pc = control[kp];
    const double y_meas = x[0];
    const State2 x_meas = x;
    const double r_k = r_sensor(k);

    // Arrival of this period's control packet at the local side. A lost
    // sensor packet delays the remote computation until its waiting time.
    const double arrival_delay = (pc.delivered_lr ? pc.tau_lr : wait_lr) + pc.tau_rl;
    const int arrival_tick = quantize_delay(arrival_delay, cfg.t_basic);

    PeriodEvent ev;
    ev.k = k;
    ev.time = static_cast<double>(k) * nt;
    const PeriodChannel& rec = recorded[kp];
    ev.tau_rt = rec.tau_rt;
    ev.tau_lr = rec.tau_lr;
    ev.tau_rl = rec.tau_rl;
    ev.delivered_lr = rec.delivered_lr;
    ev.delivered_rl = rec.delivered_rl;
    ev.forced_lr = rec.forced_lr;
    ev.forced_rl = rec.forced_rl;

    // Remote side: PI action (actual or estimated) plus the prediction stage.
    ControlPacket pkt;
    bool sent = false;
    if (has_predictor) {
      double u_pi, y_dot;
      State2 x_dot;
      if (pc.delivered_lr) {
        PiResult r = pi_step(remote.pi, r_k, y_meas, cfg.design);
        remote.pi = r.state;
        u_pi = r.u_pi;
        y_dot = y_meas;
        x_dot = x_meas;
      } else {
        u_pi = remote.pred.u_pi_hat;
        y_dot = remote.pred.y_hat;
        x_dot = remote.pred.x_hat;
        remote.pi = PiState{u_pi, r_k - y_dot};
        ev.remote_estimated = true;
      }
      CascadeInputs ci;
      ci.k = k;
      ci.u_pi_current = u_pi;
      ci.y_current = y_dot;
      ci.x_current = x_dot;
      ci.estimated = ev.remote_estimated;
      ci.reference_window = window(k);
      pkt = build_packet(ci, remote.pred, cascade);
      sent = true;
      ev.u_pi_used = u_pi;
    } else {
      if (pc.delivered_lr) {
        PiResult r = pi_step(remote.pi, r_k, y_meas, cfg.design);
        remote.pi = r.state;
        pkt.seq = k;
        pkt.u_pi_current = r.u_pi;
        sent = true;
        ev.u_pi_used = r.u_pi;
      } else {
        ev.u_pi_used = std::numeric_limits<double>::quiet_NaN();
      }
    }
    ev.remote_sent = sent;

    // Local side: pick the actuation pattern for this period.
    ActuationSchedule sched;
    if (!dependent) {
      const double est_u = stored_estimate_for(local.stored, k);
      const std::vector<double> est_pd =
          pd_sequence(kind, est_u, local.u_pi_memory, cfg.design, {});
      ev.kpd_used = cfg.design.k_pd;
      ev.td_used = cfg.design.td;
      if (pc.delivered_rl) {
        const std::vector<double> act_pd =
            pd_sequence(kind, pkt.u_pi_current, local.u_pi_memory, cfg.design, {});
        sched = build_schedule(ControllerVariant::delay_independent, true, arrival_tick, act_pd,
                               est_pd, local.prev_last_action, L);
        local.u_pi_memory = pkt.u_pi_current;
        local.stored = pkt;
      } else {
        sched = build_schedule(ControllerVariant::delay_independent, false, 0, {}, est_pd,
                               local.prev_last_action, L);
        local.u_pi_memory = est_u;
      }
    } else {
      const bool new_actions_arrive = sent && pc.delivered_rl;
      if (new_actions_arrive) {
        // The law is only fitted up to tau_max; a late arrival after a sensor
        // dropout is retuned at the boundary.
        const ScheduledGains g =
            schedule_gains(std::min(arrival_delay, law.tau_max), cfg.design, law);
        const std::vector<double> act_pd =
            pd_sequence(kind, pkt.u_pi_current, local.u_pi_memory, cfg.design, g);
        sched = build_schedule(ControllerVariant::delay_dependent, true, arrival_tick, act_pd,
                               {}, local.prev_last_action, L);
        local.u_pi_memory = pkt.u_pi_current;
        local.stored = pkt;
        ev.kpd_used = g.kpd_tau;
        ev.td_used = g.td_tau;
      } else {
        const ScheduledGains g = schedule_gains(law.tau_max, cfg.design, law);
        const int wait_tick = quantize_delay(law.tau_max, cfg.t_basic);
        std::vector<double> est_pd;
        if (kind == RunKind::dd_p) {
          const double est_u = stored_estimate_for(local.stored, k);
          est_pd = pd_sequence(kind, est_u, local.u_pi_memory, cfg.design, g);
          local.u_pi_memory = est_u;
        } else {
          // No prediction stage: nothing new arrives, the previous action
          // stays on for the whole period.
          est_pd.assign(static_cast<std::size_t>(n), local.prev_last_action);
        }
        sched = build_schedule(ControllerVariant::delay_dependent, false, wait_tick, {}, est_pd,
                               local.prev_last_action, L);
        ev.kpd_used = g.kpd_tau;
        ev.td_used = g.td_tau;
      }
    }
    local.prev_last_action = sched.values.back();

    ev.arrival_tick = arrival_tick;
    ev.pattern = sched.pattern;
    ev.packet = pkt;
    trace.periods.push_back(std::move(ev));

    // Plant, on the basic grid.
    for (int l = 0; l < ticks_per_period; ++l) {
      const std::int64_t tick = k * ticks_per_period + l;
      const double time = static_cast<double>(tick) * cfg.t_basic;
      const double u_raw = sched.values[static_cast<std::size_t>(l)];
      const double u_app = clamp_input(u_raw, cfg.nonlinearity);
      trace.ticks.time.push_back(time);
      trace.ticks.reference.push_back(reference(cfg.ref, axis, time));
      trace.ticks.output.push_back(x[0]);
      trace.ticks.u_raw.push_back(u_raw);
      trace.ticks.u_applied.push_back(u_app);
      x = step(plant_t, x, u_app).x_next;
      if (!std::isfinite(x[0]) || !std::isfinite(x[1])) {
        throw std::runtime_error("engine: state diverged at t=" + std::to_string(time) +
                                 " (period " + std::to_string(k) + ")");
      }
    }
  }
  return trace;
}

SimTrace simulate(const ScenarioConfig& cfg, RunKind kind,
                  const std::vector<std::vector<PeriodChannel>>& control,
                  const std::vector<std::vector<PeriodChannel>>& recorded) {
  SimTrace trace;
  trace.t_basic = cfg.t_basic;
  trace.sensor_period = cfg.design.sensor_period();
  trace.ticks_per_fast = cfg.ticks_per_fast();
  trace.n = cfg.design.n;
  trace.m_horizon = cfg.dropout.max_consecutive;
  trace.num_periods = cfg.num_periods();
  trace.variant_label = label(kind);
  trace.cfg_hash = config_hash(cfg);
  const int axes = cfg.ref.axes();
  trace.axes.reserve(static_cast<std::size_t>(axes));
  for (int axis = 0; axis < axes; ++axis) {
    trace.axes.push_back(simulate_axis(cfg, kind, axis, control[static_cast<std::size_t>(axis)],
                                       recorded[static_cast<std::size_t>(axis)]));
  }
  return trace;
}

std::vector<std::vector<PeriodChannel>> sample_all_axes(const ScenarioConfig& cfg) {
  ChannelParams params{cfg.delay, cfg.dropout.p, cfg.dropout.max_consecutive, cfg.alpha};
  std::vector<std::vector<PeriodChannel>> out;
  const int axes = cfg.ref.axes();
  out.reserve(static_cast<std::size_t>(axes));
  for (int axis = 0; axis < axes; ++axis) {
    out.push_back(sample_channel_realization(cfg.seed, params, cfg.num_periods(), axis));
  }
  return out;
}

std::vector<std::vector<PeriodChannel>> zero_all_axes(const ScenarioConfig& cfg) {
  return std::vector<std::vector<PeriodChannel>>(
      static_cast<std::size_t>(cfg.ref.axes()),
      zero_channel_realization(cfg.num_periods()));
}

}  // namespace

std::string to_string(PatternTag tag) {
  switch (tag) {
    case PatternTag::uniform_3_17: return "uniform_3_17";
    case PatternTag::nonuniform_3_13: return "nonuniform_3_13";
    case PatternTag::nonuniform_3_10: return "nonuniform_3_10";
    case PatternTag::nonuniform_3_15: return "nonuniform_3_15";
  }
  return "?";
}

ActuationSchedule build_schedule(ControllerVariant variant, bool delivered, int tau_ticks,
                                 std::span<const double> new_actions,
                                 std::span<const double> stored_estimates,
                                 double last_prev_action, int ticks_per_fast) {
  const bool independent = variant == ControllerVariant::delay_independent;
  const std::size_t n = independent || !delivered ? stored_estimates.size() : new_actions.size();
  if (n == 0) throw std::invalid_argument("build_schedule: no actions for this period");
  const int total = ticks_per_fast * static_cast<int>(n);
  const bool uses_switch = !(independent && !delivered);
  if (uses_switch && (tau_ticks < 0 || tau_ticks >= total)) {
    throw std::invalid_argument("build_schedule: tau_ticks outside [0, L*N)");
  }
  if (delivered && new_actions.size() != n) {
    throw std::invalid_argument("build_schedule: new_actions length mismatch");
  }

  ActuationSchedule out;
  out.values.resize(static_cast<std::size_t>(total));
  for (int l = 0; l < total; ++l) {
    const auto slot = static_cast<std::size_t>(l / ticks_per_fast);
    double v;
    if (independent) {
      v = delivered && l >= tau_ticks ? new_actions[slot] : stored_estimates[slot];
    } else {
      if (l < tau_ticks) {
        v = last_prev_action;
      } else {
        v = delivered ? new_actions[slot] : stored_estimates[slot];
      }
    }
    out.values[static_cast<std::size_t>(l)] = v;
  }
  if (independent) {
    out.pattern = delivered ? PatternTag::nonuniform_3_13 : PatternTag::uniform_3_17;
  } else {
    out.pattern = delivered ? PatternTag::nonuniform_3_10 : PatternTag::nonuniform_3_15;
  }
  return out;
}

std::vector<double> sensor_grid_output(const AxisTrace& axis, int ticks_per_period,
                                       std::size_t skip_periods) {
  std::vector<double> out;
  const std::size_t total = axis.periods.size();
  for (std::size_t k = skip_periods; k < total; ++k) {
    out.push_back(axis.ticks.output[k * static_cast<std::size_t>(ticks_per_period)]);
  }
  return out;
}

SimTrace run(const ScenarioConfig& cfg) {
  cfg.validate();
  const auto realization = sample_all_axes(cfg);
  return simulate(cfg, kind_from_config(cfg), realization, realization);
}

SimTrace run_nominal(const ScenarioConfig& cfg) {
  cfg.validate();
  const auto zeros = zero_all_axes(cfg);
  return simulate(cfg, RunKind::nominal, zeros, zeros);
}

ComparisonTraces run_comparison(const ScenarioConfig& cfg) {
  cfg.validate();
  const auto shared = sample_all_axes(cfg);
  const auto zeros = zero_all_axes(cfg);

  ScenarioConfig c_dd_np = cfg;
  c_dd_np.variant = ControllerVariant::delay_dependent;
  c_dd_np.prediction = false;
  c_dd_np.validate();
  ScenarioConfig c_dd_p = c_dd_np;
  c_dd_p.prediction = true;
  ScenarioConfig c_di_p = cfg;
  c_di_p.variant = ControllerVariant::delay_independent;
  c_di_p.prediction = true;

  ComparisonTraces out;
  out.nominal = simulate(c_di_p, RunKind::nominal, zeros, shared);
  out.dd_np = simulate(c_dd_np, RunKind::dd_np, shared, shared);
  out.dd_p = simulate(c_dd_p, RunKind::dd_p, shared, shared);
  out.di_p = simulate(c_di_p, RunKind::di_p, shared, shared);
  return out;
}

}  // namespace drpid
