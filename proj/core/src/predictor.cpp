#include "drpid/predictor.hpp"

#include <stdexcept>

namespace drpid {

State2 reset_initial_state(int iteration, const State2& current_dotted,
                           const State2& previous_iteration_estimate) {
  if (iteration < 1) throw std::invalid_argument("reset_initial_state: iteration >= 1");
  return iteration == 1 ? current_dotted : previous_iteration_estimate;
}

std::vector<double> predict_pd_actions_independent(double u_pi_current, double u_pi_prev,
                                                   const PidDesign& design) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(design.n));
  PdState pd{u_pi_prev};
  for (int j = 0; j < design.n; ++j) {
    PdResult r = pd_step_independent(pd, u_pi_current, design);
    out.push_back(r.u_pd);
    pd = r.state;
  }
  return out;
}

std::vector<double> predict_pd_actions_dependent(double u_pi_current, double u_pi_prev,
                                                 const ScheduledGains& gains_first,
                                                 const ScheduledGains& gains_rest, int iteration,
                                                 double t_fast, int n) {
  const ScheduledGains& g = iteration == 1 ? gains_first : gains_rest;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  PdState pd{u_pi_prev};
  for (int j = 0; j < n; ++j) {
    PdResult r = pd_step_dependent(pd, u_pi_current, g, t_fast);
    out.push_back(r.u_pd);
    pd = r.state;
  }
  return out;
}

Propagated propagate_state(const State2& x, std::span<const double> pd_actions,
                           ControllerVariant variant, const DiscretePlant& model_t,
                           int ticks_per_fast, int switch_tick) {
  const int L = ticks_per_fast;
  const bool dependent = variant == ControllerVariant::delay_dependent;
  const int n = dependent ? static_cast<int>(pd_actions.size()) - 1
                          : static_cast<int>(pd_actions.size());
  if (n < 1) throw std::invalid_argument("propagate_state: action count mismatch");
  const int total_ticks = L * n;
  if (dependent && (switch_tick < 0 || switch_tick > total_ticks)) {
    throw std::invalid_argument("propagate_state: switch_tick out of range");
  }

  Propagated out{x, x[0]};
  for (int l = 0; l < total_ticks; ++l) {
    double u;
    if (dependent) {
      u = l < switch_tick ? pd_actions[0]
                          : pd_actions[static_cast<std::size_t>(1 + l / L)];
    } else {
      u = pd_actions[static_cast<std::size_t>(l / L)];
    }
    StepResult s = step(model_t, out.x, u);
    out.x = s.x_next;
    out.y = s.y;
  }
  return out;
}

double predict_pi_action(double u_pi_dotted, double r_now, double y_now_dotted, double r_next,
                         double y_next_hat, const PidDesign& design) {
  const PiState chained{u_pi_dotted, r_now - y_now_dotted};
  return pi_step(chained, r_next, y_next_hat, design).u_pi;
}

ControlPacket build_packet(const CascadeInputs& in, PredictorState& state,
                           const CascadeConfig& cfg) {
  const int m = cfg.m_horizon;
  const int n = cfg.design.n;
  if (static_cast<int>(in.reference_window.size()) != m + 1) {
    throw std::invalid_argument("build_packet: reference window must hold m+1 samples");
  }

  ControlPacket pkt;
  pkt.seq = in.k;
  pkt.u_pi_current = in.u_pi_current;
  pkt.estimated = in.estimated;
  pkt.u_pi_future.reserve(static_cast<std::size_t>(m));

  ScheduledGains gains_first{}, gains_rest{};
  int switch_first = 0, switch_rest = 0;
  if (cfg.variant == ControllerVariant::delay_dependent) {
    gains_first = schedule_gains(delay_mode(cfg.delay), cfg.design, cfg.law);
    gains_rest = schedule_gains(cfg.delay.tau_max, cfg.design, cfg.law);
    switch_first = quantize_delay(delay_mode(cfg.delay), cfg.model_t.period);
    switch_rest = quantize_delay(cfg.delay.tau_max, cfg.model_t.period);
  }

  // Chained registers across the M iterations. Iteration i simulates sensor
  // period k+i-1 and emits the PI action for period k+i.
  State2 x_chain = reset_initial_state(1, in.x_current, state.x_hat);
  PiState pi_chain{in.u_pi_current, in.reference_window[0] - in.y_current};
  double pd_memory = state.pd_shadow.u_pi_prev;
  double held_pd = state.prev_last_pd;
  double u_pi_i = in.u_pi_current;

  for (int i = 1; i <= m; ++i) {
    std::vector<double> pd;
    Propagated prop;
    if (cfg.variant == ControllerVariant::delay_independent) {
      pd = predict_pd_actions_independent(u_pi_i, pd_memory, cfg.design);
      prop = propagate_state(x_chain, pd, cfg.variant, cfg.model_t, cfg.ticks_per_fast, 0);
    } else {
      pd = predict_pd_actions_dependent(u_pi_i, pd_memory, gains_first, gains_rest, i,
                                        cfg.design.t_fast, n);
      std::vector<double> actions;
      actions.reserve(static_cast<std::size_t>(n) + 1);
      actions.push_back(held_pd);
      actions.insert(actions.end(), pd.begin(), pd.end());
      prop = propagate_state(x_chain, actions, cfg.variant, cfg.model_t, cfg.ticks_per_fast,
                             i == 1 ? switch_first : switch_rest);
    }

    PiResult next = pi_step(pi_chain, in.reference_window[static_cast<std::size_t>(i)], prop.y,
                            cfg.design);
    pkt.u_pi_future.push_back(next.u_pi);

    if (i == 1) {
      state.x_hat = prop.x;
      state.y_hat = prop.y;
      state.u_pi_hat = next.u_pi;
      state.prev_last_pd = pd.back();
    }

    pd_memory = u_pi_i;
    held_pd = pd.back();
    x_chain = reset_initial_state(i + 1, in.x_current, prop.x);
    pi_chain = next.state;
    u_pi_i = next.u_pi;
  }

  state.pd_shadow = PdState{in.u_pi_current};
  state.pi_shadow = PiState{in.u_pi_current, in.reference_window[0] - in.y_current};
  return pkt;
}

double stored_estimate_for(const ControlPacket& pkt, std::int64_t k) {
  if (k == pkt.seq) return pkt.u_pi_current;
  const std::int64_t gap = k - pkt.seq;
  if (gap < 1 || gap > static_cast<std::int64_t>(pkt.u_pi_future.size())) {
    throw std::logic_error("stored_estimate_for: packet does not cover this period");
  }
  return pkt.u_pi_future[static_cast<std::size_t>(gap - 1)];
}

}  // namespace drpid
