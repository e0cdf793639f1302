#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "drpid/controllers.hpp"
#include "drpid/network.hpp"
#include "drpid/plant.hpp"

namespace drpid {

enum class ControllerVariant { delay_dependent, delay_independent };

// Remote-to-local payload: the current (actual or estimated) slow-rate PI
// action plus the lookahead of estimated future actions, one per sensor
// period, consumed by the local side while packets are missing.
struct ControlPacket {
  std::int64_t seq = -1;
  double u_pi_current = 0.0;
  std::vector<double> u_pi_future;
  bool estimated = false;
};

// Remote-side memory carried between sensor periods. x_hat/y_hat/u_pi_hat are
// the one-period-ahead estimates produced by the last cascade run; they stand
// in for the measurement and the PI action whenever the sensor packet is lost.
struct PredictorState {
  State2 x_hat{0.0, 0.0};
  double y_hat = 0.0;
  double u_pi_hat = 0.0;
  PiState pi_shadow;
  PdState pd_shadow;
  double prev_last_pd = 0.0;  // modeled PD action held at the start of the period
};

// Initial-state resetting: iteration 1 adopts the measured (or stored
// estimated) slow-rate state, later iterations chain the previous estimate.
State2 reset_initial_state(int iteration, const State2& current_dotted,
                           const State2& previous_iteration_estimate);

// One sensor period worth of fast-rate PD actions from a held PI value.
std::vector<double> predict_pd_actions_independent(double u_pi_current, double u_pi_prev,
                                                   const PidDesign& design);

std::vector<double> predict_pd_actions_dependent(double u_pi_current, double u_pi_prev,
                                                 const ScheduledGains& gains_first,
                                                 const ScheduledGains& gains_rest, int iteration,
                                                 double t_fast, int n);

struct Propagated {
  State2 x;
  double y;
};

// Advances the model state across one sensor period on the basic-period grid.
// Independent variant: pd_actions has N entries, applied uniformly from tick
// zero. Dependent variant: N+1 entries, the first held until switch_tick, the
// rest aligned to the fast-period boundaries.
Propagated propagate_state(const State2& x, std::span<const double> pd_actions,
                           ControllerVariant variant, const DiscretePlant& model_t,
                           int ticks_per_fast, int switch_tick);

// One chained PI estimate (the integrator-resetting recursion): from the
// dotted state of the period being left, produce the next period's action.
double predict_pi_action(double u_pi_dotted, double r_now, double y_now_dotted, double r_next,
                         double y_next_hat, const PidDesign& design);

struct CascadeInputs {
  std::int64_t k = 0;
  double u_pi_current = 0.0;  // dotted: actual on delivery, estimated otherwise
  double y_current = 0.0;     // dotted
  State2 x_current{0.0, 0.0};  // dotted
  bool estimated = false;
  // r_k .. r_{k+M}, length m_horizon + 1
  std::vector<double> reference_window;
};

struct CascadeConfig {
  ControllerVariant variant = ControllerVariant::delay_independent;
  PidDesign design;
  GainScheduleLaw law;      // dependent variant only
  DelayModel delay;         // dependent variant: tau_m = mode, tau_max
  DiscretePlant model_t;    // basic-period model
  int ticks_per_fast = 10;  // L
  int m_horizon = 3;        // M
};

// Runs the full cascade M times (reset -> PD prediction -> propagation -> PI
// prediction), updates the predictor state for the next period, and returns
// the packet to ship.
ControlPacket build_packet(const CascadeInputs& in, PredictorState& state,
                           const CascadeConfig& cfg);

// Estimate the stored packet holds for sensor period k; throws if the packet
// does not cover it (the channel loss cap makes that unreachable).
double stored_estimate_for(const ControlPacket& pkt, std::int64_t k);

}  // namespace drpid
