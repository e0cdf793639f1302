#include "drpid/controllers.hpp"

#include <stdexcept>

namespace drpid {

PiResult pi_step(const PiState& state, double r, double y, const PidDesign& design) {
  const double e = r - y;
  const double memory_coeff = 1.0 - design.sensor_period() / design.ti;
  PiResult res;
  res.u_pi = state.u_prev + design.k_pi * (e - memory_coeff * state.e_prev);
  res.state = PiState{res.u_pi, e};
  return res;
}

std::vector<double> expand_and_hold(double u_pi_slow, int n) {
  if (n < 1) throw std::invalid_argument("expand_and_hold: n >= 1 required");
  return std::vector<double>(static_cast<std::size_t>(n), u_pi_slow);
}

// Shared PD difference step; both controller flavors and the prediction stage
// route through this single out-of-line definition so equal inputs give
// bit-equal outputs everywhere.
static PdResult pd_step_raw(const PdState& state, double u_pi_fast, double kpd, double td,
                            double t_fast) {
  PdResult res;
  res.u_pd = kpd * (1.0 + td / t_fast) * u_pi_fast - kpd * (td / t_fast) * state.u_pi_prev;
  res.state = PdState{u_pi_fast};
  return res;
}

PdResult pd_step_independent(const PdState& state, double u_pi_fast, const PidDesign& design) {
  return pd_step_raw(state, u_pi_fast, design.k_pd, design.td, design.t_fast);
}

ScheduledGains schedule_gains(double tau, const PidDesign& design, const GainScheduleLaw& law) {
  if (tau < 0.0 || tau > law.tau_max) {
    throw std::out_of_range("schedule_gains: tau outside the validated range [0, tau_max]");
  }
  return ScheduledGains{law.kpd_slope * tau + design.k_pd, law.td_slope * tau + design.td};
}

PdResult pd_step_dependent(const PdState& state, double u_pi_fast, const ScheduledGains& g,
                           double t_fast) {
  return pd_step_raw(state, u_pi_fast, g.kpd_tau, g.td_tau, t_fast);
}

}  // namespace drpid
