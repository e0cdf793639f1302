#pragma once

#include <vector>

namespace drpid {

// Dual-rate PID design split: PI at the sensor period N*T, PD at the actuation
// period T. k_pi and k_pd default to 1 and kp.
struct PidDesign {
  double kp = 12.0;
  double td = 0.01;  // s
  double ti = 3.5;   // s
  int n = 2;         // multiplicity, sensor period = n * t_fast
  double t_fast = 0.1;  // s
  double k_pi = 1.0;
  double k_pd = 12.0;

  double sensor_period() const { return static_cast<double>(n) * t_fast; }
};

struct PiState {
  double u_prev = 0.0;
  double e_prev = 0.0;
};

struct PdState {
  double u_pi_prev = 0.0;
};

struct ScheduledGains {
  double kpd_tau = 0.0;
  double td_tau = 0.0;  // s
};

// Affine retuning law for the delay-dependent PD controller:
//   kpd(tau) = kpd_slope * tau + k_pd,  td(tau) = td_slope * tau + td.
struct GainScheduleLaw {
  double kpd_slope = -50.0;
  double td_slope = 0.5;
  double tau_max = 0.08;  // validated range of the law
};

struct PiResult {
  double u_pi;
  PiState state;
};

// Slow-rate PI difference step: u = u_prev + k_pi*(e - (1 - NT/Ti) e_prev).
PiResult pi_step(const PiState& state, double r, double y, const PidDesign& design);

// Slow-to-fast rate conversion for step-like references: repeat-N hold.
std::vector<double> expand_and_hold(double u_pi_slow, int n);

struct PdResult {
  double u_pd;
  PdState state;
};

PdResult pd_step_independent(const PdState& state, double u_pi_fast, const PidDesign& design);

ScheduledGains schedule_gains(double tau, const PidDesign& design, const GainScheduleLaw& law);

PdResult pd_step_dependent(const PdState& state, double u_pi_fast, const ScheduledGains& g,
                           double t_fast);

}  // namespace drpid
