#pragma once

#include <array>

namespace drpid {

// State of the double-integrator-with-pole axis model: [position m, velocity m/s].
using State2 = std::array<double, 2>;

// Continuous axis dynamics  G(s) = gain_num / (s * (s + pole)).
// The equivalent (K, tau) form with K = gain_num/pole, tau = 1/pole is what
// the robustness sweep perturbs.
struct ContinuousPlant {
  double gain_num = 6.3;  // m / (c.a.u. * s^2) numerator constant
  double pole = 17.7;     // 1/s

  double static_gain() const { return gain_num / pole; }
  double time_constant() const { return 1.0 / pole; }
};

// Exact zero-order-hold discretization of ContinuousPlant at a fixed period.
//   x+ = A x + B u,  y = C x  with C = [1 0].
struct DiscretePlant {
  double a11, a12, a21, a22;
  double b1, b2;
  double period;

  double output(const State2& x) const { return x[0]; }
};

struct InputNonlinearity {
  double saturation = 1.0;  // symmetric limit, c.a.u.
  double dead_zone = 0.06;  // c.a.u.
  bool dead_zone_enabled = false;
};

// ZOH discretization in closed form for this two-state family.
DiscretePlant discretize_zoh(const ContinuousPlant& plant, double h);

// One discrete step; returns the post-step state, output read from it.
struct StepResult {
  State2 x_next;
  double y;
};
StepResult step(const DiscretePlant& dp, const State2& x, double u);

double clamp_input(double u, const InputNonlinearity& nl);

// Model-mismatch knob for the robustness study: q% off the numerator gain,
// r% off the time constant (pole raised accordingly, numerator held).
ContinuousPlant perturb(const ContinuousPlant& plant, double q_pct, double r_pct);

}  // namespace drpid
