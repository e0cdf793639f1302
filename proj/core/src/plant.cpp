#include "drpid/plant.hpp"

#include <cmath>
#include <stdexcept>

namespace drpid {

DiscretePlant discretize_zoh(const ContinuousPlant& plant, double h) {
  if (!(h >= 0.0)) {
    throw std::invalid_argument("discretize_zoh: period must be >= 0");
  }
  // Controllable realization A_c = [[0,1],[0,-a]], B_c = [0,g], C = [1,0].
  // exp(A_c h) and the input integral have closed forms via e^{-a h}.
  const double a = plant.pole;
  const double g = plant.gain_num;
  const double ead = std::exp(-a * h);
  const double phi1 = (1.0 - ead) / a;  // integral of e^{-a s} over [0,h]

  DiscretePlant dp;
  dp.a11 = 1.0;
  dp.a12 = phi1;
  dp.a21 = 0.0;
  dp.a22 = ead;
  dp.b1 = g * (h - phi1) / a;
  dp.b2 = g * phi1;
  dp.period = h;
  if (!std::isfinite(dp.a12) || !std::isfinite(dp.b1) || !std::isfinite(dp.b2)) {
    throw std::invalid_argument("discretize_zoh: non-finite result, invalid period");
  }
  return dp;
}

StepResult step(const DiscretePlant& dp, const State2& x, double u) {
  StepResult r;
  r.x_next[0] = dp.a11 * x[0] + dp.a12 * x[1] + dp.b1 * u;
  r.x_next[1] = dp.a21 * x[0] + dp.a22 * x[1] + dp.b2 * u;
  r.y = r.x_next[0];
  return r;
}

double clamp_input(double u, const InputNonlinearity& nl) {
  if (nl.dead_zone_enabled && std::fabs(u) < nl.dead_zone) {
    return 0.0;
  }
  if (u > nl.saturation) return nl.saturation;
  if (u < -nl.saturation) return -nl.saturation;
  return u;
}

ContinuousPlant perturb(const ContinuousPlant& plant, double q_pct, double r_pct) {
  if (q_pct < 0.0 || q_pct >= 100.0 || r_pct < 0.0 || r_pct >= 100.0) {
    throw std::invalid_argument("perturb: percentages must lie in [0, 100)");
  }
  // q scales the numerator gain down, r scales the time constant down with
  // the numerator held, so the static gain K = gain_num/pole compounds both
  // decrements. This keeps the tracking degradation monotone in q and in r.
  ContinuousPlant out;
  out.gain_num = plant.gain_num * (1.0 - q_pct / 100.0);
  out.pole = plant.pole / (1.0 - r_pct / 100.0);
  return out;
}

}  // namespace drpid
