#include "drpid/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace drpid {

namespace {

// Filtered square wave evaluated in closed form: the filter response is a
// piecewise exponential, advanced breakpoint by breakpoint from rest at t=0.
// The handful of iterations keeps this a pure function of time, which the
// prediction stage relies on to read future references.
double filtered_step(const ReferenceSpec& s, double time) {
  if (time <= 0.0) return 0.0;
  const double half = s.square_period / 2.0;
  auto target = [&](int seg) { return seg % 2 == 0 ? s.amplitude : -s.amplitude; };
  if (s.filter_tc <= 0.0) {
    return target(static_cast<int>(std::floor(time / half)));
  }
  double value = 0.0;
  double t_seg = 0.0;
  int seg = 0;
  while (t_seg + half < time) {
    value = target(seg) + (value - target(seg)) * std::exp(-half / s.filter_tc);
    t_seg += half;
    ++seg;
  }
  return target(seg) + (value - target(seg)) * std::exp(-(time - t_seg) / s.filter_tc);
}

}  // namespace

double reference(const ReferenceSpec& spec, int axis, double time) {
  switch (spec.kind) {
    case ReferenceKind::filtered_step:
      return filtered_step(spec, time);
    case ReferenceKind::lissajous:
      if (axis == 0) return spec.amp_x * std::sin(spec.freq_a * spec.omega * time + spec.delta);
      return spec.amp_y * std::sin(spec.freq_b * spec.omega * time);
  }
  throw std::invalid_argument("reference: unknown spec kind");
}

}  // namespace drpid
