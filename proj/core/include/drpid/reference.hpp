#pragma once

namespace drpid {

enum class ReferenceKind { filtered_step, lissajous };

// Pure function of time per axis. Filtered step: a symmetric square wave fed
// through a first-order filter starting at rest (kept below the actuator
// saturation by construction). Lissajous: axis 0 follows
// amp_x*sin(a*omega*t + delta), axis 1 follows amp_y*sin(b*omega*t).
struct ReferenceSpec {
  ReferenceKind kind = ReferenceKind::filtered_step;

  double amplitude = 0.04;    // m
  double square_period = 20.0;  // s
  double filter_tc = 0.3;     // s; 0 disables the filter

  double amp_x = 0.02;   // m
  double amp_y = 0.016;  // m
  double freq_a = 1.0;
  double freq_b = 2.0;
  double delta = 1.5707963267948966;
  double omega = 0.20943951023931953;  // rad/s

  int axes() const { return kind == ReferenceKind::lissajous ? 2 : 1; }
};

double reference(const ReferenceSpec& spec, int axis, double time);

}  // namespace drpid
