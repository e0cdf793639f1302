#pragma once

#include <span>
#include <string>
#include <vector>

#include "drpid/engine.hpp"
#include "drpid/scenario.hpp"

namespace drpid {

// Sum of absolute deviations from the nominal trace over the common grid.
double accumulated_error(std::span<const double> trace, std::span<const double> nominal);

// Worst deviation of the trace extremes from the nominal extremes.
double overshoot(std::span<const double> trace, std::span<const double> nominal);

// Percent improvement against the designated worst case: 100 - 100*value/worst.
// A zero worst case makes the whole comparison degenerate; zero values score
// 100 and everything else scores 0, and reports carry a degenerate flag.
double j_improvement(double value, double worst);

struct IndexRow {
  std::string name;
  double e = 0.0;
  double o = 0.0;
  double j1 = 0.0;
  double j2 = 0.0;
};

struct IndexReport {
  std::vector<IndexRow> rows;  // dd_np, dd_p, di_p
  bool degenerate = false;     // worst-case E or O was zero
};

// Cost indexes for one comparison run; the no-prediction trace is the
// normalizer, axis 0 is scored.
IndexReport comparison_report(const ComparisonTraces& traces, double gamma_skip);

struct RobustnessCell {
  double q = 0.0;
  double r = 0.0;
  double e = 0.0;
  double o = 0.0;
  double j3 = 0.0;
  double j4 = 0.0;
};

struct RobustnessReport {
  std::vector<double> q_values;
  std::vector<double> r_values;
  std::vector<RobustnessCell> cells;  // row-major over (r, q)
  bool degenerate = false;

  const RobustnessCell& at(std::size_t ir, std::size_t iq) const {
    return cells[ir * q_values.size() + iq];
  }
};

// Runs the packet-based controller once per (q, r) cell with the real plant
// perturbed and the model left nominal, all cells sharing the base seed. The
// (0, 0) cell is the reference trace; the last cell is the normalizer.
RobustnessReport robustness_grid(const ScenarioConfig& base, std::span<const double> q_values,
                                 std::span<const double> r_values);

}  // namespace drpid
