#include "drpid/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace drpid {

double accumulated_error(std::span<const double> trace, std::span<const double> nominal) {
  if (trace.size() != nominal.size() || trace.empty()) {
    throw std::invalid_argument("accumulated_error: traces must share a non-empty grid");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < trace.size(); ++i) sum += std::fabs(trace[i] - nominal[i]);
  return sum;
}

double overshoot(std::span<const double> trace, std::span<const double> nominal) {
  if (trace.size() != nominal.size() || trace.empty()) {
    throw std::invalid_argument("overshoot: traces must share a non-empty grid");
  }
  const auto [tmin, tmax] = std::minmax_element(trace.begin(), trace.end());
  const auto [nmin, nmax] = std::minmax_element(nominal.begin(), nominal.end());
  return std::max(std::fabs(*tmax - *nmax), std::fabs(*tmin - *nmin));
}

double j_improvement(double value, double worst) {
  // value/worst first: the normalizing cell then scores exactly 0 and an
  // exact-nominal trace exactly 100.
  if (worst > 0.0) return 100.0 - 100.0 * (value / worst);
  return value == 0.0 ? 100.0 : 0.0;
}

namespace {

std::size_t skip_periods_for(const SimTrace& trace, double gamma_skip) {
  return static_cast<std::size_t>(std::ceil(gamma_skip / trace.sensor_period - 1e-12));
}

std::vector<double> window_of(const SimTrace& trace, double gamma_skip) {
  return sensor_grid_output(trace.axes.front(), trace.ticks_per_fast * trace.n,
                            skip_periods_for(trace, gamma_skip));
}

}  // namespace

IndexReport comparison_report(const ComparisonTraces& traces, double gamma_skip) {
  const std::vector<double> nom = window_of(traces.nominal, gamma_skip);
  const std::vector<double> ddnp = window_of(traces.dd_np, gamma_skip);
  const std::vector<double> ddp = window_of(traces.dd_p, gamma_skip);
  const std::vector<double> dip = window_of(traces.di_p, gamma_skip);

  const double e_worst = accumulated_error(ddnp, nom);
  const double o_worst = overshoot(ddnp, nom);

  IndexReport report;
  report.degenerate = e_worst == 0.0 || o_worst == 0.0;
  auto add = [&](const std::string& name, const std::vector<double>& y) {
    IndexRow row;
    row.name = name;
    row.e = accumulated_error(y, nom);
    row.o = overshoot(y, nom);
    row.j1 = j_improvement(row.e, e_worst);
    row.j2 = j_improvement(row.o, o_worst);
    report.rows.push_back(row);
  };
  add("dd_np", ddnp);
  add("dd_p", ddp);
  add("di_p", dip);
  return report;
}

RobustnessReport robustness_grid(const ScenarioConfig& base, std::span<const double> q_values,
                                 std::span<const double> r_values) {
  if (q_values.empty() || r_values.empty()) {
    throw std::invalid_argument("robustness_grid: empty grid");
  }
  auto has_zero = [](std::span<const double> v) {
    return std::any_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
  };
  if (!has_zero(q_values) || !has_zero(r_values)) {
    throw std::invalid_argument("robustness_grid: grids must include the nominal cell (0)");
  }

  RobustnessReport report;
  report.q_values.assign(q_values.begin(), q_values.end());
  report.r_values.assign(r_values.begin(), r_values.end());

  // One run per cell, common seed; the controller and predictor keep the
  // nominal model while the simulated plant drifts.
  std::vector<std::vector<double>> outputs;
  outputs.reserve(q_values.size() * r_values.size());
  for (const double r : r_values) {
    for (const double q : q_values) {
      ScenarioConfig cell = base;
      cell.variant = ControllerVariant::delay_independent;
      cell.prediction = true;
      cell.plant_q_pct = q;
      cell.plant_r_pct = r;
      cell.validate();
      outputs.push_back(window_of(run(cell), base.gamma_skip));
    }
  }

  auto cell_output = [&](std::size_t ir, std::size_t iq) -> const std::vector<double>& {
    return outputs[ir * q_values.size() + iq];
  };

  std::size_t iq0 = 0, ir0 = 0;
  for (std::size_t i = 0; i < q_values.size(); ++i)
    if (q_values[i] == 0.0) iq0 = i;
  for (std::size_t i = 0; i < r_values.size(); ++i)
    if (r_values[i] == 0.0) ir0 = i;
  const std::vector<double>& reference_trace = cell_output(ir0, iq0);
  const std::vector<double>& worst_trace = cell_output(r_values.size() - 1, q_values.size() - 1);

  const double e_worst = accumulated_error(worst_trace, reference_trace);
  const double o_worst = overshoot(worst_trace, reference_trace);
  report.degenerate = e_worst == 0.0 || o_worst == 0.0;

  for (std::size_t ir = 0; ir < r_values.size(); ++ir) {
    for (std::size_t iq = 0; iq < q_values.size(); ++iq) {
      RobustnessCell cell;
      cell.q = q_values[iq];
      cell.r = r_values[ir];
      cell.e = accumulated_error(cell_output(ir, iq), reference_trace);
      cell.o = overshoot(cell_output(ir, iq), reference_trace);
      cell.j3 = j_improvement(cell.e, e_worst);
      cell.j4 = j_improvement(cell.o, o_worst);
      report.cells.push_back(cell);
    }
  }
  return report;
}

}  // namespace drpid
