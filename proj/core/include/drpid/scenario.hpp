#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drpid/controllers.hpp"
#include "drpid/network.hpp"
#include "drpid/plant.hpp"
#include "drpid/predictor.hpp"
#include "drpid/reference.hpp"

namespace drpid {

// Full description of one simulation run. Loaded from a flat key=value
// scenario file (see scenarios/ and the README key table); every field has a
// workable default so scenario files only state what they change.
struct ScenarioConfig {
  ContinuousPlant plant;        // the model used by controller and predictor
  double plant_q_pct = 0.0;     // real-plant static-gain decrement, percent
  double plant_r_pct = 0.0;     // real-plant time-constant decrement, percent
  InputNonlinearity nonlinearity;

  PidDesign design;
  GainScheduleLaw gain_law;

  DelayModel delay;
  DropoutModel dropout{0.3, 3};
  double alpha = 0.5;      // one-way split of the round-trip delay
  double lr_wait = -1.0;   // remote waiting time; <0 resolves to alpha*tau_max

  ControllerVariant variant = ControllerVariant::delay_independent;
  bool prediction = true;

  double t_basic = 0.01;
  double horizon = 30.0;
  std::uint64_t seed = 1;

  ReferenceSpec ref;
  double gamma_skip = 1.0;  // metrics window starts here, s

  std::vector<double> grid_q{0.0, 20.0, 30.0};
  std::vector<double> grid_r{0.0, 8.0, 12.0};

  // Derived quantities (valid after validate()).
  int ticks_per_fast() const;     // L
  int ticks_per_period() const;   // L*N
  std::size_t num_periods() const;
  double resolved_lr_wait() const;
  ContinuousPlant real_plant() const;  // model perturbed by (q, r)

  // Throws std::invalid_argument naming the violated invariant.
  void validate() const;
};

ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(const std::string& text, const std::string& origin = "<string>");

// Canonical resolved-key dump; hashing it ties outputs to the exact config.
std::string canonical_dump(const ScenarioConfig& cfg);
std::uint64_t config_hash(const ScenarioConfig& cfg);

std::string to_string(ControllerVariant v);
std::string to_string(ReferenceKind k);

}  // namespace drpid
