#include "drpid/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace drpid {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw std::invalid_argument("scenario key '" + key + "': not a number: '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "on" || v == "1") return true;
  if (v == "false" || v == "off" || v == "0") return false;
  throw std::invalid_argument("scenario key '" + key + "': not a boolean: '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(key, item));
  }
  if (out.empty()) throw std::invalid_argument("scenario key '" + key + "': empty list");
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

int ScenarioConfig::ticks_per_fast() const {
  return static_cast<int>(std::llround(design.t_fast / t_basic));
}

int ScenarioConfig::ticks_per_period() const { return ticks_per_fast() * design.n; }

std::size_t ScenarioConfig::num_periods() const {
  const auto horizon_ticks = static_cast<std::size_t>(std::llround(horizon / t_basic));
  return horizon_ticks / static_cast<std::size_t>(ticks_per_period());
}

double ScenarioConfig::resolved_lr_wait() const {
  return lr_wait >= 0.0 ? lr_wait : alpha * delay.tau_max;
}

ContinuousPlant ScenarioConfig::real_plant() const {
  return perturb(plant, plant_q_pct, plant_r_pct);
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("scenario: " + msg); };

  if (!(plant.pole > 0.0)) fail("plant.pole must be > 0");
  if (plant.gain_num == 0.0) fail("plant.gain_num must be nonzero");
  if (plant_q_pct < 0.0 || plant_q_pct >= 100.0) fail("plant.q_pct must lie in [0, 100)");
  if (plant_r_pct < 0.0 || plant_r_pct >= 100.0) fail("plant.r_pct must lie in [0, 100)");
  if (!(nonlinearity.dead_zone >= 0.0) || !(nonlinearity.saturation > nonlinearity.dead_zone)) {
    fail("input nonlinearity requires saturation > dead_zone >= 0");
  }

  if (design.n < 1) fail("pid.n must be >= 1");
  if (!(design.t_fast > 0.0)) fail("pid.T must be > 0");
  if (!(design.td > 0.0)) fail("pid.td must be > 0");
  if (!(design.ti > design.sensor_period())) fail("pid.ti must exceed the sensor period N*T");

  if (!(t_basic > 0.0)) fail("sim.t_basic must be > 0");
  const double l_exact = design.t_fast / t_basic;
  if (std::fabs(l_exact - std::llround(l_exact)) > 1e-9 || std::llround(l_exact) < 1) {
    fail("pid.T must be an integer multiple of sim.t_basic");
  }
  if (!(horizon > 0.0)) fail("sim.horizon must be > 0");
  if (num_periods() < 1) fail("sim.horizon must cover at least one sensor period");

  if (delay.eta < 0.0 || delay.eta > delay.tau_max) fail("network delay requires 0 <= eta <= tau_max");
  if (delay.phi < 0.0) fail("network.phi must be >= 0");
  if (dropout.p < 0.0 || dropout.p >= 1.0) fail("network.dropout_p must lie in [0, 1)");
  if (dropout.max_consecutive < 1) fail("network.max_consecutive must be >= 1");
  if (alpha < 0.0 || alpha > 1.0) fail("network.alpha must lie in [0, 1]");

  const double nt = design.sensor_period();
  if (!check_no_disorder(delay, nt)) {
    fail("packet disorder condition violated: tau_max (" + fmt(delay.tau_max) +
         ") must be < the sensor period N*T (" + fmt(nt) + ")");
  }
  const double wait = resolved_lr_wait();
  if (wait < alpha * delay.tau_max) {
    fail("network.lr_wait must be >= alpha*tau_max so delivered packets beat the timeout");
  }
  const double latest_arrival = std::max(alpha * delay.tau_max, wait) + (1.0 - alpha) * delay.tau_max;
  if (latest_arrival > nt - t_basic + 1e-12) {
    fail("latest possible packet arrival (" + fmt(latest_arrival) +
         ") must land at least one basic period before the sensor period ends");
  }
  if (variant == ControllerVariant::delay_dependent) {
    const double dd_limit = design.t_fast - t_basic;
    if (delay.tau_max > dd_limit + 1e-12) {
      fail("delay-dependent variant requires tau_max <= T - t_basic (" + fmt(dd_limit) + ")");
    }
    if (latest_arrival > dd_limit + 1e-12) {
      fail("delay-dependent variant requires worst-case arrival <= T - t_basic");
    }
    if (!(gain_law.kpd_slope * delay.tau_max + design.k_pd > 0.0)) {
      fail("gain schedule must keep kpd positive over [0, tau_max]");
    }
  }
  if (variant == ControllerVariant::delay_independent && !prediction) {
    fail("sim.prediction = off is only defined for the delay_dependent variant");
  }
  if (gamma_skip < 0.0 || gamma_skip >= horizon) fail("metrics.gamma_skip must lie in [0, horizon)");
}

ScenarioConfig parse_scenario(const std::string& text, const std::string& origin) {
  ScenarioConfig cfg;
  bool kpd_set = false;

  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(origin + ":" + std::to_string(lineno) +
                                  ": expected key = value");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }

  for (const auto& [key, value] : kv) {
    if (key == "plant.gain_num") cfg.plant.gain_num = to_double(key, value);
    else if (key == "plant.pole") cfg.plant.pole = to_double(key, value);
    else if (key == "plant.q_pct") cfg.plant_q_pct = to_double(key, value);
    else if (key == "plant.r_pct") cfg.plant_r_pct = to_double(key, value);
    else if (key == "input.saturation") cfg.nonlinearity.saturation = to_double(key, value);
    else if (key == "input.dead_zone") cfg.nonlinearity.dead_zone = to_double(key, value);
    else if (key == "input.dead_zone_enabled") cfg.nonlinearity.dead_zone_enabled = to_bool(key, value);
    else if (key == "pid.kp") cfg.design.kp = to_double(key, value);
    else if (key == "pid.td") cfg.design.td = to_double(key, value);
    else if (key == "pid.ti") cfg.design.ti = to_double(key, value);
    else if (key == "pid.n") cfg.design.n = static_cast<int>(to_double(key, value));
    else if (key == "pid.T") cfg.design.t_fast = to_double(key, value);
    else if (key == "pid.k_pi") cfg.design.k_pi = to_double(key, value);
    else if (key == "pid.k_pd") { cfg.design.k_pd = to_double(key, value); kpd_set = true; }
    else if (key == "gain_schedule.kpd_slope") cfg.gain_law.kpd_slope = to_double(key, value);
    else if (key == "gain_schedule.td_slope") cfg.gain_law.td_slope = to_double(key, value);
    else if (key == "network.eta") cfg.delay.eta = to_double(key, value);
    else if (key == "network.phi") cfg.delay.phi = to_double(key, value);
    else if (key == "network.tau_max") cfg.delay.tau_max = to_double(key, value);
    else if (key == "network.alpha") cfg.alpha = to_double(key, value);
    else if (key == "network.lr_wait") cfg.lr_wait = to_double(key, value);
    else if (key == "network.dropout_p") cfg.dropout.p = to_double(key, value);
    else if (key == "network.max_consecutive") cfg.dropout.max_consecutive = static_cast<int>(to_double(key, value));
    else if (key == "sim.variant") {
      if (value == "delay_dependent") cfg.variant = ControllerVariant::delay_dependent;
      else if (value == "delay_independent") cfg.variant = ControllerVariant::delay_independent;
      else throw std::invalid_argument("sim.variant must be delay_dependent or delay_independent");
    }
    else if (key == "sim.prediction") cfg.prediction = to_bool(key, value);
    else if (key == "sim.t_basic") cfg.t_basic = to_double(key, value);
    else if (key == "sim.horizon") cfg.horizon = to_double(key, value);
    else if (key == "sim.seed") cfg.seed = static_cast<std::uint64_t>(to_double(key, value));
    else if (key == "reference.kind") {
      if (value == "filtered_step") cfg.ref.kind = ReferenceKind::filtered_step;
      else if (value == "lissajous") cfg.ref.kind = ReferenceKind::lissajous;
      else throw std::invalid_argument("reference.kind must be filtered_step or lissajous");
    }
    else if (key == "reference.amplitude") cfg.ref.amplitude = to_double(key, value);
    else if (key == "reference.period") cfg.ref.square_period = to_double(key, value);
    else if (key == "reference.filter_tc") cfg.ref.filter_tc = to_double(key, value);
    else if (key == "reference.amp_x") cfg.ref.amp_x = to_double(key, value);
    else if (key == "reference.amp_y") cfg.ref.amp_y = to_double(key, value);
    else if (key == "reference.freq_a") cfg.ref.freq_a = to_double(key, value);
    else if (key == "reference.freq_b") cfg.ref.freq_b = to_double(key, value);
    else if (key == "reference.delta") cfg.ref.delta = to_double(key, value);
    else if (key == "reference.omega") cfg.ref.omega = to_double(key, value);
    else if (key == "metrics.gamma_skip") cfg.gamma_skip = to_double(key, value);
    else if (key == "robustness.q") cfg.grid_q = to_list(key, value);
    else if (key == "robustness.r") cfg.grid_r = to_list(key, value);
    else throw std::invalid_argument(origin + ": unknown scenario key '" + key + "'");
  }

  if (!kpd_set) cfg.design.k_pd = cfg.design.kp;
  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open scenario file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path);
}

std::string to_string(ControllerVariant v) {
  return v == ControllerVariant::delay_dependent ? "delay_dependent" : "delay_independent";
}

std::string to_string(ReferenceKind k) {
  return k == ReferenceKind::filtered_step ? "filtered_step" : "lissajous";
}

std::string canonical_dump(const ScenarioConfig& c) {
  std::ostringstream os;
  os << "plant.gain_num=" << fmt(c.plant.gain_num) << '\n'
     << "plant.pole=" << fmt(c.plant.pole) << '\n'
     << "plant.q_pct=" << fmt(c.plant_q_pct) << '\n'
     << "plant.r_pct=" << fmt(c.plant_r_pct) << '\n'
     << "input.saturation=" << fmt(c.nonlinearity.saturation) << '\n'
     << "input.dead_zone=" << fmt(c.nonlinearity.dead_zone) << '\n'
     << "input.dead_zone_enabled=" << (c.nonlinearity.dead_zone_enabled ? 1 : 0) << '\n'
     << "pid.kp=" << fmt(c.design.kp) << '\n'
     << "pid.td=" << fmt(c.design.td) << '\n'
     << "pid.ti=" << fmt(c.design.ti) << '\n'
     << "pid.n=" << c.design.n << '\n'
     << "pid.T=" << fmt(c.design.t_fast) << '\n'
     << "pid.k_pi=" << fmt(c.design.k_pi) << '\n'
     << "pid.k_pd=" << fmt(c.design.k_pd) << '\n'
     << "gain_schedule.kpd_slope=" << fmt(c.gain_law.kpd_slope) << '\n'
     << "gain_schedule.td_slope=" << fmt(c.gain_law.td_slope) << '\n'
     << "network.eta=" << fmt(c.delay.eta) << '\n'
     << "network.phi=" << fmt(c.delay.phi) << '\n'
     << "network.tau_max=" << fmt(c.delay.tau_max) << '\n'
     << "network.alpha=" << fmt(c.alpha) << '\n'
     << "network.lr_wait=" << fmt(c.resolved_lr_wait()) << '\n'
     << "network.dropout_p=" << fmt(c.dropout.p) << '\n'
     << "network.max_consecutive=" << c.dropout.max_consecutive << '\n'
     << "sim.variant=" << to_string(c.variant) << '\n'
     << "sim.prediction=" << (c.prediction ? 1 : 0) << '\n'
     << "sim.t_basic=" << fmt(c.t_basic) << '\n'
     << "sim.horizon=" << fmt(c.horizon) << '\n'
     << "sim.seed=" << c.seed << '\n'
     << "reference.kind=" << to_string(c.ref.kind) << '\n'
     << "reference.amplitude=" << fmt(c.ref.amplitude) << '\n'
     << "reference.period=" << fmt(c.ref.square_period) << '\n'
     << "reference.filter_tc=" << fmt(c.ref.filter_tc) << '\n'
     << "reference.amp_x=" << fmt(c.ref.amp_x) << '\n'
     << "reference.amp_y=" << fmt(c.ref.amp_y) << '\n'
     << "reference.freq_a=" << fmt(c.ref.freq_a) << '\n'
     << "reference.freq_b=" << fmt(c.ref.freq_b) << '\n'
     << "reference.delta=" << fmt(c.ref.delta) << '\n'
     << "reference.omega=" << fmt(c.ref.omega) << '\n'
     << "metrics.gamma_skip=" << fmt(c.gamma_skip) << '\n';
  os << "robustness.q=";
  for (std::size_t i = 0; i < c.grid_q.size(); ++i) os << (i ? "," : "") << fmt(c.grid_q[i]);
  os << '\n' << "robustness.r=";
  for (std::size_t i = 0; i < c.grid_r.size(); ++i) os << (i ? "," : "") << fmt(c.grid_r[i]);
  os << '\n';
  return os.str();
}

std::uint64_t config_hash(const ScenarioConfig& cfg) {
  // FNV-1a over the canonical dump.
  const std::string dump = canonical_dump(cfg);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : dump) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace drpid
