#include "drpid/network.hpp"

#include <cmath>
#include <stdexcept>

namespace drpid {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t kDelaySalt = 0x64656c6179ULL;      // "delay"
constexpr std::uint64_t kDropLrSalt = 0x64726f706c72ULL;   // "droplr"
constexpr std::uint64_t kDropRlSalt = 0x64726f70726cULL;   // "droprl"
constexpr std::uint64_t kAxisSalt = 0x61786973ULL;         // "axis"

}  // namespace

std::uint64_t derive_stream_seed(std::uint64_t scenario_seed, std::uint64_t purpose_salt) {
  return splitmix64(scenario_seed ^ splitmix64(purpose_salt));
}

double RngStream::uniform() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double sample_delay(RngStream& rng, const DelayModel& dm) {
  const double support = dm.tau_max - dm.eta;
  if (dm.phi <= 0.0 || support <= 0.0) {
    return dm.eta;  // degenerate point mass
  }
  // Rejection keeps the exponential shape on the truncated support.
  for (;;) {
    const double u = rng.uniform();
    const double tau = dm.eta - dm.phi * std::log1p(-u);
    if (tau <= dm.tau_max) return tau;
  }
}

double delay_mode(const DelayModel& dm) { return dm.eta; }

DeliveryResult sample_dropout(RngStream& rng, const DropoutModel& dm, ChannelState& cs) {
  DeliveryResult r;
  const bool drop = rng.uniform() < dm.p;
  if (drop && cs.consecutive_drops + 1 > dm.max_consecutive) {
    r.delivered = true;
    r.cap_forced = true;
  } else {
    r.delivered = !drop;
  }
  cs.consecutive_drops = r.delivered ? 0 : cs.consecutive_drops + 1;
  return r;
}

bool check_no_disorder(const DelayModel& dm, double sensor_period) {
  return dm.tau_max < sensor_period;
}

int quantize_delay(double tau, double t_basic) {
  if (tau < 0.0 || t_basic <= 0.0) {
    throw std::invalid_argument("quantize_delay: tau >= 0 and t_basic > 0 required");
  }
  return static_cast<int>(std::ceil(tau / t_basic - 1e-12));
}

std::vector<PeriodChannel> sample_channel_realization(std::uint64_t seed,
                                                      const ChannelParams& params,
                                                      std::size_t num_periods,
                                                      int axis) {
  const std::uint64_t axis_seed =
      axis == 0 ? seed : derive_stream_seed(seed, kAxisSalt + static_cast<std::uint64_t>(axis));
  RngStream delay_rng(derive_stream_seed(axis_seed, kDelaySalt));
  RngStream lr_rng(derive_stream_seed(axis_seed, kDropLrSalt));
  RngStream rl_rng(derive_stream_seed(axis_seed, kDropRlSalt));

  DropoutModel lr_model{params.dropout_p, params.max_consecutive};
  // One tighter on the control link: packets look ahead max_consecutive
  // periods, and the head of a post-run delivery consumes one more estimate
  // than the run length, so runs on this link must stay one short of the cap.
  DropoutModel rl_model{params.dropout_p, std::max(0, params.max_consecutive - 1)};
  ChannelState lr_state, rl_state;

  std::vector<PeriodChannel> out(num_periods);
  for (auto& pc : out) {
    pc.tau_rt = sample_delay(delay_rng, params.delay);
    pc.tau_lr = params.alpha * pc.tau_rt;
    pc.tau_rl = pc.tau_rt - pc.tau_lr;
    const DeliveryResult lr = sample_dropout(lr_rng, lr_model, lr_state);
    const DeliveryResult rl = sample_dropout(rl_rng, rl_model, rl_state);
    pc.delivered_lr = lr.delivered;
    pc.forced_lr = lr.cap_forced;
    pc.delivered_rl = rl.delivered;
    pc.forced_rl = rl.cap_forced;
  }
  return out;
}

std::vector<PeriodChannel> zero_channel_realization(std::size_t num_periods) {
  return std::vector<PeriodChannel>(num_periods);
}

}  // namespace drpid
