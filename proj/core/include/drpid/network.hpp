#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace drpid {

// Round-trip delay model: location eta plus an exponential tail of scale phi,
// rejection-truncated to [eta, tau_max]. eta == tau_max (or phi == 0) collapses
// to a point mass at eta, which is how the zero-channel scenarios are expressed.
struct DelayModel {
  double eta = 0.04;
  double phi = 0.012;
  double tau_max = 0.08;
};

struct DropoutModel {
  double p = 0.0;        // per-link dropout probability, in [0,1)
  int max_consecutive = 1;  // cap on consecutive losses for this link
};

enum class Link { local_to_remote = 0, remote_to_local = 1 };

struct ChannelState {
  int consecutive_drops = 0;
  std::int64_t last_seq_delivered = -1;
};

struct DeliveryResult {
  bool delivered = false;
  bool cap_forced = false;  // delivery was forced to respect the consecutive-loss cap
};

// Deterministic 64-bit stream derivation: every consumer of randomness gets its
// own generator seeded from splitmix64(scenario_seed ^ purpose_salt), so adding
// or skipping draws in one stream never shifts another.
std::uint64_t derive_stream_seed(std::uint64_t scenario_seed, std::uint64_t purpose_salt);

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(seed) {}
  // Uniform in [0, 1), 53-bit resolution.
  double uniform();

 private:
  std::mt19937_64 gen_;
};

double sample_delay(RngStream& rng, const DelayModel& dm);

// Mode of the truncated distribution: the density is maximal at eta.
double delay_mode(const DelayModel& dm);

// One Bernoulli trial; a drop that would exceed the consecutive-loss cap is
// turned into a delivery and flagged.
DeliveryResult sample_dropout(RngStream& rng, const DropoutModel& dm, ChannelState& cs);

bool check_no_disorder(const DelayModel& dm, double sensor_period);

// First basic-period grid instant at or after tau.
int quantize_delay(double tau, double t_basic);

// Per-sensor-period channel realization. Sampled once per run (or shared
// across compared variants) so controller changes never perturb the channel.
struct PeriodChannel {
  double tau_rt = 0.0;
  double tau_lr = 0.0;
  double tau_rl = 0.0;
  bool delivered_lr = true;
  bool delivered_rl = true;
  bool forced_lr = false;
  bool forced_rl = false;
};

struct ChannelParams {
  DelayModel delay;
  double dropout_p = 0.0;
  int max_consecutive = 1;
  double alpha = 0.5;  // one-way split: tau_lr = alpha * tau_rt
};

// Draws num_periods triples (tau_k, d_lr, d_rl) from three independent
// sub-streams of `seed`. The remote-to-local link is capped one tighter than
// the local-to-remote link so that the packet's lookahead always covers the
// estimated head segment of the first delivery after a loss run.
std::vector<PeriodChannel> sample_channel_realization(std::uint64_t seed,
                                                      const ChannelParams& params,
                                                      std::size_t num_periods,
                                                      int axis = 0);

// All-delivered, zero-delay realization of the same length (the nominal loop).
std::vector<PeriodChannel> zero_channel_realization(std::size_t num_periods);

}  // namespace drpid
