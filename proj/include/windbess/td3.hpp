#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "windbess/config.hpp"
#include "windbess/market.hpp"
#include "windbess/nn.hpp"

namespace windbess {

struct Td3Hyper {
  double gamma = 0.99;             // overwritten from SystemConfig by callers
  double polyak = 0.005;           // target soft-update rate
  int policy_delay = 2;            // critic updates per actor update
  double target_noise_std = 0.2;   // target policy smoothing noise
  double target_noise_clip = 0.5;
  double exploration_noise_std = 0.1;
  int batch_size = 256;
  std::size_t buffer_capacity = 1'000'000;
  double actor_lr = 3e-4;
  double critic_lr = 3e-4;
  long warmup_steps = 2880;        // uniform random actions, no updates
  double reward_scale = 100.0;     // rewards divided by this in the buffer
  std::vector<int> hidden = {64, 64};
};

struct Transition {
  std::vector<double> obs;
  std::vector<double> action;  // raw network-space action in [-1, 1]^d
  double reward = 0.0;         // already scaled
  std::vector<double> next_obs;
  bool done = false;
};

// Fixed-capacity ring buffer with uniform sampling.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);
  void push(Transition t);
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& operator[](std::size_t i) const { return items_[i]; }
  std::size_t sample_index(std::mt19937_64& rng) const;

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;
  std::vector<Transition> items_;
};

// Maps a raw 3-vector in [-1, 1]^3 to a battery bid:
//   raw[0] < -1/3 discharges, raw[0] > 1/3 charges, the middle band idles;
//   powers are affine maps of raw[1], raw[2] onto [0, p_max_bess];
//   the curtailment draw is zeroed when discharging.
BessAction decode_bess_action(std::span<const double> raw,
                              const SystemConfig& cfg);

// Maps raw in [-1, 1] onto an availability bid in [0, p_max_wind].
WindAction decode_wind_action(double raw, const SystemConfig& cfg);

// Twin-critic deterministic-policy agent with delayed actor updates and
// target policy smoothing. All randomness is owned by the agent and fully
// reproducible from the seed.
class Td3Agent {
 public:
  Td3Agent(int obs_dim, int act_dim, Td3Hyper hyper, std::uint64_t seed);

  int obs_dim() const { return obs_dim_; }
  int act_dim() const { return act_dim_; }
  const Td3Hyper& hyper() const { return hyper_; }

  // Actor output, no noise. Used for evaluation.
  std::vector<double> act_deterministic(std::span<const double> obs) const;
  // Actor output plus clipped exploration noise.
  std::vector<double> act_noisy(std::span<const double> obs);
  // Uniform in [-1, 1]^act_dim; used during warmup.
  std::vector<double> act_random();

  void observe(Transition t) { buffer_.push(std::move(t)); }
  const ReplayBuffer& buffer() const { return buffer_; }

  // r + gamma * (1 - done) * min(Q1', Q2') at the smoothed target action.
  std::vector<double> critic_targets(
      std::span<const Transition* const> batch);

  struct TrainDiag {
    double critic1_loss = 0.0;
    double critic2_loss = 0.0;
    std::optional<double> actor_loss;  // set when the delayed update ran
  };
  // One gradient step on both critics; every policy_delay-th call also
  // updates the actor and soft-updates the three targets. Throws when the
  // buffer holds fewer than batch_size transitions.
  TrainDiag train_step();

  long critic_updates() const { return critic_updates_; }
  long actor_updates() const { return actor_updates_; }

  Mlp& actor() { return actor_; }
  Mlp& critic1() { return critic1_; }
  Mlp& critic2() { return critic2_; }
  Mlp& target_actor() { return target_actor_; }
  Mlp& target_critic1() { return target_critic1_; }
  Mlp& target_critic2() { return target_critic2_; }
  const Mlp& actor() const { return actor_; }

  // Serializes the six networks; round-trips bit-exactly.
  void save(std::ostream& os) const;
  void load(std::istream& is);  // throws on shape mismatch

 private:
  std::vector<double> critic_input(std::span<const double> obs,
                                   std::span<const double> act) const;

  int obs_dim_, act_dim_;
  Td3Hyper hyper_;
  Mlp actor_, critic1_, critic2_;
  Mlp target_actor_, target_critic1_, target_critic2_;
  AdamOptimizer actor_opt_, critic1_opt_, critic2_opt_;
  ReplayBuffer buffer_;
  std::mt19937_64 policy_rng_;   // exploration + warmup + target smoothing
  std::mt19937_64 replay_rng_;   // batch sampling
  long critic_updates_ = 0;
  long actor_updates_ = 0;
};

}  // namespace windbess
