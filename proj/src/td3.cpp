#include "windbess/td3.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace windbess {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::vector<int> net_sizes(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> sizes;
  sizes.reserve(hidden.size() + 2);
  sizes.push_back(in);
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(out);
  return sizes;
}

}  // namespace

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0)
    throw std::invalid_argument("ReplayBuffer capacity must be > 0");
}

void ReplayBuffer::push(Transition t) {
  if (items_.size() < capacity_) {
    items_.push_back(std::move(t));
  } else {
    items_[head_] = std::move(t);
    head_ = (head_ + 1) % capacity_;
  }
}

std::size_t ReplayBuffer::sample_index(std::mt19937_64& rng) const {
  if (items_.empty()) throw std::logic_error("sampling an empty buffer");
  std::uniform_int_distribution<std::size_t> dist(0, items_.size() - 1);
  return dist(rng);
}

BessAction decode_bess_action(std::span<const double> raw,
                              const SystemConfig& cfg) {
  if (raw.size() != 3)
    throw std::invalid_argument("decode_bess_action expects 3 values");
  auto clip = [](double v) { return std::clamp(v, -1.0, 1.0); };
  BessAction a;
  const double mode = clip(raw[0]);
  if (mode < -1.0 / 3.0)
    a.mode = BessMode::Discharge;
  else if (mode > 1.0 / 3.0)
    a.mode = BessMode::Charge;
  else
    a.mode = BessMode::Idle;
  a.p_spot_mw = (clip(raw[1]) + 1.0) / 2.0 * cfg.p_max_bess;
  a.p_curtail_mw = (clip(raw[2]) + 1.0) / 2.0 * cfg.p_max_bess;
  if (a.mode == BessMode::Discharge) a.p_curtail_mw = 0.0;
  return a;
}

WindAction decode_wind_action(double raw, const SystemConfig& cfg) {
  const double r = std::clamp(raw, -1.0, 1.0);
  return {(r + 1.0) / 2.0 * cfg.p_max_wind};
}

Td3Agent::Td3Agent(int obs_dim, int act_dim, Td3Hyper hyper,
                   std::uint64_t seed)
    : obs_dim_(obs_dim),
      act_dim_(act_dim),
      hyper_(std::move(hyper)),
      actor_(net_sizes(obs_dim, hyper_.hidden, act_dim), OutputActivation::Tanh,
             splitmix64(seed)),
      critic1_(net_sizes(obs_dim + act_dim, hyper_.hidden, 1),
               OutputActivation::Identity, splitmix64(seed ^ 0x1111)),
      critic2_(net_sizes(obs_dim + act_dim, hyper_.hidden, 1),
               OutputActivation::Identity, splitmix64(seed ^ 0x2222)),
      target_actor_(actor_),
      target_critic1_(critic1_),
      target_critic2_(critic2_),
      actor_opt_(actor_, hyper_.actor_lr),
      critic1_opt_(critic1_, hyper_.critic_lr),
      critic2_opt_(critic2_, hyper_.critic_lr),
      buffer_(hyper_.buffer_capacity),
      policy_rng_(splitmix64(seed ^ 0x706f6c696379ull)),
      replay_rng_(splitmix64(seed ^ 0x7265706c6179ull)) {
  if (obs_dim_ <= 0 || act_dim_ <= 0)
    throw std::invalid_argument("Td3Agent dims must be > 0");
}

std::vector<double> Td3Agent::act_deterministic(
    std::span<const double> obs) const {
  return actor_.forward(obs);
}

std::vector<double> Td3Agent::act_noisy(std::span<const double> obs) {
  std::vector<double> a = actor_.forward(obs);
  std::normal_distribution<double> noise(0.0, hyper_.exploration_noise_std);
  for (double& v : a) v = std::clamp(v + noise(policy_rng_), -1.0, 1.0);
  return a;
}

std::vector<double> Td3Agent::act_random() {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> a(act_dim_);
  for (double& v : a) v = dist(policy_rng_);
  return a;
}

std::vector<double> Td3Agent::critic_input(std::span<const double> obs,
                                           std::span<const double> act) const {
  std::vector<double> x;
  x.reserve(obs.size() + act.size());
  x.insert(x.end(), obs.begin(), obs.end());
  x.insert(x.end(), act.begin(), act.end());
  return x;
}

std::vector<double> Td3Agent::critic_targets(
    std::span<const Transition* const> batch) {
  std::vector<double> ys;
  ys.reserve(batch.size());
  std::normal_distribution<double> smooth(0.0, hyper_.target_noise_std);
  for (const Transition* tr : batch) {
    std::vector<double> a = target_actor_.forward(tr->next_obs);
    if (hyper_.target_noise_std > 0) {
      for (double& v : a) {
        const double eps = std::clamp(smooth(policy_rng_),
                                      -hyper_.target_noise_clip,
                                      hyper_.target_noise_clip);
        v = std::clamp(v + eps, -1.0, 1.0);
      }
    }
    const std::vector<double> x = critic_input(tr->next_obs, a);
    const double q1 = target_critic1_.forward(x)[0];
    const double q2 = target_critic2_.forward(x)[0];
    const double q_min = std::min(q1, q2);
    ys.push_back(tr->reward +
                 hyper_.gamma * (tr->done ? 0.0 : 1.0) * q_min);
  }
  return ys;
}

Td3Agent::TrainDiag Td3Agent::train_step() {
  const std::size_t batch_n = static_cast<std::size_t>(hyper_.batch_size);
  if (buffer_.size() < batch_n)
    throw std::logic_error("train_step: replay buffer smaller than a batch");

  std::vector<const Transition*> batch(batch_n);
  for (auto& slot : batch) slot = &buffer_[buffer_.sample_index(replay_rng_)];

  const std::vector<double> ys = critic_targets(batch);

  TrainDiag diag;
  Mlp::Workspace ws;
  auto update_critic = [&](Mlp& critic, AdamOptimizer& opt) {
    Mlp::Gradients grads = Mlp::Gradients::zeros_like(critic);
    double loss = 0.0;
    std::array<double, 1> out_grad;
    for (std::size_t k = 0; k < batch_n; ++k) {
      const std::vector<double> x =
          critic_input(batch[k]->obs, batch[k]->action);
      const double q = critic.forward(x, ws)[0];
      const double err = q - ys[k];
      loss += err * err;
      out_grad[0] = 2.0 * err / static_cast<double>(batch_n);
      critic.backward(x, ws, out_grad, grads);
    }
    opt.step(critic, grads);
    return loss / static_cast<double>(batch_n);
  };
  diag.critic1_loss = update_critic(critic1_, critic1_opt_);
  diag.critic2_loss = update_critic(critic2_, critic2_opt_);
  ++critic_updates_;

  if (critic_updates_ % hyper_.policy_delay == 0) {
    // Deterministic policy gradient through critic1.
    Mlp::Gradients actor_grads = Mlp::Gradients::zeros_like(actor_);
    Mlp::Gradients critic_grads = Mlp::Gradients::zeros_like(critic1_);
    Mlp::Workspace actor_ws, critic_ws;
    double loss = 0.0;
    std::array<double, 1> q_grad;
    for (std::size_t k = 0; k < batch_n; ++k) {
      const std::vector<double>& obs = batch[k]->obs;
      const std::vector<double>& a = actor_.forward(obs, actor_ws);
      const std::vector<double> x = critic_input(obs, a);
      const double q = critic1_.forward(x, critic_ws)[0];
      loss -= q;
      // d(-q)/da, extracted from the critic's input gradient.
      q_grad[0] = -1.0 / static_cast<double>(batch_n);
      critic_grads.reset();
      critic1_.backward(x, critic_ws, q_grad, critic_grads);
      std::span<const double> da(critic_grads.input.data() + obs_dim_,
                                 static_cast<std::size_t>(act_dim_));
      actor_.backward(obs, actor_ws, da, actor_grads);
    }
    actor_opt_.step(actor_, actor_grads);
    ++actor_updates_;
    diag.actor_loss = loss / static_cast<double>(batch_n);

    soft_update(actor_, target_actor_, hyper_.polyak);
    soft_update(critic1_, target_critic1_, hyper_.polyak);
    soft_update(critic2_, target_critic2_, hyper_.polyak);
  }
  return diag;
}

void Td3Agent::save(std::ostream& os) const {
  os << "td3 " << obs_dim_ << ' ' << act_dim_ << '\n';
  actor_.save(os);
  critic1_.save(os);
  critic2_.save(os);
  target_actor_.save(os);
  target_critic1_.save(os);
  target_critic2_.save(os);
}

void Td3Agent::load(std::istream& is) {
  std::string tag;
  int obs_n = 0, act_n = 0;
  if (!(is >> tag >> obs_n >> act_n) || tag != "td3")
    throw std::runtime_error("Td3Agent::load: missing 'td3' header");
  if (obs_n != obs_dim_ || act_n != act_dim_)
    throw std::runtime_error("Td3Agent::load: dimension mismatch");
  Mlp nets[6];
  for (Mlp& net : nets) net = Mlp::load(is);
  if (nets[0].input_size() != obs_dim_ || nets[0].output_size() != act_dim_ ||
      nets[1].input_size() != obs_dim_ + act_dim_)
    throw std::runtime_error("Td3Agent::load: network shape mismatch");
  actor_ = std::move(nets[0]);
  critic1_ = std::move(nets[1]);
  critic2_ = std::move(nets[2]);
  target_actor_ = std::move(nets[3]);
  target_critic1_ = std::move(nets[4]);
  target_critic2_ = std::move(nets[5]);
}

}  // namespace windbess
