#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "windbess/env.hpp"
#include "windbess/metrics.hpp"
#include "windbess/td3.hpp"
#include "windbess/trace.hpp"

namespace windbess {

// How the battery learns about curtailment: from the wind agent's live bids,
// or from a perfect wind forecast (bid = actual, so curtailment never
// occurs and the battery trades on price alone).
enum class WindCoupling { Policy, PerfectForecast };

const char* coupling_name(WindCoupling coupling);
WindCoupling parse_coupling(const std::string& name);  // throws ConfigError

struct EpisodeLog {
  int episode = 0;
  double wind_return = 0.0;  // shaped reward sums, unscaled
  double bess_return = 0.0;
  double wind_critic_loss = 0.0;  // mean first-critic loss over the episode
  double bess_critic_loss = 0.0;
  long updates = 0;  // gradient steps per agent this episode
};

// Trains the wind and battery agents in lockstep over day-long episodes
// consumed chronologically from the training trace. Normalization statistics
// are computed from that trace. The discount comes from SystemConfig.
class JointTrainer {
 public:
  JointTrainer(Trace train, SystemConfig cfg, Td3Hyper hyper,
               WindCoupling coupling, std::uint64_t seed);

  // Throws ConfigError once the trace has no full day left.
  EpisodeLog run_episode();
  std::vector<EpisodeLog> run(int episodes);

  int episodes_run() const { return next_episode_; }
  int max_episodes() const { return wind_env_.episode_count(); }
  long total_steps() const { return total_steps_; }

  Td3Agent& wind_agent() { return wind_; }
  Td3Agent& bess_agent() { return bess_; }
  const Td3Agent& wind_agent() const { return wind_; }
  const Td3Agent& bess_agent() const { return bess_; }
  const NormStats& stats() const { return stats_; }
  WindCoupling coupling() const { return coupling_; }
  const SystemConfig& config() const { return cfg_; }

 private:
  Trace trace_;
  SystemConfig cfg_;
  Td3Hyper hyper_;
  WindCoupling coupling_;
  NormStats stats_;
  WindEnv wind_env_;
  BessEnv bess_env_;
  Td3Agent wind_;
  Td3Agent bess_;
  long total_steps_ = 0;
  int next_episode_ = 0;
};

// Noise-free rollout of both policies over every full episode in the trace.
// Settlement is aggregated across episodes; rewards are reported unscaled.
// decision_seconds only times policy inference (observation -> bid), so the
// ledger stays byte-reproducible while latency varies run to run.
struct EvalResult {
  EpisodeLedger ledger;
  double wind_return = 0.0;
  double bess_return = 0.0;
  long decisions = 0;
  double decision_seconds = 0.0;
};

EvalResult evaluate_policies(const Trace& trace, const SystemConfig& cfg,
                             const Td3Agent& wind, const Td3Agent& bess,
                             const NormStats& stats, WindCoupling coupling,
                             int episode_len = 288);

// Checkpoint: version header, coupling, reward scale, normalization
// statistics, then both agents. Hexfloat payload; round-trips bit-exactly.
struct Checkpoint {
  Td3Agent wind;
  Td3Agent bess;
  NormStats stats;
  WindCoupling coupling = WindCoupling::PerfectForecast;
  double reward_scale = 100.0;
};

void save_checkpoint(std::ostream& os, const JointTrainer& trainer);
Checkpoint load_checkpoint(std::istream& is);  // throws DataError

}  // namespace windbess
