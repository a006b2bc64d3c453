#pragma once

#include <algorithm>
#include <array>
#include <vector>

#include "windbess/config.hpp"
#include "windbess/market.hpp"
#include "windbess/settlement.hpp"
#include "windbess/trace.hpp"

namespace windbess {

// Fixed-length window of curtailment indicators, one slot per interval.
class CurtailWindow {
 public:
  explicit CurtailWindow(int len = 10) : slots_(len, 0) {}

  void push(bool curtailed) {
    count_ += (curtailed ? 1 : 0) - slots_[head_];
    slots_[head_] = curtailed ? 1 : 0;
    head_ = (head_ + 1) % slots_.size();
  }
  void reset() {
    std::fill(slots_.begin(), slots_.end(), 0);
    count_ = 0;
  }
  int length() const { return static_cast<int>(slots_.size()); }
  int count() const { return count_; }

 private:
  std::vector<int> slots_;
  std::size_t head_ = 0;
  int count_ = 0;
};

// Fraction of the last L intervals that saw curtailment; in {0, 1/L, .., 1}.
double curtail_frequency(const CurtailWindow& window);

// ema' = tau * ema + (1 - tau) * price.
double update_ema(double ema, double price, double tau);

// Observations expose the previous interval raw; agents receive the
// normalized vectors below.
struct WindObservation {
  double prev_wind_actual_mw = 0.0;
  double prev_price = 0.0;
};

struct BessObservation {
  double prev_energy_mwh = 0.0;
  double curtail_freq = 0.0;
  double prev_wind_actual_mw = 0.0;
  double prev_price = 0.0;
};

struct BessState {
  double energy_mwh = 0.0;
  double ema_price = 0.0;
  CurtailWindow window;
};

// Deviation cost signal: -price * |bid - actual|. No interval scaling.
double wind_reward(const WindAction& action, const MarketTick& tick,
                   const SystemConfig& cfg);

// Buy-low / sell-high shaping against the price moving average. The sign
// gate is sgn(price - ema); it is zero at the neutral point. Expects a
// clamped action.
double arbitrage_reward(const BessAction& action, double price, double ema,
                        const SystemConfig& cfg);

// Bonus for storing curtailed wind, scaled by how often curtailment has
// happened recently. Both min() operands are normalized by p_max_wind.
// Expects a clamped action.
double curtailment_reward(const BessAction& action, double curtailed_mw,
                          double freq, const SystemConfig& cfg);

struct BessStepOutcome {
  double reward = 0.0;
  BessAction executed;  // post-clamp action that actually settled
  StepLedger ledger;
};

// One battery transition against a tick: clamps the action, settles both
// plants, advances energy / EMA / curtailment window, and returns the
// shaped reward. forecast_mw is the wind availability bid this interval.
BessStepOutcome bess_transition(BessState& state, const BessAction& raw,
                                const MarketTick& tick, double forecast_mw,
                                const SystemConfig& cfg);

// Episodic wind-bidding MDP over consecutive day-long slices of a trace.
class WindEnv {
 public:
  static constexpr int kObsDim = 2;
  static constexpr int kActDim = 1;

  WindEnv(const Trace* trace, SystemConfig cfg, NormStats stats,
          int episode_len = 288);

  int episode_count() const;
  WindObservation reset(int episode);

  struct Step {
    WindObservation obs;
    double reward = 0.0;
    bool done = false;
    StepLedger ledger;
  };
  // Throws std::logic_error when stepping a finished episode.
  Step step(const WindAction& action);

  std::array<double, kObsDim> observation_vector(const WindObservation&) const;

 private:
  const MarketTick& tick_at(int t) const;
  const Trace* trace_;
  SystemConfig cfg_;
  NormStats stats_;
  int episode_len_;
  int base_ = 0;
  int t_ = 0;
  bool done_ = true;
};

// Episodic battery MDP. The wind availability bid for each interval comes
// from the caller (live wind policy) or, by default, equals the realized
// wind (perfect forecast, so curtailment never occurs).
class BessEnv {
 public:
  static constexpr int kObsDim = 4;
  static constexpr int kActDim = 3;

  BessEnv(const Trace* trace, SystemConfig cfg, NormStats stats,
          int episode_len = 288);

  int episode_count() const;
  BessObservation reset(int episode);

  struct Step {
    BessObservation obs;
    double reward = 0.0;
    bool done = false;
    StepLedger ledger;
    BessAction executed;
  };
  // Perfect-forecast wind: curtailed power is always zero.
  Step step(const BessAction& raw);
  // Externally supplied wind availability bid for this interval.
  Step step(const BessAction& raw, double forecast_mw);

  const BessState& state() const { return state_; }
  std::array<double, kObsDim> observation_vector(const BessObservation&) const;

 private:
  const MarketTick& tick_at(int t) const;
  const Trace* trace_;
  SystemConfig cfg_;
  NormStats stats_;
  int episode_len_;
  int base_ = 0;
  int t_ = 0;
  bool done_ = true;
  BessState state_;
};

}  // namespace windbess
