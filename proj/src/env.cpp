#include "windbess/env.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "windbess/errors.hpp"

namespace windbess {

double curtail_frequency(const CurtailWindow& window) {
  return static_cast<double>(window.count()) / window.length();
}

double update_ema(double ema, double price, double tau) {
  return tau * ema + (1.0 - tau) * price;
}

double wind_reward(const WindAction& action, const MarketTick& tick,
                   const SystemConfig& cfg) {
  (void)cfg;
  return -tick.spot_price * std::abs(action.availability_mw - tick.wind_actual);
}

double arbitrage_reward(const BessAction& action, double price, double ema,
                        const SystemConfig& cfg) {
  const double gap = price - ema;
  const double sign = static_cast<double>(gap > 0) - static_cast<double>(gap < 0);
  double gate = 0.0;
  if (action.mode == BessMode::Charge) gate = -sign / cfg.eta_ch;
  if (action.mode == BessMode::Discharge) gate = sign * cfg.eta_dch;
  const double a_spot = action.p_spot_mw / cfg.p_max_bess;
  return a_spot * std::abs(gap) * gate;
}

double curtailment_reward(const BessAction& action, double curtailed_mw,
                          double freq, const SystemConfig& cfg) {
  const double a_wc = action.p_curtail_mw / cfg.p_max_wind;
  const double absorbed = std::min(a_wc, curtailed_mw / cfg.p_max_wind);
  return cfg.beta_incentive * absorbed * freq / cfg.eta_ch;
}

BessStepOutcome bess_transition(BessState& state, const BessAction& raw,
                                const MarketTick& tick, double forecast_mw,
                                const SystemConfig& cfg) {
  const double curtailed = curtailed_power(tick.wind_actual, forecast_mw);
  const BessAction act = clamp_feasible(raw, state.energy_mwh, curtailed, cfg);

  state.ema_price = update_ema(state.ema_price, tick.spot_price, cfg.tau_ema);
  state.window.push(curtailed > 0);
  const double freq = curtail_frequency(state.window);

  BessStepOutcome out;
  out.executed = act;
  out.reward = arbitrage_reward(act, tick.spot_price, state.ema_price, cfg) +
               curtailment_reward(act, curtailed, freq, cfg);

  const WindSettlement ws = settle_wind(forecast_mw, tick, cfg);
  const double de = energy_delta(act, curtailed, cfg);

  StepLedger& lg = out.ledger;
  lg.wind_dispatched_mw = ws.dispatched_mw;
  lg.wind_curtailed_mw = curtailed;
  lg.wind_revenue = ws.revenue;
  lg.bess_revenue = settle_bess(act, tick, cfg);
  lg.degradation_cost = degradation_step(act, cfg);
  lg.energy_delta_mwh = de;
  lg.absorbed_curtailment_mwh =
      cfg.dt_hours * std::min(act.p_curtail_mw, curtailed);
  lg.spot_charged_mwh =
      act.mode == BessMode::Charge ? cfg.dt_hours * act.p_spot_mw : 0.0;
  lg.spot_price = tick.spot_price;
  lg.curtail_freq = freq;

  state.energy_mwh += de;
  return out;
}

// ---------------------------------------------------------------- WindEnv

WindEnv::WindEnv(const Trace* trace, SystemConfig cfg, NormStats stats,
                 int episode_len)
    : trace_(trace), cfg_(cfg), stats_(stats), episode_len_(episode_len) {
  if (episode_len_ <= 0) throw ConfigError("episode_len must be > 0");
}

int WindEnv::episode_count() const {
  return static_cast<int>(trace_->size()) / episode_len_;
}

const MarketTick& WindEnv::tick_at(int t) const {
  return trace_->ticks[static_cast<std::size_t>(base_ + t)];
}

WindObservation WindEnv::reset(int episode) {
  if (episode < 0 || episode >= episode_count())
    throw std::out_of_range("WindEnv::reset: episode " +
                            std::to_string(episode) + " out of range");
  base_ = episode * episode_len_;
  t_ = 0;
  done_ = false;
  // The first interval has no predecessor inside the episode; it sees itself.
  return {tick_at(0).wind_actual, tick_at(0).spot_price};
}

WindEnv::Step WindEnv::step(const WindAction& action) {
  if (done_) throw std::logic_error("WindEnv::step called on a done episode");
  const MarketTick& tick = tick_at(t_);
  const double bid =
      std::clamp(action.availability_mw, 0.0, cfg_.p_max_wind);
  const WindSettlement ws = settle_wind(bid, tick, cfg_);

  Step out;
  out.reward = wind_reward({bid}, tick, cfg_);
  out.ledger.wind_dispatched_mw = ws.dispatched_mw;
  out.ledger.wind_curtailed_mw = curtailed_power(tick.wind_actual, bid);
  out.ledger.wind_revenue = ws.revenue;
  out.ledger.spot_price = tick.spot_price;

  ++t_;
  done_ = t_ == episode_len_;
  out.done = done_;
  const MarketTick& prev = tick_at(t_ - 1);
  out.obs = {prev.wind_actual, prev.spot_price};
  return out;
}

std::array<double, WindEnv::kObsDim> WindEnv::observation_vector(
    const WindObservation& o) const {
  return {stats_.norm_wind(o.prev_wind_actual_mw),
          stats_.norm_price(o.prev_price)};
}

// ---------------------------------------------------------------- BessEnv

BessEnv::BessEnv(const Trace* trace, SystemConfig cfg, NormStats stats,
                 int episode_len)
    : trace_(trace),
      cfg_(cfg),
      stats_(stats),
      episode_len_(episode_len),
      state_{cfg.initial_energy_mwh(), 0.0, CurtailWindow(cfg.window_len)} {
  if (episode_len_ <= 0) throw ConfigError("episode_len must be > 0");
}

int BessEnv::episode_count() const {
  return static_cast<int>(trace_->size()) / episode_len_;
}

const MarketTick& BessEnv::tick_at(int t) const {
  return trace_->ticks[static_cast<std::size_t>(base_ + t)];
}

BessObservation BessEnv::reset(int episode) {
  if (episode < 0 || episode >= episode_count())
    throw std::out_of_range("BessEnv::reset: episode " +
                            std::to_string(episode) + " out of range");
  base_ = episode * episode_len_;
  t_ = 0;
  done_ = false;
  state_.energy_mwh = cfg_.initial_energy_mwh();
  state_.ema_price = tick_at(0).spot_price;
  state_.window.reset();
  return {state_.energy_mwh, 0.0, tick_at(0).wind_actual,
          tick_at(0).spot_price};
}

BessEnv::Step BessEnv::step(const BessAction& raw) {
  if (done_) throw std::logic_error("BessEnv::step called on a done episode");
  return step(raw, tick_at(t_).wind_actual);
}

BessEnv::Step BessEnv::step(const BessAction& raw, double forecast_mw) {
  if (done_) throw std::logic_error("BessEnv::step called on a done episode");
  const MarketTick& tick = tick_at(t_);
  const BessStepOutcome outcome =
      bess_transition(state_, raw, tick, forecast_mw, cfg_);

  Step out;
  out.reward = outcome.reward;
  out.ledger = outcome.ledger;
  out.executed = outcome.executed;

  ++t_;
  done_ = t_ == episode_len_;
  out.done = done_;
  const MarketTick& prev = tick_at(t_ - 1);
  out.obs = {state_.energy_mwh, curtail_frequency(state_.window),
             prev.wind_actual, prev.spot_price};
  return out;
}

std::array<double, BessEnv::kObsDim> BessEnv::observation_vector(
    const BessObservation& o) const {
  const double span = cfg_.e_max - cfg_.e_min;
  const double e_norm =
      span > 0 ? (o.prev_energy_mwh - cfg_.e_min) / span : 0.0;
  return {e_norm, o.curtail_freq, stats_.norm_wind(o.prev_wind_actual_mw),
          stats_.norm_price(o.prev_price)};
}

}  // namespace windbess
