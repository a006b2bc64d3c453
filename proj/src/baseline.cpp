#include "windbess/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "windbess/errors.hpp"
#include "windbess/settlement.hpp"

namespace windbess {

namespace {

// Power that moves exactly de MWh to another lattice point within one
// interval, or nothing when the move exceeds the power rating. Guards
// against rounding ever moving more energy than de.
std::optional<double> power_for_move(double de, double dt, double p_max) {
  if (!(de > 0)) return std::nullopt;
  double p = de / dt;
  if (p > p_max) {
    if (de > dt * p_max) return std::nullopt;
    p = p_max;  // de/dt rounded just past the rating
  }
  while (dt * p > de) p = std::nextafter(p, 0.0);
  return p;
}

}  // namespace

Forecast make_forecast(std::span<const MarketTick> history, int horizon,
                       ForecastMethod method, double ema_tau) {
  if (history.empty()) throw ConfigError("make_forecast: empty history");
  if (horizon < 0) throw ConfigError("make_forecast: negative horizon");

  double price, wind;
  switch (method) {
    case ForecastMethod::Persistence:
      price = history.back().spot_price;
      wind = history.back().wind_actual;
      break;
    case ForecastMethod::EmaDrift: {
      price = history.front().spot_price;
      wind = history.front().wind_actual;
      for (std::size_t i = 1; i < history.size(); ++i) {
        price = ema_tau * price + (1.0 - ema_tau) * history[i].spot_price;
        wind = ema_tau * wind + (1.0 - ema_tau) * history[i].wind_actual;
      }
      break;
    }
    case ForecastMethod::Perfect:
      throw ConfigError("make_forecast: Perfect needs future ticks");
    default:
      throw ConfigError("make_forecast: unknown method");
  }
  Forecast fc;
  fc.prices.assign(static_cast<std::size_t>(horizon), price);
  fc.winds.assign(static_cast<std::size_t>(horizon), wind);
  return fc;
}

DpPlan dp_optimize(const Forecast& forecast, double e0,
                   const SystemConfig& cfg, int soc_steps) {
  if (soc_steps < 2) throw ConfigError("dp_optimize: soc_steps must be >= 2");
  if (!(e0 >= cfg.e_min && e0 <= cfg.e_max))
    throw ConfigError("dp_optimize: e0 outside [e_min, e_max]");

  const int H = forecast.horizon();
  const bool degenerate = cfg.e_max == cfg.e_min;
  const int n = degenerate ? 1 : soc_steps;  // lattice points
  const double g =
      degenerate ? 0.0 : (cfg.e_max - cfg.e_min) / static_cast<double>(n - 1);
  // State n is the initial energy, which may sit off the lattice. It is
  // reachable only through chains of Idle moves.
  const int anchor = n;
  auto energy_of = [&](int s) {
    if (s == anchor) return e0;
    return s == n - 1 ? cfg.e_max : cfg.e_min + g * s;
  };

  struct Choice {
    int next = 0;
    BessMode mode = BessMode::Idle;
  };
  std::vector<std::vector<double>> value(
      static_cast<std::size_t>(H) + 1, std::vector<double>(n + 1, 0.0));
  std::vector<std::vector<Choice>> choice(
      static_cast<std::size_t>(H), std::vector<Choice>(n + 1));

  for (int t = H - 1; t >= 0; --t) {
    const MarketTick tick{t, forecast.prices[t], forecast.winds[t]};
    // The availability bid equals forecast wind, so the wind term does not
    // depend on the battery plan and no curtailment is predicted.
    const double wind_part = settle_wind(forecast.winds[t], tick, cfg).revenue;
    for (int s = 0; s <= anchor; ++s) {
      const double e_here = energy_of(s);
      double best = value[t + 1][s];  // Idle wins ties
      Choice pick{s, BessMode::Idle};

      for (int j = 0; j < n; ++j) {  // lattice targets only
        const double e_there = energy_of(j);
        BessMode mode;
        double de;
        if (e_there > e_here) {
          mode = BessMode::Charge;
          de = e_there - e_here;
        } else if (e_there < e_here) {
          mode = BessMode::Discharge;
          de = e_here - e_there;
        } else {
          continue;
        }
        const auto p = power_for_move(de, cfg.dt_hours, cfg.p_max_bess);
        if (!p) continue;
        const BessAction a{mode, *p, 0.0};
        const double move_value =
            settle_bess(a, tick, cfg) - degradation_step(a, cfg);
        const double candidate = move_value + value[t + 1][j];
        if (candidate > best) {
          best = candidate;
          pick = {j, mode};
        }
      }
      value[t][s] = wind_part + best;
      choice[t][s] = pick;
    }
  }

  DpPlan plan;
  plan.objective = H > 0 ? value[0][anchor] : 0.0;
  plan.wind.reserve(H);
  plan.bess.reserve(H);
  // Re-derive executed powers from the simulated trajectory so the whole
  // plan clears clamp_feasible on its own states.
  int s = anchor;
  double e_sim = e0;
  for (int t = 0; t < H; ++t) {
    plan.wind.push_back({forecast.winds[t]});
    const Choice c = choice[t][s];
    BessAction a{c.mode, 0.0, 0.0};
    if (c.mode != BessMode::Idle) {
      const double e_target = energy_of(c.next);
      const double de = c.mode == BessMode::Charge ? e_target - e_sim
                                                   : e_sim - e_target;
      const auto p = power_for_move(de, cfg.dt_hours, cfg.p_max_bess);
      a.p_spot_mw = p.value_or(0.0);
    }
    plan.bess.push_back(a);
    e_sim += energy_delta(a, 0.0, cfg);
    s = c.next;
  }
  return plan;
}

EpisodeLedger rolling_run(const Trace& trace, const SystemConfig& cfg,
                          const BaselineOptions& opts) {
  if (trace.size() == 0) throw DataError("rolling_run: empty trace");
  if (opts.horizon <= 0) throw ConfigError("rolling_run: horizon must be > 0");

  const auto n = static_cast<int>(trace.size());
  double e = cfg.initial_energy_mwh();

  // Curtailment-frequency window, kept for reporting parity with the
  // learned policies.
  std::vector<int> window(static_cast<std::size_t>(cfg.window_len), 0);
  std::size_t window_head = 0;
  int window_count = 0;

  std::vector<StepLedger> steps;
  steps.reserve(trace.size());

  for (int t = 0; t < n; ++t) {
    const int h = std::min(opts.horizon, n - t);
    Forecast fc;
    if (opts.method == ForecastMethod::Perfect) {
      fc.prices.reserve(h);
      fc.winds.reserve(h);
      for (int k = 0; k < h; ++k) {
        fc.prices.push_back(trace.ticks[t + k].spot_price);
        fc.winds.push_back(trace.ticks[t + k].wind_actual);
      }
    } else {
      // Bids for interval t rely on ticks up to t-1; the very first
      // interval bootstraps on its own tick.
      const std::size_t known = std::max(t, 1);
      fc = make_forecast({trace.ticks.data(), known}, h, opts.method,
                         opts.ema_tau);
    }

    const DpPlan plan = dp_optimize(fc, e, cfg, opts.soc_steps);
    const MarketTick& tick = trace.ticks[t];
    const double bid = plan.wind.front().availability_mw;
    const double curtailed = curtailed_power(tick.wind_actual, bid);
    const BessAction act = clamp_feasible(plan.bess.front(), e, curtailed, cfg);
    const WindSettlement ws = settle_wind(bid, tick, cfg);

    window_count += (curtailed > 0 ? 1 : 0) - window[window_head];
    window[window_head] = curtailed > 0 ? 1 : 0;
    window_head = (window_head + 1) % window.size();

    StepLedger lg;
    lg.wind_dispatched_mw = ws.dispatched_mw;
    lg.wind_curtailed_mw = curtailed;
    lg.wind_revenue = ws.revenue;
    lg.bess_revenue = settle_bess(act, tick, cfg);
    lg.degradation_cost = degradation_step(act, cfg);
    lg.energy_delta_mwh = energy_delta(act, curtailed, cfg);
    lg.absorbed_curtailment_mwh =
        cfg.dt_hours * std::min(act.p_curtail_mw, curtailed);
    lg.spot_charged_mwh =
        act.mode == BessMode::Charge ? cfg.dt_hours * act.p_spot_mw : 0.0;
    lg.spot_price = tick.spot_price;
    lg.curtail_freq =
        static_cast<double>(window_count) / static_cast<double>(window.size());
    steps.push_back(lg);

    e += lg.energy_delta_mwh;
  }
  return summarize(std::move(steps), cfg.dt_hours);
}

}  // namespace windbess
