#pragma once

#include <span>
#include <vector>

#include "windbess/config.hpp"
#include "windbess/market.hpp"
#include "windbess/metrics.hpp"
#include "windbess/trace.hpp"

namespace windbess {

enum class ForecastMethod {
  Persistence,  // repeat the last observation
  EmaDrift,     // repeat an exponential average of the history
  Perfect,      // oracle: the realized future (rolling_run only)
};

struct Forecast {
  std::vector<double> prices;  // AU$/MWh per future interval
  std::vector<double> winds;   // MW per future interval
  int horizon() const { return static_cast<int>(prices.size()); }
};

// Builds a flat forecast from past ticks. Throws ConfigError for an empty
// history or ForecastMethod::Perfect (which needs the future, not history).
Forecast make_forecast(std::span<const MarketTick> history, int horizon,
                       ForecastMethod method, double ema_tau = 0.9);

struct DpPlan {
  std::vector<WindAction> wind;   // availability bids, == forecast wind
  std::vector<BessAction> bess;   // chosen by backward induction
  double objective = 0.0;         // predicted joint revenue, AU$
};

// Exact backward induction over a stored-energy lattice of soc_steps evenly
// spaced points spanning [e_min, e_max], plus the (possibly off-lattice)
// initial state. Transition powers move exactly between lattice points and
// respect p_max_bess; under the forecast the wind bid equals forecast wind,
// so no curtailment is predicted and planned bids trade the market only.
// Idle wins ties. Throws ConfigError for soc_steps < 2 or e0 out of bounds.
DpPlan dp_optimize(const Forecast& forecast, double e0,
                   const SystemConfig& cfg, int soc_steps);

struct BaselineOptions {
  int horizon = 12;          // planning intervals per solve
  int soc_steps = 37;        // energy lattice resolution
  ForecastMethod method = ForecastMethod::Persistence;
  double ema_tau = 0.9;
};

// Receding-horizon execution: each interval re-forecasts, re-plans, and
// settles the plan's first action against the realized tick.
EpisodeLedger rolling_run(const Trace& trace, const SystemConfig& cfg,
                          const BaselineOptions& opts);

}  // namespace windbess
