#pragma once

#include <cstdint>

namespace windbess {

// One dispatch interval of market data.
struct MarketTick {
  std::int64_t t_index = 0;   // interval counter, strictly increasing
  double spot_price = 0.0;    // AU$/MWh, may be negative
  double wind_actual = 0.0;   // realized wind power, MW
};

enum class BessMode { Idle, Charge, Discharge };

// Wind farm bid: the availability offered into the market for one interval.
struct WindAction {
  double availability_mw = 0.0;
};

// Battery bid for one interval. p_spot_mw is traded against the market,
// p_curtail_mw is drawn from on-site curtailed wind. Discharging and drawing
// curtailment are mutually exclusive; clamp_feasible() enforces that.
struct BessAction {
  BessMode mode = BessMode::Idle;
  double p_spot_mw = 0.0;
  double p_curtail_mw = 0.0;
};

// Per-interval settlement record for the joint system.
struct StepLedger {
  double wind_dispatched_mw = 0.0;       // min(actual, bid)
  double wind_curtailed_mw = 0.0;        // surplus above the bid
  double wind_revenue = 0.0;             // AU$, deviation penalty included
  double bess_revenue = 0.0;             // AU$, efficiency priced in
  double degradation_cost = 0.0;         // AU$, discharge wear
  double energy_delta_mwh = 0.0;         // battery energy change
  double absorbed_curtailment_mwh = 0.0; // curtailed energy stored
  double spot_charged_mwh = 0.0;         // energy bought from the market
  double spot_price = 0.0;               // AU$/MWh at this interval
  double curtail_freq = 0.0;             // windowed curtailment frequency
};

}  // namespace windbess
