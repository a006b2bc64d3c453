#pragma once

#include <span>

#include "windbess/config.hpp"
#include "windbess/market.hpp"

namespace windbess {

struct WindSettlement {
  double dispatched_mw = 0.0;
  double revenue = 0.0;  // AU$
};

// Pays the dispatched energy and charges the deviation penalty:
// dt * price * (min(actual, bid) - lambda * |actual - bid|).
WindSettlement settle_wind(double forecast_mw, const MarketTick& tick,
                           const SystemConfig& cfg);

// Wind surplus above the bid; zero when actual <= bid.
double curtailed_power(double actual_mw, double forecast_mw);

// Market cashflow of the battery bid. Charging buys at price/eta_ch,
// discharging sells at price*eta_dch. Idle trades nothing.
double settle_bess(const BessAction& action, const MarketTick& tick,
                   const SystemConfig& cfg);

// Wear cost: c * dt * p_spot on discharge, zero otherwise.
double degradation_step(const BessAction& action, const SystemConfig& cfg);

// Stored-energy change over one interval:
// dt * ((charge - discharge) * p_spot + min(p_curtail, curtailed)).
// Losses are priced in settle_bess, not applied to the stored energy.
double energy_delta(const BessAction& action, double curtailed_mw,
                    const SystemConfig& cfg);

// Largest power that moves at most delta_e MWh in one interval under double
// rounding, i.e. the returned p satisfies dt * p <= delta_e.
double max_power_for_energy(double delta_e_mwh, double dt_hours);

// Projects a raw action onto the feasible set:
//   - Idle moves no power; Discharge draws no curtailment.
//   - Each power is capped at p_max_bess, and their sum too while charging.
//   - The energy bound [e_min, e_max] holds after the move. When it binds,
//     the market draw yields before the free curtailment draw.
// Idempotent. Throws std::out_of_range when e_now is outside [e_min, e_max].
BessAction clamp_feasible(BessAction raw, double e_now_mwh,
                          double curtailed_mw, const SystemConfig& cfg);

struct ObjectiveTotal {
  double wind_revenue = 0.0;
  double bess_revenue = 0.0;
  double degradation_cost = 0.0;
  double total = 0.0;  // wind + bess - degradation
};

// Sums per-interval ledgers into the joint objective.
ObjectiveTotal objective_total(std::span<const StepLedger> steps);

}  // namespace windbess
