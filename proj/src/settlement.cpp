#include "windbess/settlement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace windbess {

WindSettlement settle_wind(double forecast_mw, const MarketTick& tick,
                           const SystemConfig& cfg) {
  const double dispatched = std::min(tick.wind_actual, forecast_mw);
  const double deviation = std::abs(tick.wind_actual - forecast_mw);
  const double revenue = cfg.dt_hours * tick.spot_price *
                         (dispatched - cfg.lambda_penalty * deviation);
  return {dispatched, revenue};
}

double curtailed_power(double actual_mw, double forecast_mw) {
  return actual_mw > forecast_mw ? actual_mw - forecast_mw : 0.0;
}

double settle_bess(const BessAction& action, const MarketTick& tick,
                   const SystemConfig& cfg) {
  double gate = 0.0;
  if (action.mode == BessMode::Discharge) gate = cfg.eta_dch;
  if (action.mode == BessMode::Charge) gate = -1.0 / cfg.eta_ch;
  return cfg.dt_hours * tick.spot_price * action.p_spot_mw * gate;
}

double degradation_step(const BessAction& action, const SystemConfig& cfg) {
  if (action.mode != BessMode::Discharge) return 0.0;
  return cfg.c_degradation * cfg.dt_hours * action.p_spot_mw;
}

double energy_delta(const BessAction& action, double curtailed_mw,
                    const SystemConfig& cfg) {
  const double v_ch = action.mode == BessMode::Charge ? 1.0 : 0.0;
  const double v_dch = action.mode == BessMode::Discharge ? 1.0 : 0.0;
  return cfg.dt_hours * ((v_ch - v_dch) * action.p_spot_mw +
                         std::min(action.p_curtail_mw, curtailed_mw));
}

double max_power_for_energy(double delta_e_mwh, double dt_hours) {
  if (!(delta_e_mwh > 0)) return 0.0;
  double p = delta_e_mwh / dt_hours;
  // Never let rounding move more energy than requested.
  while (dt_hours * p > delta_e_mwh) p = std::nextafter(p, 0.0);
  return p;
}

namespace {

double next_down(double x) { return x > 0 ? std::nextafter(x, 0.0) : 0.0; }

}  // namespace

BessAction clamp_feasible(BessAction a, double e_now_mwh, double curtailed_mw,
                          const SystemConfig& cfg) {
  if (!(e_now_mwh >= cfg.e_min && e_now_mwh <= cfg.e_max))
    throw std::out_of_range("clamp_feasible: stored energy outside bounds");

  switch (a.mode) {
    case BessMode::Idle:  // idle moves no power
      a.p_spot_mw = 0.0;
      a.p_curtail_mw = 0.0;
      break;
    case BessMode::Discharge:  // no curtailment draw while discharging
      a.p_curtail_mw = 0.0;
      break;
    case BessMode::Charge:
      break;
  }
  a.p_spot_mw = std::clamp(a.p_spot_mw, 0.0, cfg.p_max_bess);
  a.p_curtail_mw = std::clamp(a.p_curtail_mw, 0.0, cfg.p_max_bess);

  if (a.mode == BessMode::Charge) {
    if (a.p_spot_mw + a.p_curtail_mw > cfg.p_max_bess)
      a.p_spot_mw = std::max(0.0, cfg.p_max_bess - a.p_curtail_mw);
    while (a.p_spot_mw + a.p_curtail_mw > cfg.p_max_bess)
      a.p_spot_mw = next_down(a.p_spot_mw);

    if (e_now_mwh + energy_delta(a, curtailed_mw, cfg) > cfg.e_max) {
      const double headroom = cfg.e_max - e_now_mwh;
      const double allowed = max_power_for_energy(headroom, cfg.dt_hours);
      const double absorbed = std::min(a.p_curtail_mw, curtailed_mw);
      a.p_spot_mw = std::max(0.0, allowed - absorbed);
      if (std::min(a.p_curtail_mw, curtailed_mw) > allowed)
        a.p_curtail_mw = allowed;
      while (e_now_mwh + energy_delta(a, curtailed_mw, cfg) > cfg.e_max) {
        if (a.p_spot_mw > 0)
          a.p_spot_mw = next_down(a.p_spot_mw);
        else
          a.p_curtail_mw = next_down(a.p_curtail_mw);
      }
    }
  } else if (a.mode == BessMode::Discharge) {
    if (e_now_mwh + energy_delta(a, curtailed_mw, cfg) < cfg.e_min) {
      const double available = e_now_mwh - cfg.e_min;
      a.p_spot_mw =
          std::min(a.p_spot_mw, max_power_for_energy(available, cfg.dt_hours));
      while (e_now_mwh + energy_delta(a, curtailed_mw, cfg) < cfg.e_min)
        a.p_spot_mw = next_down(a.p_spot_mw);
    }
  }
  return a;
}

ObjectiveTotal objective_total(std::span<const StepLedger> steps) {
  ObjectiveTotal out;
  for (const StepLedger& s : steps) {
    out.wind_revenue += s.wind_revenue;
    out.bess_revenue += s.bess_revenue;
    out.degradation_cost += s.degradation_cost;
  }
  out.total = out.wind_revenue + out.bess_revenue - out.degradation_cost;
  return out;
}

}  // namespace windbess
