#pragma once

#include <optional>

namespace windbess {

// Scalar parameters of the co-located wind farm + battery system and of the
// market it bids into. Defaults are the reference parameter set exercised by
// the test suite: a 67 MW wind farm with a 10 MW / 9 MWh usable battery
// trading on 5-minute dispatch intervals.
struct SystemConfig {
  double dt_hours = 1.0 / 12.0;   // dispatch interval length, hours
  double lambda_penalty = 1.5;    // deviation penalty weight on wind bids
  double eta_ch = 0.95;           // battery charge efficiency
  double eta_dch = 0.95;          // battery discharge efficiency
  double c_degradation = 1.0;     // degradation cost, AU$ per MWh discharged
  double p_max_wind = 67.0;       // wind farm installed capacity, MW
  double p_max_bess = 10.0;       // battery rated power, MW
  double e_min = 0.5;             // battery lower energy bound, MWh
  double e_max = 9.5;             // battery upper energy bound, MWh
  int window_len = 10;            // curtailment-frequency window, intervals
  double tau_ema = 0.9;           // smoothing of the spot price moving average
  double beta_incentive = 10.0;   // curtailment absorption reward weight
  double gamma_discount = 0.99;   // discount factor for the learning agents

  // Stored energy at episode start; defaults to e_min when unset.
  std::optional<double> initial_energy;

  double initial_energy_mwh() const { return initial_energy.value_or(e_min); }

  // Throws ConfigError when a physical bound is violated. e_min == e_max is
  // accepted so a zero-capacity battery stays expressible.
  void validate() const;
};

}  // namespace windbess
