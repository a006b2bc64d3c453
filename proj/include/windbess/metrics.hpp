#pragma once

#include <array>
#include <span>
#include <vector>

#include "windbess/market.hpp"
#include "windbess/settlement.hpp"

namespace windbess {

// Aggregated settlement over any run of intervals.
struct EpisodeLedger {
  std::vector<StepLedger> steps;
  double wind_revenue = 0.0;      // AU$
  double bess_revenue = 0.0;      // AU$
  double degradation_cost = 0.0;  // AU$
  double total = 0.0;             // wind + bess - degradation
  double curtailed_mwh = 0.0;     // wind surplus lost or absorbed
  double absorbed_mwh = 0.0;      // curtailed energy stored in the battery
  double spot_charged_mwh = 0.0;  // charged energy bought from the market
};

// Totals match objective_total() on the same steps bit for bit.
EpisodeLedger summarize(std::vector<StepLedger> steps, double dt_hours);

enum class GroupBy { SpotPrice, CurtailFreq };

// Linear-interpolation quantile of an unsorted sample, p in [0, 1].
double quantile_linear(std::vector<double> values, double p);

// Charging-source mix per quartile of the grouping variable, computed over
// charging steps only (steps that stored any energy). Shares are means of
// per-step fractions; boundary ties fall into the lower bucket.
struct QuartileReport {
  GroupBy group_by = GroupBy::SpotPrice;
  std::array<double, 3> edges{};          // Q1, Q2, Q3 of the group variable
  std::array<double, 4> curtail_share{};  // mean curtailment fraction
  std::array<double, 4> spot_share{};     // mean market fraction
  std::array<int, 4> counts{};
};

// Throws DataError when fewer than 4 charging steps exist.
QuartileReport quartile_analysis(std::span<const StepLedger> steps,
                                 GroupBy group_by);

}  // namespace windbess
