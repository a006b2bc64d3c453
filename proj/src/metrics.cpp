#include "windbess/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "windbess/errors.hpp"

namespace windbess {

EpisodeLedger summarize(std::vector<StepLedger> steps, double dt_hours) {
  EpisodeLedger out;
  out.steps = std::move(steps);
  const ObjectiveTotal totals = objective_total(out.steps);
  out.wind_revenue = totals.wind_revenue;
  out.bess_revenue = totals.bess_revenue;
  out.degradation_cost = totals.degradation_cost;
  out.total = totals.total;
  for (const StepLedger& s : out.steps) {
    out.curtailed_mwh += s.wind_curtailed_mw * dt_hours;
    out.absorbed_mwh += s.absorbed_curtailment_mwh;
    out.spot_charged_mwh += s.spot_charged_mwh;
  }
  return out;
}

double quantile_linear(std::vector<double> values, double p) {
  if (values.empty()) throw DataError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = h - std::floor(h);
  return values[lo] + frac * (values[hi] - values[lo]);
}

QuartileReport quartile_analysis(std::span<const StepLedger> steps,
                                 GroupBy group_by) {
  std::vector<const StepLedger*> charging;
  for (const StepLedger& s : steps)
    if (s.absorbed_curtailment_mwh + s.spot_charged_mwh > 0)
      charging.push_back(&s);
  if (charging.size() < 4)
    throw DataError("quartile_analysis needs at least 4 charging steps, got " +
                    std::to_string(charging.size()));

  auto group_value = [group_by](const StepLedger& s) {
    return group_by == GroupBy::SpotPrice ? s.spot_price : s.curtail_freq;
  };

  std::vector<double> values;
  values.reserve(charging.size());
  for (const StepLedger* s : charging) values.push_back(group_value(*s));

  QuartileReport report;
  report.group_by = group_by;
  report.edges = {quantile_linear(values, 0.25), quantile_linear(values, 0.50),
                  quantile_linear(values, 0.75)};

  std::array<double, 4> curtail_sum{}, spot_sum{};
  for (const StepLedger* s : charging) {
    const double v = group_value(*s);
    int bucket = 3;
    if (v <= report.edges[0])
      bucket = 0;
    else if (v <= report.edges[1])
      bucket = 1;
    else if (v <= report.edges[2])
      bucket = 2;
    const double charged = s->absorbed_curtailment_mwh + s->spot_charged_mwh;
    curtail_sum[bucket] += s->absorbed_curtailment_mwh / charged;
    spot_sum[bucket] += s->spot_charged_mwh / charged;
    ++report.counts[bucket];
  }
  for (int b = 0; b < 4; ++b) {
    if (report.counts[b] == 0) continue;
    report.curtail_share[b] = curtail_sum[b] / report.counts[b];
    report.spot_share[b] = spot_sum[b] / report.counts[b];
  }
  return report;
}

}  // namespace windbess
