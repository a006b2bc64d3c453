#include <random>
#include <vector>

#include "doctest.h"
#include "windbess/errors.hpp"
#include "windbess/metrics.hpp"

using namespace windbess;

namespace {

StepLedger charging_step(double group_price, double freq, double spot_mwh,
                         double curtail_mwh) {
  StepLedger s;
  s.spot_price = group_price;
  s.curtail_freq = freq;
  s.spot_charged_mwh = spot_mwh;
  s.absorbed_curtailment_mwh = curtail_mwh;
  return s;
}

}  // namespace

TEST_CASE("episode summary totals the per-step ledgers") {
  const double dt = 1.0 / 12.0;

  SUBCASE("empty input is all zeros") {
    EpisodeLedger lg = summarize({}, dt);
    CHECK(lg.wind_revenue == 0.0);
    CHECK(lg.bess_revenue == 0.0);
    CHECK(lg.degradation_cost == 0.0);
    CHECK(lg.total == 0.0);
    CHECK(lg.curtailed_mwh == 0.0);
    CHECK(lg.absorbed_mwh == 0.0);
    CHECK(lg.spot_charged_mwh == 0.0);
  }

  SUBCASE("single step reproduces the composed hand value") {
    StepLedger s;
    s.wind_revenue = (1.0 / 12.0) * 100.0 * (40.0 - 1.5 * 10.0);
    s.bess_revenue = (1.0 / 12.0) * 0.95 * 60.0 * 10.0;
    s.degradation_cost = (1.0 / 12.0) * 1.0 * 10.0;
    EpisodeLedger lg = summarize({s}, dt);
    CHECK(lg.total == doctest::Approx(255.0).epsilon(1e-9));
  }

  SUBCASE("two identical episodes double the totals") {
    StepLedger s;
    s.wind_revenue = 3.0;
    s.bess_revenue = 2.0;
    s.degradation_cost = 0.5;
    s.wind_curtailed_mw = 12.0;
    s.absorbed_curtailment_mwh = 0.25;
    s.spot_charged_mwh = 0.5;
    EpisodeLedger one = summarize({s}, dt);
    EpisodeLedger two = summarize({s, s}, dt);
    CHECK(two.total == doctest::Approx(2.0 * one.total));
    CHECK(two.curtailed_mwh == doctest::Approx(2.0 * one.curtailed_mwh));
    CHECK(two.absorbed_mwh == doctest::Approx(2.0 * one.absorbed_mwh));
    CHECK(two.spot_charged_mwh ==
          doctest::Approx(2.0 * one.spot_charged_mwh));
  }

  SUBCASE("totals agree with the settlement-side accounting") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> cash(-40.0, 90.0);
    std::vector<StepLedger> steps;
    for (int i = 0; i < 500; ++i) {
      StepLedger s;
      s.wind_revenue = cash(rng);
      s.bess_revenue = cash(rng);
      s.degradation_cost = std::abs(cash(rng)) * 0.01;
      steps.push_back(s);
    }
    EpisodeLedger lg = summarize(steps, dt);
    ObjectiveTotal ot = objective_total(steps);
    CHECK(lg.wind_revenue == ot.wind_revenue);
    CHECK(lg.bess_revenue == ot.bess_revenue);
    CHECK(lg.degradation_cost == ot.degradation_cost);
    CHECK(lg.total == ot.total);
  }
}

TEST_CASE("linear-interpolation quantiles match hand values") {
  CHECK(quantile_linear({1.0, 2.0, 3.0, 4.0}, 0.5) == doctest::Approx(2.5));
  CHECK(quantile_linear({4.0, 1.0, 3.0, 2.0}, 0.25) == doctest::Approx(1.75));
  CHECK(quantile_linear({5.0}, 0.9) == doctest::Approx(5.0));
  CHECK(quantile_linear({1.0, 3.0}, 0.0) == doctest::Approx(1.0));
  CHECK(quantile_linear({1.0, 3.0}, 1.0) == doctest::Approx(3.0));
}

TEST_CASE("quartile analysis splits charging steps by the grouping variable") {
  SUBCASE("all charging from the market zeroes the curtailment share") {
    std::vector<StepLedger> steps;
    for (int i = 0; i < 8; ++i)
      steps.push_back(charging_step(10.0 * i, 0.0, 0.5, 0.0));
    auto rep = quartile_analysis(steps, GroupBy::SpotPrice);
    for (int b = 0; b < 4; ++b) {
      CHECK(rep.curtail_share[b] == doctest::Approx(0.0));
      CHECK(rep.spot_share[b] == doctest::Approx(1.0));
    }
  }

  SUBCASE("all charging from curtailment saturates the share") {
    std::vector<StepLedger> steps;
    for (int i = 0; i < 8; ++i)
      steps.push_back(charging_step(10.0 * i, 0.1 * i, 0.0, 0.75));
    auto rep = quartile_analysis(steps, GroupBy::CurtailFreq);
    for (int b = 0; b < 4; ++b)
      CHECK(rep.curtail_share[b] == doctest::Approx(1.0));
  }

  SUBCASE("hand-built eight-step ledger") {
    // Prices 10..80; edges fall at 27.5 / 45 / 62.5. Steps below Q1 charge
    // entirely from curtailment, the top bucket entirely from spot, the
    // middle half-and-half.
    std::vector<StepLedger> steps;
    steps.push_back(charging_step(10.0, 0.0, 0.0, 1.0));
    steps.push_back(charging_step(20.0, 0.0, 0.0, 0.5));
    steps.push_back(charging_step(30.0, 0.0, 0.25, 0.25));
    steps.push_back(charging_step(40.0, 0.0, 0.5, 0.5));
    steps.push_back(charging_step(50.0, 0.0, 0.75, 0.75));
    steps.push_back(charging_step(60.0, 0.0, 0.5, 0.5));
    steps.push_back(charging_step(70.0, 0.0, 1.0, 0.0));
    steps.push_back(charging_step(80.0, 0.0, 0.25, 0.0));

    auto rep = quartile_analysis(steps, GroupBy::SpotPrice);
    CHECK(rep.edges[0] == doctest::Approx(27.5));
    CHECK(rep.edges[1] == doctest::Approx(45.0));
    CHECK(rep.edges[2] == doctest::Approx(62.5));
    CHECK(rep.counts[0] == 2);
    CHECK(rep.counts[1] == 2);
    CHECK(rep.counts[2] == 2);
    CHECK(rep.counts[3] == 2);
    CHECK(rep.curtail_share[0] == doctest::Approx(1.0));
    CHECK(rep.curtail_share[1] == doctest::Approx(0.5));
    CHECK(rep.curtail_share[2] == doctest::Approx(0.5));
    CHECK(rep.curtail_share[3] == doctest::Approx(0.0));
    for (int b = 0; b < 4; ++b)
      CHECK(rep.curtail_share[b] + rep.spot_share[b] == doctest::Approx(1.0));
  }

  SUBCASE("buckets partition the charging steps") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> price(-20.0, 200.0);
    std::uniform_real_distribution<double> mwh(0.0, 0.8);
    std::vector<StepLedger> steps;
    int charging = 0;
    for (int i = 0; i < 400; ++i) {
      const double spot = mwh(rng), cur = mwh(rng);
      steps.push_back(charging_step(price(rng), 0.0, spot, cur));
      if (spot + cur > 0.0) ++charging;
      if (i % 5 == 0) steps.push_back(charging_step(price(rng), 0.0, 0.0, 0.0));
    }
    auto rep = quartile_analysis(steps, GroupBy::SpotPrice);
    CHECK(rep.counts[0] + rep.counts[1] + rep.counts[2] + rep.counts[3] ==
          charging);
  }

  SUBCASE("fewer than four charging steps is an error") {
    std::vector<StepLedger> steps;
    steps.push_back(charging_step(10.0, 0.0, 0.5, 0.0));
    steps.push_back(charging_step(20.0, 0.0, 0.5, 0.0));
    steps.push_back(charging_step(30.0, 0.0, 0.5, 0.0));
    CHECK_THROWS_AS(quartile_analysis(steps, GroupBy::SpotPrice), DataError);
  }
}
