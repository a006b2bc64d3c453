#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "windbess/errors.hpp"
#include "windbess/settlement.hpp"

using namespace windbess;

namespace {

MarketTick tick(double price, double wind) { return MarketTick{0, price, wind}; }

BessAction charge(double p_spot, double p_curtail = 0.0) {
  return BessAction{BessMode::Charge, p_spot, p_curtail};
}
BessAction discharge(double p_spot) {
  return BessAction{BessMode::Discharge, p_spot, 0.0};
}

}  // namespace

TEST_CASE("wind settlement pays dispatched energy minus the deviation penalty") {
  SystemConfig cfg;

  SUBCASE("surplus wind is dispatched at the bid and penalized") {
    auto s = settle_wind(40.0, tick(100.0, 50.0), cfg);
    CHECK(s.dispatched_mw == doctest::Approx(40.0));
    CHECK(s.revenue ==
          doctest::Approx((1.0 / 12.0) * 100.0 * (40.0 - 1.5 * 10.0))
              .epsilon(1e-9));
  }
  SUBCASE("shortfall dispatches the realization and is penalized too") {
    auto s = settle_wind(50.0, tick(60.0, 40.0), cfg);
    CHECK(s.dispatched_mw == doctest::Approx(40.0));
    CHECK(s.revenue ==
          doctest::Approx((1.0 / 12.0) * 60.0 * (40.0 - 15.0)).epsilon(1e-9));
  }
  SUBCASE("exact delivery at zero price earns nothing") {
    auto s = settle_wind(30.0, tick(0.0, 30.0), cfg);
    CHECK(s.dispatched_mw == doctest::Approx(30.0));
    CHECK(s.revenue == 0.0);
  }
  SUBCASE("revenue is maximized when the bid matches the realization") {
    const double actual = 41.25;
    const MarketTick tk = tick(80.0, actual);
    const double at_actual = settle_wind(actual, tk, cfg).revenue;
    for (int i = 0; i <= 670; ++i) {
      const double bid = 0.1 * i;
      CHECK(settle_wind(bid, tk, cfg).revenue <= at_actual + 1e-12);
    }
  }
}

TEST_CASE("curtailed power is the wind surplus above the bid") {
  CHECK(curtailed_power(50.0, 40.0) == doctest::Approx(10.0));
  CHECK(curtailed_power(40.0, 50.0) == 0.0);
  CHECK(curtailed_power(30.0, 30.0) == 0.0);
}

TEST_CASE("battery settlement prices efficiency into the cashflow") {
  SystemConfig cfg;

  SUBCASE("charging buys at price / eta_ch") {
    CHECK(settle_bess(charge(10.0), tick(60.0, 0.0), cfg) ==
          doctest::Approx(-(1.0 / 12.0) * (1.0 / 0.95) * 60.0 * 10.0)
              .epsilon(1e-9));
  }
  SUBCASE("discharging sells at price * eta_dch") {
    CHECK(settle_bess(discharge(10.0), tick(60.0, 0.0), cfg) ==
          doctest::Approx((1.0 / 12.0) * 0.95 * 60.0 * 10.0).epsilon(1e-9));
  }
  SUBCASE("idle trades nothing") {
    CHECK(settle_bess(BessAction{BessMode::Idle, 10.0, 10.0},
                      tick(60.0, 0.0), cfg) == 0.0);
  }
}

TEST_CASE("degradation wears only the discharged market power") {
  SystemConfig cfg;
  CHECK(degradation_step(discharge(10.0), cfg) ==
        doctest::Approx((1.0 / 12.0) * 1.0 * 10.0).epsilon(1e-9));
  CHECK(degradation_step(charge(10.0), cfg) == 0.0);
  CHECK(degradation_step(discharge(0.0), cfg) == 0.0);
  CHECK(degradation_step(BessAction{}, cfg) == 0.0);
}

TEST_CASE("energy delta moves stored energy without efficiency losses") {
  SystemConfig cfg;

  SUBCASE("charging adds market and curtailment power") {
    CHECK(energy_delta(charge(10.0, 5.0), 3.0, cfg) ==
          doctest::Approx((1.0 / 12.0) * (10.0 + 3.0)).epsilon(1e-9));
  }
  SUBCASE("discharging removes market power") {
    CHECK(energy_delta(discharge(6.0), 0.0, cfg) ==
          doctest::Approx(-(1.0 / 12.0) * 6.0).epsilon(1e-9));
  }
  SUBCASE("idle holds even with a pending curtailment request") {
    CHECK(energy_delta(BessAction{BessMode::Idle, 0.0, 4.0}, 0.0, cfg) == 0.0);
  }
}

TEST_CASE("clamp projects raw actions onto the feasible set") {
  SystemConfig cfg;

  SUBCASE("near the energy ceiling the market draw yields first") {
    auto a = clamp_feasible(charge(10.0, 3.0), 9.0, 5.0, cfg);
    CHECK(a.mode == BessMode::Charge);
    CHECK(a.p_curtail_mw == doctest::Approx(3.0));
    CHECK(a.p_spot_mw == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(9.0 + energy_delta(a, 5.0, cfg) <= cfg.e_max + 1e-12);
  }
  SUBCASE("discharge at the floor is cut to zero") {
    auto a = clamp_feasible(discharge(10.0), 0.5, 0.0, cfg);
    CHECK(a.mode == BessMode::Discharge);
    CHECK(a.p_spot_mw == 0.0);
    CHECK(a.p_curtail_mw == 0.0);
  }
  SUBCASE("idle zeroes both powers") {
    auto a = clamp_feasible(BessAction{BessMode::Idle, 7.0, 7.0}, 5.0, 9.0, cfg);
    CHECK(a.p_spot_mw == 0.0);
    CHECK(a.p_curtail_mw == 0.0);
  }
  SUBCASE("discharge draws no curtailment") {
    auto a = clamp_feasible(BessAction{BessMode::Discharge, 4.0, 6.0}, 5.0,
                            8.0, cfg);
    CHECK(a.p_curtail_mw == 0.0);
    CHECK(a.p_spot_mw == doctest::Approx(4.0));
  }
  SUBCASE("powers cap at the rating and the charging sum cap holds") {
    auto a = clamp_feasible(charge(25.0, 25.0), 2.0, 30.0, cfg);
    CHECK(a.p_curtail_mw <= cfg.p_max_bess + 1e-12);
    CHECK(a.p_spot_mw + a.p_curtail_mw <= cfg.p_max_bess + 1e-12);
  }
  SUBCASE("energy outside the bounds is rejected") {
    CHECK_THROWS_AS(clamp_feasible(charge(1.0), 10.0, 0.0, cfg),
                    std::out_of_range);
    CHECK_THROWS_AS(clamp_feasible(charge(1.0), 0.2, 0.0, cfg),
                    std::out_of_range);
  }
}

TEST_CASE("clamp holds every constraint and is idempotent under fuzzing") {
  SystemConfig cfg;
  std::mt19937_64 rng(0x5e771e);
  std::uniform_real_distribution<double> power(-5.0, 25.0);
  std::uniform_real_distribution<double> surplus(0.0, 30.0);
  std::uniform_int_distribution<int> mode(0, 2);

  double e = cfg.initial_energy_mwh();
  for (int i = 0; i < 20000; ++i) {
    BessAction raw{static_cast<BessMode>(mode(rng)), power(rng), power(rng)};
    const double curtailed = surplus(rng);
    const BessAction a = clamp_feasible(raw, e, curtailed, cfg);

    CHECK(a.mode == raw.mode);
    CHECK(a.p_spot_mw >= 0.0);
    CHECK(a.p_curtail_mw >= 0.0);
    CHECK(a.p_spot_mw <= cfg.p_max_bess);
    CHECK(a.p_curtail_mw <= cfg.p_max_bess);
    // A curtailment draw above the available surplus is inert: energy and
    // absorption both use min(p_curtail, curtailed), so it is not capped.
    if (a.mode == BessMode::Charge) {
      CHECK(a.p_spot_mw + a.p_curtail_mw <= cfg.p_max_bess);
    } else {
      CHECK(a.p_curtail_mw == 0.0);
    }
    if (a.mode != BessMode::Charge) CHECK(a.p_curtail_mw == 0.0);

    const BessAction again = clamp_feasible(a, e, curtailed, cfg);
    CHECK(again.mode == a.mode);
    CHECK(again.p_spot_mw == a.p_spot_mw);
    CHECK(again.p_curtail_mw == a.p_curtail_mw);

    e += energy_delta(a, curtailed, cfg);
    CHECK(e >= cfg.e_min - 1e-12);
    CHECK(e <= cfg.e_max + 1e-12);
    e = std::clamp(e, cfg.e_min, cfg.e_max);
  }
}

TEST_CASE("objective total sums the ledger columns") {
  SUBCASE("empty input is all zeros") {
    auto t = objective_total({});
    CHECK(t.wind_revenue == 0.0);
    CHECK(t.bess_revenue == 0.0);
    CHECK(t.degradation_cost == 0.0);
    CHECK(t.total == 0.0);
  }
  SUBCASE("single step reproduces the composed hand value") {
    StepLedger s;
    s.wind_revenue = (1.0 / 12.0) * 100.0 * (30.0 - 1.5 * 5.0);
    s.bess_revenue = (1.0 / 12.0) * 0.95 * 60.0 * 10.0;
    s.degradation_cost = (1.0 / 12.0) * 1.0 * 10.0;
    auto t = objective_total({&s, 1});
    CHECK(t.total ==
          doctest::Approx(s.wind_revenue + s.bess_revenue - s.degradation_cost)
              .epsilon(1e-9));
  }
  SUBCASE("two identical steps double every component") {
    StepLedger s;
    s.wind_revenue = 12.5;
    s.bess_revenue = 4.0;
    s.degradation_cost = 0.75;
    std::vector<StepLedger> steps{s, s};
    auto t = objective_total(steps);
    CHECK(t.wind_revenue == doctest::Approx(25.0));
    CHECK(t.bess_revenue == doctest::Approx(8.0));
    CHECK(t.degradation_cost == doctest::Approx(1.5));
    CHECK(t.total == doctest::Approx(25.0 + 8.0 - 1.5));
  }
}

TEST_CASE("max power for an energy budget never overshoots it") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> de(0.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const double budget = de(rng);
    const double p = max_power_for_energy(budget, 1.0 / 12.0);
    CHECK(p >= 0.0);
    CHECK((1.0 / 12.0) * p <= budget);
  }
  CHECK(max_power_for_energy(0.0, 1.0 / 12.0) == 0.0);
}
