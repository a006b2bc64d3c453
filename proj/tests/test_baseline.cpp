#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "doctest.h"
#include "windbess/baseline.hpp"
#include "windbess/errors.hpp"
#include "windbess/settlement.hpp"

using namespace windbess;

namespace {

// Independent re-statement of the planner's move rule: the largest power
// that lands exactly on the target without overshooting the energy budget.
std::optional<double> oracle_power(double de, double dt, double p_max) {
  if (!(de > 0)) return std::nullopt;
  double p = de / dt;
  if (p > p_max) {
    if (de > dt * p_max) return std::nullopt;
    p = p_max;
  }
  while (dt * p > de) p = std::nextafter(p, 0.0);
  return p;
}

// Exhaustive depth-first enumeration over the full action lattice. No
// memoization, no pruning; shares only the arithmetic building blocks.
double enumerate_best(const Forecast& fc, int t, double e_here, double e0,
                      const SystemConfig& cfg, int soc_steps) {
  if (t == fc.horizon()) return 0.0;
  const int n = soc_steps;
  const double g = (cfg.e_max - cfg.e_min) / static_cast<double>(n - 1);
  const MarketTick tick{t, fc.prices[static_cast<std::size_t>(t)],
                        fc.winds[static_cast<std::size_t>(t)]};
  const double wind_part =
      settle_wind(fc.winds[static_cast<std::size_t>(t)], tick, cfg).revenue;

  double best = enumerate_best(fc, t + 1, e_here, e0, cfg, soc_steps);
  for (int j = 0; j < n; ++j) {
    const double e_there = j == n - 1 ? cfg.e_max : cfg.e_min + g * j;
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
    const auto p = oracle_power(de, cfg.dt_hours, cfg.p_max_bess);
    if (!p) continue;
    const BessAction a{mode, *p, 0.0};
    const double candidate =
        settle_bess(a, tick, cfg) - degradation_step(a, cfg) +
        enumerate_best(fc, t + 1, e_there, e0, cfg, soc_steps);
    if (candidate > best) best = candidate;
  }
  return wind_part + best;
}

Forecast random_forecast(std::mt19937_64& rng, int horizon) {
  std::uniform_real_distribution<double> price(-50.0, 350.0);
  std::uniform_real_distribution<double> wind(0.0, 67.0);
  Forecast fc;
  for (int t = 0; t < horizon; ++t) {
    fc.prices.push_back(price(rng));
    fc.winds.push_back(wind(rng));
  }
  return fc;
}

}  // namespace

TEST_CASE("forecasters extrapolate the trailing history") {
  std::vector<MarketTick> hist{{0, 60.0, 10.0}, {1, 70.0, 11.0},
                               {2, 80.0, 12.0}};

  SUBCASE("persistence repeats the last observation") {
    Forecast fc = make_forecast(hist, 3, ForecastMethod::Persistence);
    REQUIRE(fc.horizon() == 3);
    for (double p : fc.prices) CHECK(p == doctest::Approx(80.0));
    for (double w : fc.winds) CHECK(w == doctest::Approx(12.0));
  }
  SUBCASE("the averaged method is a fixed point on constant history") {
    std::vector<MarketTick> flat{{0, 100.0, 20.0}, {1, 100.0, 20.0},
                                 {2, 100.0, 20.0}};
    Forecast fc = make_forecast(flat, 4, ForecastMethod::EmaDrift, 0.9);
    for (double p : fc.prices) CHECK(p == doctest::Approx(100.0));
    for (double w : fc.winds) CHECK(w == doctest::Approx(20.0));
  }
  SUBCASE("empty history is rejected") {
    CHECK_THROWS_AS(make_forecast({}, 3, ForecastMethod::Persistence),
                    ConfigError);
  }
  SUBCASE("the oracle method cannot be built from history") {
    CHECK_THROWS_AS(make_forecast(hist, 3, ForecastMethod::Perfect),
                    ConfigError);
  }
  SUBCASE("zero horizon yields an empty forecast") {
    Forecast fc = make_forecast(hist, 0, ForecastMethod::Persistence);
    CHECK(fc.horizon() == 0);
  }
}

TEST_CASE("planner captures the buy-low sell-high spread") {
  SystemConfig cfg;
  Forecast fc;
  fc.prices = {0.0, 120.0};
  fc.winds = {0.0, 0.0};

  // A 55-point lattice makes the full-power 10 MW move land on the grid.
  DpPlan plan = dp_optimize(fc, cfg.e_min, cfg, 55);
  REQUIRE(plan.bess.size() == 2);
  CHECK(plan.bess[0].mode == BessMode::Charge);
  CHECK(plan.bess[0].p_spot_mw == doctest::Approx(10.0).epsilon(1e-9));
  CHECK(plan.bess[1].mode == BessMode::Discharge);
  CHECK(plan.bess[1].p_spot_mw == doctest::Approx(10.0).epsilon(1e-9));
  CHECK(plan.objective ==
        doctest::Approx((1.0 / 12.0) * 0.95 * 120.0 * 10.0 -
                        (1.0 / 12.0) * 1.0 * 10.0)
            .epsilon(1e-9));
}

TEST_CASE("planner idles through flat positive prices") {
  // From the energy floor: any charge is a pure cost at a flat price, and
  // there is nothing stored to sell. (Above the floor it would sell down.)
  SystemConfig cfg;
  Forecast fc;
  fc.prices.assign(8, 75.0);
  fc.winds.assign(8, 0.0);
  DpPlan plan = dp_optimize(fc, cfg.e_min, cfg, 19);
  for (const BessAction& a : plan.bess) {
    CHECK(a.mode == BessMode::Idle);
    CHECK(a.p_spot_mw == 0.0);
  }
  CHECK(plan.objective == doctest::Approx(0.0));
}

TEST_CASE("planner handles empty horizons and rejects bad arguments") {
  SystemConfig cfg;
  Forecast empty;
  DpPlan plan = dp_optimize(empty, 5.0, cfg, 11);
  CHECK(plan.objective == 0.0);
  CHECK(plan.bess.empty());
  CHECK(plan.wind.empty());

  Forecast fc;
  fc.prices = {50.0};
  fc.winds = {10.0};
  CHECK_THROWS_AS(dp_optimize(fc, 5.0, cfg, 1), ConfigError);
  CHECK_THROWS_AS(dp_optimize(fc, 0.4, cfg, 5), ConfigError);
  CHECK_THROWS_AS(dp_optimize(fc, 9.6, cfg, 5), ConfigError);
}

TEST_CASE("planner matches exhaustive enumeration on small problems") {
  SystemConfig cfg;
  cfg.dt_hours = 0.5;  // lattice moves stay within the power rating
  std::mt19937_64 rng(2718);
  std::uniform_int_distribution<int> horizon(1, 4);
  std::uniform_int_distribution<int> socs(3, 5);
  std::uniform_real_distribution<double> e_init(cfg.e_min, cfg.e_max);

  for (int trial = 0; trial < 12; ++trial) {
    const int h = horizon(rng);
    const int n = socs(rng);
    const Forecast fc = random_forecast(rng, h);
    const double e0 = e_init(rng);
    const DpPlan plan = dp_optimize(fc, e0, cfg, n);
    const double oracle = enumerate_best(fc, 0, e0, e0, cfg, n);
    CHECK(plan.objective == oracle);
  }
}

TEST_CASE("refining the energy lattice never hurts the plan") {
  SystemConfig cfg;
  cfg.dt_hours = 0.5;
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 6; ++trial) {
    const Forecast fc = random_forecast(rng, 6);
    double prev = -1e300;
    for (int n : {5, 9, 17, 33}) {  // nested grids
      const double obj = dp_optimize(fc, cfg.e_min, cfg, n).objective;
      CHECK(obj >= prev - 1e-9);
      prev = obj;
    }
  }
}

TEST_CASE("plans pass the feasibility clamp unchanged") {
  SystemConfig cfg;
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 10; ++trial) {
    const Forecast fc = random_forecast(rng, 24);
    const DpPlan plan = dp_optimize(fc, 2.75, cfg, 37);
    double e = 2.75;
    for (const BessAction& a : plan.bess) {
      const BessAction c = clamp_feasible(a, e, 0.0, cfg);
      CHECK(c.mode == a.mode);
      CHECK(c.p_spot_mw == a.p_spot_mw);
      CHECK(c.p_curtail_mw == a.p_curtail_mw);
      e += energy_delta(c, 0.0, cfg);
      CHECK(e >= cfg.e_min);
      CHECK(e <= cfg.e_max);
    }
  }
}

TEST_CASE("receding-horizon run under perfect foresight meets its own plan") {
  SystemConfig cfg;
  Trace tr = synth_trace(1, 99);
  BaselineOptions opts;
  opts.method = ForecastMethod::Perfect;
  opts.horizon = static_cast<int>(tr.size());
  opts.soc_steps = 7;

  Forecast full;
  for (const auto& tick : tr.ticks) {
    full.prices.push_back(tick.spot_price);
    full.winds.push_back(tick.wind_actual);
  }
  const DpPlan plan = dp_optimize(full, cfg.initial_energy_mwh(), cfg, 7);
  const EpisodeLedger led = rolling_run(tr, cfg, opts);
  CHECK(led.total == doctest::Approx(plan.objective).epsilon(1e-9));
}

TEST_CASE("simulating a plan step by step reproduces its predicted value") {
  SystemConfig cfg;
  std::mt19937_64 rng(55);
  const Forecast fc = random_forecast(rng, 96);
  const DpPlan plan = dp_optimize(fc, 5.0, cfg, 19);

  double total = 0.0;
  double e = 5.0;
  for (int t = 0; t < fc.horizon(); ++t) {
    const MarketTick tick{t, fc.prices[static_cast<std::size_t>(t)],
                          fc.winds[static_cast<std::size_t>(t)]};
    const BessAction& a = plan.bess[static_cast<std::size_t>(t)];
    total += settle_wind(plan.wind[static_cast<std::size_t>(t)].availability_mw,
                         tick, cfg)
                 .revenue;
    total += settle_bess(a, tick, cfg) - degradation_step(a, cfg);
    e += energy_delta(a, 0.0, cfg);
  }
  CHECK(total == doctest::Approx(plan.objective).epsilon(1e-9));
}

TEST_CASE("a zero-capacity battery contributes nothing to the baseline") {
  SystemConfig cfg;
  cfg.e_min = 5.0;
  cfg.e_max = 5.0;
  Trace tr = synth_trace(1, 7);
  BaselineOptions opts;
  EpisodeLedger led = rolling_run(tr, cfg, opts);
  CHECK(led.bess_revenue == 0.0);
  CHECK(led.degradation_cost == 0.0);
  CHECK(led.absorbed_mwh == 0.0);
  CHECK(led.spot_charged_mwh == 0.0);
}

TEST_CASE("flat prices keep the persistence baseline idle") {
  SystemConfig cfg;
  Trace tr = synth_trace(1, 12);
  for (auto& tick : tr.ticks) tick.spot_price = 50.0;
  BaselineOptions opts;
  opts.method = ForecastMethod::Persistence;
  EpisodeLedger led = rolling_run(tr, cfg, opts);
  CHECK(led.bess_revenue == 0.0);
  CHECK(led.spot_charged_mwh == 0.0);
  CHECK(led.absorbed_mwh == 0.0);
  for (const StepLedger& s : led.steps) CHECK(s.energy_delta_mwh == 0.0);
}

TEST_CASE("receding-horizon run validates its inputs") {
  SystemConfig cfg;
  Trace empty;
  BaselineOptions opts;
  CHECK_THROWS_AS(rolling_run(empty, cfg, opts), DataError);

  Trace tr = synth_trace(1, 3);
  opts.horizon = 0;
  CHECK_THROWS_AS(rolling_run(tr, cfg, opts), ConfigError);
}
