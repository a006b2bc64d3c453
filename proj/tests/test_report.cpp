#include <sstream>
#include <vector>

#include "doctest.h"
#include "windbess/report.hpp"

using namespace windbess;

namespace {

EpisodeLedger sample_ledger(double scale) {
  std::vector<StepLedger> steps;
  for (int i = 0; i < 3; ++i) {
    StepLedger s;
    s.wind_revenue = scale * (i + 1);
    s.bess_revenue = scale * 0.5;
    s.degradation_cost = scale * 0.1;
    s.wind_curtailed_mw = 6.0;
    s.absorbed_curtailment_mwh = 0.25;
    s.spot_charged_mwh = 0.5;
    s.spot_price = 40.0 + 10.0 * i;
    steps.push_back(s);
  }
  return summarize(std::move(steps), 1.0 / 12.0);
}

}  // namespace

TEST_CASE("summary text lists every quantity for every method") {
  std::vector<ReportEntry> entries;
  entries.push_back({"drl", sample_ledger(10.0)});
  entries.push_back({"po_persistence", sample_ledger(8.0)});

  std::ostringstream os;
  write_summary_text(os, "evaluation summary", 0xabcdef0123456789ull, entries);
  const std::string text = os.str();

  CHECK(text.find("evaluation summary") != std::string::npos);
  CHECK(text.find("trace abcdef0123456789") != std::string::npos);
  CHECK(text.find("drl") != std::string::npos);
  CHECK(text.find("po_persistence") != std::string::npos);
  CHECK(text.find("wind revenue (AU$)") != std::string::npos);
  CHECK(text.find("bess revenue (AU$)") != std::string::npos);
  CHECK(text.find("degradation cost (AU$)") != std::string::npos);
  CHECK(text.find("total revenue (AU$)") != std::string::npos);
  CHECK(text.find("curtailed (MWh)") != std::string::npos);
  CHECK(text.find("absorbed (MWh)") != std::string::npos);
  CHECK(text.find("spot charged (MWh)") != std::string::npos);

  std::ostringstream again;
  write_summary_text(again, "evaluation summary", 0xabcdef0123456789ull,
                     entries);
  CHECK(again.str() == text);
}

TEST_CASE("summary json carries the same figures machine-readably") {
  std::vector<ReportEntry> entries;
  entries.push_back({"drl", sample_ledger(10.0)});
  auto j = summary_json("eval", 15ull, entries);

  CHECK(j["title"] == "eval");
  CHECK(j["trace"] == "000000000000000f");
  REQUIRE(j["methods"].size() == 1);
  const auto& m = j["methods"][0];
  CHECK(m["label"] == "drl");
  CHECK(m["wind_revenue_aud"].get<double>() ==
        doctest::Approx(entries[0].ledger.wind_revenue));
  CHECK(m["total_revenue_aud"].get<double>() ==
        doctest::Approx(entries[0].ledger.total));
  CHECK(m["curtailed_mwh"].get<double>() ==
        doctest::Approx(entries[0].ledger.curtailed_mwh));
}

TEST_CASE("quartile report renders buckets in both formats") {
  QuartileReport rep;
  rep.group_by = GroupBy::SpotPrice;
  rep.edges = {30.0, 45.0, 60.0};
  rep.curtail_share = {1.0, 0.5, 0.25, 0.0};
  rep.spot_share = {0.0, 0.5, 0.75, 1.0};
  rep.counts = {2, 2, 2, 2};

  std::ostringstream os;
  write_quartile_text(os, "charging mix", rep);
  const std::string text = os.str();
  CHECK(text.find("charging mix") != std::string::npos);
  CHECK(text.find("spot_price") != std::string::npos);
  CHECK(text.find("<=Q1") != std::string::npos);
  CHECK(text.find(">Q3") != std::string::npos);
  CHECK(text.find("30") != std::string::npos);

  auto j = quartile_json(rep);
  CHECK(j["group_by"] == "spot_price");
  REQUIRE(j["buckets"].size() == 4);
  CHECK(j["buckets"][0]["curtail_share"].get<double>() == doctest::Approx(1.0));
  CHECK(j["buckets"][3]["spot_share"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("curve csv accumulates revenue stepwise per series") {
  std::vector<ReportEntry> entries;
  EpisodeLedger lg;
  StepLedger a;
  a.wind_revenue = 10.0;
  a.bess_revenue = 2.0;
  a.degradation_cost = 1.0;
  StepLedger b;
  b.wind_revenue = 5.0;
  lg.steps = {a, b};
  entries.push_back({"drl", lg});

  std::ostringstream os;
  write_curves_csv(os, entries);
  CHECK(os.str() ==
        "series,step,value\n"
        "drl_cumulative_revenue,0,11\n"
        "drl_cumulative_revenue,1,16\n");
}

TEST_CASE("training log csv has one record per episode") {
  std::vector<EpisodeLog> logs;
  logs.push_back({0, -120.5, 3.25, 0.5, 0.75, 7});
  logs.push_back({1, -80.0, 4.0, 0.4, 0.6, 257});

  std::ostringstream os;
  write_training_log_csv(os, logs);
  CHECK(os.str() ==
        "episode,wind_return,bess_return,wind_critic_loss,bess_critic_loss,"
        "updates\n"
        "0,-120.5,3.25,0.5,0.75,7\n"
        "1,-80,4,0.4,0.6,257\n");
}

TEST_CASE("timing text reports totals and per-decision latency") {
  std::ostringstream os;
  write_timing_text(os, "drl", 1000, 0.002, 1.5);
  const std::string text = os.str();
  CHECK(text.find("drl: 1000 decisions in 0.002000 s") != std::string::npos);
  CHECK(text.find("per-decision latency 2.000 us") != std::string::npos);
  CHECK(text.find("wall clock 1.500 s") != std::string::npos);
}
