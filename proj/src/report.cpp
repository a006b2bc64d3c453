#include "windbess/report.hpp"

#include <cinttypes>
#include <cstdio>
#include <ostream>

namespace windbess {

namespace {

std::string money(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string mwh(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string compact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string hash_hex(std::uint64_t h) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

void row(std::ostream& os, const std::string& name,
         std::span<const ReportEntry> entries,
         std::string (*fmt)(double), double EpisodeLedger::*field) {
  char head[64];
  std::snprintf(head, sizeof head, "%-26s", name.c_str());
  os << head;
  for (const auto& e : entries) {
    char cell[64];
    std::snprintf(cell, sizeof cell, " %18s", fmt(e.ledger.*field).c_str());
    os << cell;
  }
  os << '\n';
}

const char* bucket_name(int i) {
  static const char* names[4] = {"<=Q1", "Q1-Q2", "Q2-Q3", ">Q3"};
  return names[i];
}

const char* group_name(GroupBy g) {
  return g == GroupBy::SpotPrice ? "spot_price" : "curtail_freq";
}

}  // namespace

void write_summary_text(std::ostream& os, const std::string& title,
                        std::uint64_t trace_hash,
                        std::span<const ReportEntry> entries) {
  os << title << '\n';
  os << "trace " << hash_hex(trace_hash) << '\n';
  char head[64];
  std::snprintf(head, sizeof head, "%-26s", "");
  os << head;
  for (const auto& e : entries) {
    char cell[64];
    std::snprintf(cell, sizeof cell, " %18s", e.label.c_str());
    os << cell;
  }
  os << '\n';
  row(os, "wind revenue (AU$)", entries, money, &EpisodeLedger::wind_revenue);
  row(os, "bess revenue (AU$)", entries, money, &EpisodeLedger::bess_revenue);
  row(os, "degradation cost (AU$)", entries, money,
      &EpisodeLedger::degradation_cost);
  row(os, "total revenue (AU$)", entries, money, &EpisodeLedger::total);
  row(os, "curtailed (MWh)", entries, mwh, &EpisodeLedger::curtailed_mwh);
  row(os, "absorbed (MWh)", entries, mwh, &EpisodeLedger::absorbed_mwh);
  row(os, "spot charged (MWh)", entries, mwh,
      &EpisodeLedger::spot_charged_mwh);
}

nlohmann::ordered_json summary_json(const std::string& title,
                                    std::uint64_t trace_hash,
                                    std::span<const ReportEntry> entries) {
  nlohmann::ordered_json out;
  out["title"] = title;
  out["trace"] = hash_hex(trace_hash);
  out["methods"] = nlohmann::ordered_json::array();
  for (const auto& e : entries) {
    nlohmann::ordered_json m;
    m["label"] = e.label;
    m["wind_revenue_aud"] = e.ledger.wind_revenue;
    m["bess_revenue_aud"] = e.ledger.bess_revenue;
    m["degradation_cost_aud"] = e.ledger.degradation_cost;
    m["total_revenue_aud"] = e.ledger.total;
    m["curtailed_mwh"] = e.ledger.curtailed_mwh;
    m["absorbed_mwh"] = e.ledger.absorbed_mwh;
    m["spot_charged_mwh"] = e.ledger.spot_charged_mwh;
    out["methods"].push_back(std::move(m));
  }
  return out;
}

void write_quartile_text(std::ostream& os, const std::string& heading,
                         const QuartileReport& report) {
  os << heading << '\n';
  os << "grouped by " << group_name(report.group_by) << ", edges "
     << compact(report.edges[0]) << " / " << compact(report.edges[1]) << " / "
     << compact(report.edges[2]) << '\n';
  char line[160];
  std::snprintf(line, sizeof line, "%-8s %8s %16s %16s\n", "bucket", "steps",
                "curtail share", "spot share");
  os << line;
  for (int i = 0; i < 4; ++i) {
    std::snprintf(line, sizeof line, "%-8s %8d %16.4f %16.4f\n",
                  bucket_name(i), report.counts[i], report.curtail_share[i],
                  report.spot_share[i]);
    os << line;
  }
}

nlohmann::ordered_json quartile_json(const QuartileReport& report) {
  nlohmann::ordered_json out;
  out["group_by"] = group_name(report.group_by);
  out["edges"] = report.edges;
  out["buckets"] = nlohmann::ordered_json::array();
  for (int i = 0; i < 4; ++i) {
    nlohmann::ordered_json b;
    b["bucket"] = bucket_name(i);
    b["steps"] = report.counts[i];
    b["curtail_share"] = report.curtail_share[i];
    b["spot_share"] = report.spot_share[i];
    out["buckets"].push_back(std::move(b));
  }
  return out;
}

void write_curves_csv(std::ostream& os, std::span<const ReportEntry> entries) {
  os << "series,step,value\n";
  for (const auto& e : entries) {
    double cum = 0.0;
    long step = 0;
    for (const StepLedger& s : e.ledger.steps) {
      cum += s.wind_revenue + s.bess_revenue - s.degradation_cost;
      os << e.label << "_cumulative_revenue," << step << ',' << compact(cum)
         << '\n';
      ++step;
    }
  }
}

void write_training_log_csv(std::ostream& os,
                            std::span<const EpisodeLog> logs) {
  os << "episode,wind_return,bess_return,wind_critic_loss,bess_critic_loss,"
        "updates\n";
  for (const EpisodeLog& l : logs) {
    os << l.episode << ',' << compact(l.wind_return) << ','
       << compact(l.bess_return) << ',' << compact(l.wind_critic_loss) << ','
       << compact(l.bess_critic_loss) << ',' << l.updates << '\n';
  }
}

void write_timing_text(std::ostream& os, const std::string& label,
                       long decisions, double decision_seconds,
                       double wall_seconds) {
  const double per_decision_us =
      decisions > 0 ? decision_seconds / static_cast<double>(decisions) * 1e6
                    : 0.0;
  char line[160];
  std::snprintf(line, sizeof line, "%s: %ld decisions in %.6f s\n",
                label.c_str(), decisions, decision_seconds);
  os << line;
  std::snprintf(line, sizeof line, "%s: per-decision latency %.3f us\n",
                label.c_str(), per_decision_us);
  os << line;
  std::snprintf(line, sizeof line, "%s: wall clock %.3f s\n", label.c_str(),
                wall_seconds);
  os << line;
}

}  // namespace windbess
