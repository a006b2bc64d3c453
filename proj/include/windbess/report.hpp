#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>

#include "json.hpp"
#include "windbess/metrics.hpp"
#include "windbess/trainer.hpp"

namespace windbess {

// One labeled method column in a side-by-side report.
struct ReportEntry {
  std::string label;
  EpisodeLedger ledger;
};

// Revenue and curtailment summary: one row per quantity, one column per
// method, plus the hash of the tick sequence every method consumed. All
// content is a pure function of the inputs.
void write_summary_text(std::ostream& os, const std::string& title,
                        std::uint64_t trace_hash,
                        std::span<const ReportEntry> entries);

nlohmann::ordered_json summary_json(const std::string& title,
                                    std::uint64_t trace_hash,
                                    std::span<const ReportEntry> entries);

// Charging-source mix per quartile bucket of the grouping variable.
void write_quartile_text(std::ostream& os, const std::string& heading,
                         const QuartileReport& report);

nlohmann::ordered_json quartile_json(const QuartileReport& report);

// Plot-ready long format: header series,step,value; one cumulative-revenue
// series per entry, one row per interval.
void write_curves_csv(std::ostream& os, std::span<const ReportEntry> entries);

// Per-episode training curve, one record per episode.
void write_training_log_csv(std::ostream& os,
                            std::span<const EpisodeLog> logs);

// Wall-clock figures. Kept out of the deterministic report set because they
// vary run to run.
void write_timing_text(std::ostream& os, const std::string& label,
                       long decisions, double decision_seconds,
                       double wall_seconds);

}  // namespace windbess
