#include "windbess/commands.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <vector>

#include "windbess/baseline.hpp"
#include "windbess/errors.hpp"
#include "windbess/report.hpp"

namespace windbess {

namespace fs = std::filesystem;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::ofstream open_out(const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

void write_echo(const RunConfig& rc) {
  auto os = open_out(fs::path(rc.out_dir) / "config.echo");
  rc.echo(os);
}

Trace acquire_trace(const RunConfig& rc) {
  if (!rc.csv_path.empty()) return load_csv(rc.csv_path, rc.system);
  return synth_trace(rc.synth_days, rc.seed, rc.synth);
}

// Quartile sections degrade to a note when the rollout barely charged.
void append_quartiles(std::ostream& text, nlohmann::ordered_json& json,
                      const std::vector<StepLedger>& steps) {
  for (const GroupBy group : {GroupBy::SpotPrice, GroupBy::CurtailFreq}) {
    const char* key =
        group == GroupBy::SpotPrice ? "quartiles_spot_price"
                                    : "quartiles_curtail_freq";
    const std::string heading =
        group == GroupBy::SpotPrice
            ? "charging source by spot-price quartile"
            : "charging source by curtailment-frequency quartile";
    try {
      const QuartileReport q = quartile_analysis(steps, group);
      text << '\n';
      write_quartile_text(text, heading, q);
      json[key] = quartile_json(q);
    } catch (const DataError& e) {
      text << '\n' << heading << '\n' << e.what() << '\n';
      json[key] = e.what();
    }
  }
}

void write_eval_reports(const RunConfig& rc, const std::string& label,
                        const Trace& slice, const EvalResult& result,
                        double wall_seconds) {
  const fs::path reports = fs::path(rc.out_dir) / "reports";
  const std::uint64_t hash = trace_hash(slice);
  const std::string title = "policy evaluation (" + label + " split)";
  const ReportEntry entry{"drl", result.ledger};

  auto text = open_out(reports / ("evaluation_" + label + ".txt"));
  write_summary_text(text, title, hash, {&entry, 1});
  nlohmann::ordered_json json = summary_json(title, hash, {&entry, 1});
  append_quartiles(text, json, result.ledger.steps);
  json["wind_return"] = result.wind_return;
  json["bess_return"] = result.bess_return;

  auto js = open_out(reports / ("evaluation_" + label + ".json"));
  js << json.dump(2) << '\n';

  auto curves = open_out(reports / ("curves_" + label + ".csv"));
  write_curves_csv(curves, {&entry, 1});

  auto timing = open_out(reports / ("timing_" + label + ".txt"));
  write_timing_text(timing, "drl_" + label, result.decisions,
                    result.decision_seconds, wall_seconds);
  write_timing_text(std::cout, "drl_" + label, result.decisions,
                    result.decision_seconds, wall_seconds);
}

}  // namespace

RunConfig effective_config(const CliOverrides& overrides) {
  RunConfig rc;
  if (overrides.config_path) rc = RunConfig::load(*overrides.config_path);
  if (overrides.seed) rc.seed = *overrides.seed;
  if (overrides.out_dir) rc.out_dir = *overrides.out_dir;
  if (overrides.episodes) rc.episodes = *overrides.episodes;
  rc.validate();
  return rc;
}

fs::path run_synth(const RunConfig& rc) {
  if (!rc.csv_path.empty())
    throw ConfigError(
        "synth requires a synthetic data source, but [data] csv is set");
  const Trace trace = synth_trace(rc.synth_days, rc.seed, rc.synth);
  const fs::path csv = fs::path(rc.out_dir) / "synth_trace.csv";
  fs::create_directories(csv.parent_path());
  write_csv(trace, csv);
  write_echo(rc);
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(trace_hash(trace)));
  std::cout << "wrote " << csv.string() << " (" << trace.size()
            << " intervals, trace " << hash << ")\n";
  return csv;
}

fs::path run_train(const RunConfig& rc) {
  const Trace full = acquire_trace(rc);
  auto [train_split, eval_split] = split_trace(full, rc.split_fraction);
  (void)eval_split;

  JointTrainer trainer(std::move(train_split), rc.system, rc.hyper,
                       rc.coupling, rc.seed);
  const int episodes =
      rc.episodes < 0 ? trainer.max_episodes() : rc.episodes;
  const auto t0 = clock_type::now();
  const std::vector<EpisodeLog> logs = trainer.run(episodes);
  const double wall = seconds_since(t0);

  const fs::path ckpt = fs::path(rc.out_dir) / "checkpoints" / "agents.ckpt";
  {
    auto os = open_out(ckpt);
    save_checkpoint(os, trainer);
  }
  {
    auto os = open_out(fs::path(rc.out_dir) / "logs" / "training_log.csv");
    write_training_log_csv(os, logs);
  }
  write_echo(rc);

  std::cout << "trained " << episodes << " episodes ("
            << trainer.total_steps() << " steps) in " << wall << " s\n";
  if (!logs.empty())
    std::cout << "last episode returns: wind " << logs.back().wind_return
              << ", bess " << logs.back().bess_return << '\n';
  std::cout << "wrote " << ckpt.string() << '\n';
  return ckpt;
}

void run_evaluate(const RunConfig& rc, const fs::path& checkpoint) {
  std::ifstream is(checkpoint);
  if (!is) throw DataError("cannot open checkpoint: " + checkpoint.string());
  const Checkpoint ckpt = load_checkpoint(is);

  const Trace full = acquire_trace(rc);
  const auto [train_split, eval_split] = split_trace(full, rc.split_fraction);

  const struct {
    const char* label;
    const Trace& slice;
  } splits[] = {{"train", train_split}, {"eval", eval_split}};
  for (const auto& s : splits) {
    const auto t0 = clock_type::now();
    const EvalResult result =
        evaluate_policies(s.slice, rc.system, ckpt.wind, ckpt.bess,
                          ckpt.stats, ckpt.coupling);
    write_eval_reports(rc, s.label, s.slice, result, seconds_since(t0));
  }
  write_echo(rc);
}

void run_compare(const RunConfig& rc, const fs::path& checkpoint) {
  std::ifstream is(checkpoint);
  if (!is) throw DataError("cannot open checkpoint: " + checkpoint.string());
  const Checkpoint ckpt = load_checkpoint(is);

  const Trace full = acquire_trace(rc);
  const auto [train_split, eval_split] = split_trace(full, rc.split_fraction);
  (void)train_split;

  const auto t_drl = clock_type::now();
  const EvalResult drl =
      evaluate_policies(eval_split, rc.system, ckpt.wind, ckpt.bess,
                        ckpt.stats, ckpt.coupling);
  const double drl_wall = seconds_since(t_drl);

  const auto t_po = clock_type::now();
  const EpisodeLedger po = rolling_run(eval_split, rc.system, rc.baseline);
  const double po_wall = seconds_since(t_po);

  const std::string po_label =
      std::string("po_") + forecast_method_name(rc.baseline.method);
  const std::vector<ReportEntry> entries = {{"drl", drl.ledger},
                                            {po_label, po}};
  const std::uint64_t hash = trace_hash(eval_split);
  const std::string title = "side-by-side evaluation (eval split)";
  const fs::path reports = fs::path(rc.out_dir) / "reports";

  {
    auto text = open_out(reports / "compare.txt");
    write_summary_text(text, title, hash, entries);
  }
  {
    auto js = open_out(reports / "compare.json");
    js << summary_json(title, hash, entries).dump(2) << '\n';
  }
  {
    auto curves = open_out(reports / "curves_compare.csv");
    write_curves_csv(curves, entries);
  }
  {
    auto timing = open_out(reports / "timing_compare.txt");
    write_timing_text(timing, "drl", drl.decisions, drl.decision_seconds,
                      drl_wall);
    write_timing_text(timing, po_label,
                      static_cast<long>(eval_split.size()), po_wall, po_wall);
  }
  write_timing_text(std::cout, "drl", drl.decisions, drl.decision_seconds,
                    drl_wall);
  write_timing_text(std::cout, po_label, static_cast<long>(eval_split.size()),
                    po_wall, po_wall);
  write_echo(rc);
}

}  // namespace windbess
