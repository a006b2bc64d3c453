#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "windbess/runconfig.hpp"

namespace windbess {

// Command-line values layered on top of the config file.
struct CliOverrides {
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> episodes;
};

// File config (or defaults when no file is given) with flag overrides
// applied, validated.
RunConfig effective_config(const CliOverrides& overrides);

// Fixed output layout under cfg.out_dir: checkpoints/, reports/, logs/ and
// config.echo. Every writer below creates what it needs.

// Generates the configured synthetic trace and writes it as CSV. Returns
// the CSV path. Rejects configs whose data source is a CSV file.
std::filesystem::path run_synth(const RunConfig& rc);

// Trains both agents on the training split and writes the checkpoint plus
// the per-episode training log. Returns the checkpoint path.
std::filesystem::path run_train(const RunConfig& rc);

// Deterministic policy rollout on the training and evaluation splits, one
// labeled report set per split. Wall-clock figures go to a separate timing
// file so reports stay byte-reproducible.
void run_evaluate(const RunConfig& rc,
                  const std::filesystem::path& checkpoint);

// Learned policies and the predict-and-optimize baseline on the identical
// evaluation split, reported side by side.
void run_compare(const RunConfig& rc, const std::filesystem::path& checkpoint);

}  // namespace windbess
