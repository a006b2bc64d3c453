#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "windbess/commands.hpp"
#include "windbess/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Joint wind-farm + battery bidding laboratory for a 5-minute "
               "spot market"};
  app.require_subcommand(1);

  std::string config_path, out_dir, checkpoint;
  std::uint64_t seed = 0;
  int episodes = 0;

  CLI::App* synth =
      app.add_subcommand("synth", "write the configured synthetic trace");
  CLI::App* train =
      app.add_subcommand("train", "train both agents on the training split");
  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "noise-free rollout of a checkpoint on both splits");
  CLI::App* compare = app.add_subcommand(
      "compare", "learned policies vs the predict-and-optimize baseline");

  for (CLI::App* cmd : {synth, train, evaluate, compare}) {
    cmd->add_option("--config", config_path,
                    "run-config file; defaults apply when omitted");
    cmd->add_option("--seed", seed, "override the config seed");
    cmd->add_option("--out", out_dir, "override the output directory");
  }
  train->add_option("--episodes", episodes,
                    "episode count; -1 trains on every full day");
  for (CLI::App* cmd : {evaluate, compare})
    cmd->add_option("--checkpoint", checkpoint,
                    "checkpoint file (default <out>/checkpoints/agents.ckpt)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    CLI::App* cmd = app.get_subcommands().front();
    windbess::CliOverrides over;
    if (cmd->count("--config")) over.config_path = config_path;
    if (cmd->count("--seed")) over.seed = seed;
    if (cmd->count("--out")) over.out_dir = out_dir;
    if (cmd == train && cmd->count("--episodes")) over.episodes = episodes;
    const windbess::RunConfig rc = windbess::effective_config(over);

    if (cmd == synth) {
      windbess::run_synth(rc);
    } else if (cmd == train) {
      windbess::run_train(rc);
    } else {
      const std::filesystem::path ckpt =
          cmd->count("--checkpoint")
              ? std::filesystem::path(checkpoint)
              : std::filesystem::path(rc.out_dir) / "checkpoints" /
                    "agents.ckpt";
      if (cmd == evaluate)
        windbess::run_evaluate(rc, ckpt);
      else
        windbess::run_compare(rc, ckpt);
    }
    return 0;
  } catch (const windbess::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const windbess::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
