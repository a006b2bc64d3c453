#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "windbess/baseline.hpp"
#include "windbess/config.hpp"
#include "windbess/td3.hpp"
#include "windbess/trace.hpp"
#include "windbess/trainer.hpp"

namespace windbess {

// Every knob of a run, read from one key-value file with [section] headers
// (a TOML subset: strings, numbers, booleans, flat number arrays, comments).
// Unknown sections or keys are rejected. The echoed effective config parses
// back to an identical instance.
struct RunConfig {
  SystemConfig system;
  Td3Hyper hyper;

  // data source: a CSV path, or the synthetic generator when the path is
  // empty
  std::string csv_path;
  SynthProfile synth;
  int synth_days = 33;

  double split_fraction = 11.0 / 12.0;
  std::uint64_t seed = 1;
  int episodes = -1;  // -1 trains on every full day of the training split
  WindCoupling coupling = WindCoupling::Policy;
  std::string out_dir = "out";
  BaselineOptions baseline;

  static RunConfig load(const std::filesystem::path& path);
  static RunConfig parse(std::istream& is, const std::string& name);

  // Writes the complete effective config, defaults included.
  void echo(std::ostream& os) const;

  void validate() const;  // throws ConfigError listing all violations
};

const char* forecast_method_name(ForecastMethod method);
ForecastMethod parse_forecast_method(const std::string& name);

}  // namespace windbess
