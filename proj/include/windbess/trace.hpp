#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "windbess/config.hpp"
#include "windbess/market.hpp"

namespace windbess {

// An immutable price/wind series on a constant dispatch-interval grid.
struct Trace {
  std::vector<MarketTick> ticks;
  double dt_hours = 1.0 / 12.0;
  std::string source;

  std::size_t size() const { return ticks.size(); }
};

// Per-feature normalization statistics, fitted on the training split only
// and frozen afterwards.
struct NormStats {
  double price_mean = 0.0;
  double price_std = 1.0;
  double wind_mean = 0.0;
  double wind_std = 1.0;

  // Population mean/std over the trace. Throws DataError when a feature is
  // degenerate (zero spread), since it could not be normalized.
  static NormStats compute(const Trace& trace);

  double norm_price(double p) const { return (p - price_mean) / price_std; }
  double norm_wind(double w) const { return (w - wind_mean) / wind_std; }
};

// Reads "timestamp,spot_price_aud_mwh,wind_actual_mw" rows. Timestamps are
// either integer interval indices or ISO-8601 datetimes; they must be
// strictly increasing. Rows with empty or non-finite fields are rejected
// with a warning naming the row. Wind above cfg.p_max_wind is clipped with
// a warning. Throws DataError on missing/incorrect header, unparseable
// timestamps, or non-monotone timestamps.
Trace load_csv(const std::filesystem::path& path, const SystemConfig& cfg);

// Writes the same CSV schema with integer interval indices as timestamps.
// Values round-trip exactly through load_csv.
void write_csv(const Trace& trace, const std::filesystem::path& path);

// Chronological split at round(size * train_fraction). Throws ConfigError
// for fractions outside (0, 1) and DataError when either side is shorter
// than one episode.
std::pair<Trace, Trace> split_trace(const Trace& trace, double train_fraction,
                                    int episode_len = 288);

// Generator knobs for synthetic traces. Prices follow a diurnal sinusoid
// plus AR(1) noise with occasional spikes (some negative); wind follows a
// bounded AR(1) with occasional upward surges that create curtailable
// surplus against any trailing forecast.
struct SynthProfile {
  double price_mean = 60.0;       // AU$/MWh
  double price_amplitude = 35.0;  // diurnal swing around the mean
  double price_noise_std = 6.0;   // AR(1) innovation std
  double price_ar = 0.9;
  double spike_prob = 0.004;      // per-interval spike probability
  double spike_min = 120.0;       // spike magnitude range, AU$/MWh
  double spike_max = 400.0;
  double spike_negative_frac = 0.25;  // fraction of spikes that dip negative
  double wind_mean = 30.0;        // MW
  double wind_ar = 0.97;
  double wind_noise_std = 3.0;
  double surge_prob = 0.01;       // chance an upward surge starts
  double surge_boost = 25.0;      // MW added at surge onset
  double surge_decay = 0.85;      // per-interval decay of the surge
  double wind_cap = 67.0;         // MW, hard clip
  int intervals_per_day = 288;
};

// Deterministic under (days, seed, profile).
Trace synth_trace(int days, std::uint64_t seed, const SynthProfile& profile = {});

// FNV-1a over the tick contents; used to label reports.
std::uint64_t trace_hash(const Trace& trace);

}  // namespace windbess
