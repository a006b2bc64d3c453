#include "windbess/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "windbess/errors.hpp"

namespace windbess {

namespace {

constexpr const char* kCsvHeader = "timestamp,spot_price_aud_mwh,wind_actual_mw";

std::string strip_cr(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == '\n')) s.pop_back();
  return s;
}

// Days since 1970-01-01 for a proleptic Gregorian date.
long long days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const long long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long long>(doe) - 719468;
}

// Accepts "YYYY-MM-DD[T ]HH:MM[:SS]"; returns epoch seconds.
bool parse_iso8601(const std::string& s, long long& out) {
  int y, mo, d, h, mi, sec = 0;
  char sep;
  int n = std::sscanf(s.c_str(), "%d-%d-%d%c%d:%d:%d", &y, &mo, &d, &sep, &h,
                      &mi, &sec);
  if (n < 6 || (sep != 'T' && sep != ' ')) return false;
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 ||
      mi > 59 || sec < 0 || sec > 60)
    return false;
  out = days_from_civil(y, mo, d) * 86400LL + h * 3600LL + mi * 60LL + sec;
  return true;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc() && res.ptr == end && std::isfinite(out);
}

bool parse_int(const std::string& s, long long& out) {
  if (s.empty()) return false;
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc() && res.ptr == end;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

Trace load_csv(const std::filesystem::path& path, const SystemConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != kCsvHeader)
    throw DataError(path.string() + ": expected header '" + kCsvHeader + "'");

  Trace trace;
  trace.dt_hours = cfg.dt_hours;
  trace.source = path.string();

  bool have_prev = false;
  long long prev_key = 0;
  enum class Style { Unset, Index, Iso } style = Style::Unset;
  long long iso_step = 0;
  int clipped = 0;
  std::size_t row = 1;  // header was row 1

  while (std::getline(in, line)) {
    ++row;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 3)
      throw DataError(path.string() + ": row " + std::to_string(row) +
                      ": expected 3 fields, got " +
                      std::to_string(fields.size()));

    long long key;
    Style row_style;
    if (parse_int(fields[0], key)) {
      row_style = Style::Index;
    } else if (parse_iso8601(fields[0], key)) {
      row_style = Style::Iso;
    } else {
      throw DataError(path.string() + ": row " + std::to_string(row) +
                      ": unparseable timestamp '" + fields[0] + "'");
    }
    if (style == Style::Unset) style = row_style;
    if (style != row_style)
      throw DataError(path.string() + ": row " + std::to_string(row) +
                      ": mixed timestamp styles");

    if (have_prev && key <= prev_key)
      throw DataError(path.string() + ": row " + std::to_string(row) +
                      ": timestamps must be strictly increasing");

    double price, wind;
    if (!parse_double(fields[1], price) || !parse_double(fields[2], wind)) {
      std::cerr << "load_csv: " << path.string() << ": row " << row
                << " rejected (empty or non-finite value)\n";
      // A rejected row must not break monotonicity for its neighbours.
      have_prev = true;
      prev_key = key;
      continue;
    }
    if (wind > cfg.p_max_wind) {
      wind = cfg.p_max_wind;
      ++clipped;
    }
    if (wind < 0) wind = 0;

    if (style == Style::Iso && have_prev && iso_step == 0)
      iso_step = key - prev_key;
    have_prev = true;
    prev_key = key;

    MarketTick tick;
    tick.t_index = static_cast<std::int64_t>(trace.ticks.size());
    tick.spot_price = price;
    tick.wind_actual = wind;
    trace.ticks.push_back(tick);
  }

  if (clipped > 0)
    std::cerr << "load_csv: " << path.string() << ": clipped " << clipped
              << " wind values above " << cfg.p_max_wind << " MW\n";
  if (style == Style::Iso && iso_step > 0) trace.dt_hours = iso_step / 3600.0;
  if (trace.ticks.empty())
    throw DataError(path.string() + ": no usable rows");
  return trace;
}

void write_csv(const Trace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << kCsvHeader << "\n";
  char buf[64];
  for (const MarketTick& t : trace.ticks) {
    out << t.t_index << ",";
    std::snprintf(buf, sizeof buf, "%.17g", t.spot_price);
    out << buf << ",";
    std::snprintf(buf, sizeof buf, "%.17g", t.wind_actual);
    out << buf << "\n";
  }
  if (!out) throw DataError("short write to " + path.string());
}

std::pair<Trace, Trace> split_trace(const Trace& trace, double train_fraction,
                                    int episode_len) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw ConfigError("train_fraction must lie in (0, 1)");
  const auto n = static_cast<long long>(trace.size());
  const auto cut = std::llround(n * train_fraction);
  if (cut < episode_len || n - cut < episode_len)
    throw DataError("trace too short to hold one full episode on each side "
                    "of the split");
  Trace train{{trace.ticks.begin(), trace.ticks.begin() + cut},
              trace.dt_hours,
              trace.source + "[train]"};
  Trace eval{{trace.ticks.begin() + cut, trace.ticks.end()},
             trace.dt_hours,
             trace.source + "[eval]"};
  return {std::move(train), std::move(eval)};
}

NormStats NormStats::compute(const Trace& trace) {
  if (trace.size() == 0) throw DataError("cannot normalize an empty trace");
  double ps = 0, ws = 0;
  for (const MarketTick& t : trace.ticks) {
    ps += t.spot_price;
    ws += t.wind_actual;
  }
  const double n = static_cast<double>(trace.size());
  NormStats s;
  s.price_mean = ps / n;
  s.wind_mean = ws / n;
  double pv = 0, wv = 0;
  for (const MarketTick& t : trace.ticks) {
    pv += (t.spot_price - s.price_mean) * (t.spot_price - s.price_mean);
    wv += (t.wind_actual - s.wind_mean) * (t.wind_actual - s.wind_mean);
  }
  s.price_std = std::sqrt(pv / n);
  s.wind_std = std::sqrt(wv / n);
  if (!(s.price_std > 0) || !(s.wind_std > 0))
    throw DataError("degenerate feature: zero spread in price or wind");
  return s;
}

Trace synth_trace(int days, std::uint64_t seed, const SynthProfile& profile) {
  if (days <= 0) throw ConfigError("synth_trace: days must be > 0");
  if (profile.intervals_per_day <= 0)
    throw ConfigError("synth_trace: intervals_per_day must be > 0");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Trace trace;
  trace.source = "synth(days=" + std::to_string(days) +
                 ",seed=" + std::to_string(seed) + ")";
  const int n = days * profile.intervals_per_day;
  trace.ticks.reserve(n);

  const double two_pi = 6.283185307179586476925286766559;
  double price_noise = 0.0;
  double wind_dev = 0.0;
  double surge = 0.0;

  for (int t = 0; t < n; ++t) {
    const double phase =
        two_pi * (t % profile.intervals_per_day) / profile.intervals_per_day;
    if (profile.price_noise_std > 0)
      price_noise = profile.price_ar * price_noise +
                    profile.price_noise_std * gauss(rng);
    double price =
        profile.price_mean + profile.price_amplitude * std::sin(phase) +
        price_noise;
    if (profile.spike_prob > 0 && unit(rng) < profile.spike_prob) {
      const double magnitude =
          profile.spike_min + (profile.spike_max - profile.spike_min) * unit(rng);
      price += unit(rng) < profile.spike_negative_frac ? -magnitude : magnitude;
    }

    if (profile.wind_noise_std > 0)
      wind_dev =
          profile.wind_ar * wind_dev + profile.wind_noise_std * gauss(rng);
    if (profile.surge_prob > 0) {
      surge *= profile.surge_decay;
      if (unit(rng) < profile.surge_prob) surge += profile.surge_boost;
    }
    const double wind =
        std::clamp(profile.wind_mean + wind_dev + surge, 0.0, profile.wind_cap);

    trace.ticks.push_back({t, price, wind});
  }
  return trace;
}

std::uint64_t trace_hash(const Trace& trace) {
  std::uint64_t h = 1469598103934665603ull;  // FNV offset basis
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xffu;
      h *= 1099511628211ull;  // FNV prime
    }
  };
  auto bits = [](double d) {
    std::uint64_t u;
    static_assert(sizeof u == sizeof d);
    std::memcpy(&u, &d, sizeof u);
    return u;
  };
  mix(trace.ticks.size());
  for (const MarketTick& t : trace.ticks) {
    mix(static_cast<std::uint64_t>(t.t_index));
    mix(bits(t.spot_price));
    mix(bits(t.wind_actual));
  }
  return h;
}

}  // namespace windbess
