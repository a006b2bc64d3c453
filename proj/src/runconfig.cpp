#include "windbess/runconfig.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "windbess/errors.hpp"

namespace windbess {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// Drops a trailing comment, honoring quoted strings.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

struct TomlValue {
  enum class Kind { Str, Num, Bool, NumArray } kind = Kind::Num;
  std::string str;                 // Str: content, Num/Bool: raw token
  std::vector<std::string> items;  // NumArray: raw tokens
};

bool numeric_token(const std::string& t) {
  if (t.empty()) return false;
  char* end = nullptr;
  std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size();
}

TomlValue parse_value(const std::string& raw, const std::string& where) {
  TomlValue v;
  if (raw.empty()) throw ConfigError(where + ": missing value");
  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"')
      throw ConfigError(where + ": unterminated string");
    v.kind = TomlValue::Kind::Str;
    v.str = raw.substr(1, raw.size() - 2);
    return v;
  }
  if (raw.front() == '[') {
    if (raw.back() != ']') throw ConfigError(where + ": unterminated array");
    v.kind = TomlValue::Kind::NumArray;
    std::string body = raw.substr(1, raw.size() - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) throw ConfigError(where + ": empty array element");
      if (!numeric_token(item))
        throw ConfigError(where + ": non-numeric array element '" + item +
                          "'");
      v.items.push_back(item);
    }
    return v;
  }
  if (raw == "true" || raw == "false") {
    v.kind = TomlValue::Kind::Bool;
    v.str = raw;
    return v;
  }
  if (!numeric_token(raw))
    throw ConfigError(where + ": cannot parse value '" + raw + "'");
  v.kind = TomlValue::Kind::Num;
  v.str = raw;
  return v;
}

double as_double(const TomlValue& v, const std::string& where) {
  if (v.kind != TomlValue::Kind::Num)
    throw ConfigError(where + ": expected a number");
  return std::strtod(v.str.c_str(), nullptr);
}

long long as_int(const TomlValue& v, const std::string& where) {
  if (v.kind != TomlValue::Kind::Num)
    throw ConfigError(where + ": expected an integer");
  try {
    std::size_t used = 0;
    const long long n = std::stoll(v.str, &used);
    if (used != v.str.size()) throw std::invalid_argument(v.str);
    return n;
  } catch (const std::exception&) {
    throw ConfigError(where + ": expected an integer, got '" + v.str + "'");
  }
}

std::uint64_t as_u64(const TomlValue& v, const std::string& where) {
  if (v.kind != TomlValue::Kind::Num || v.str.front() == '-')
    throw ConfigError(where + ": expected a non-negative integer");
  try {
    std::size_t used = 0;
    const std::uint64_t n = std::stoull(v.str, &used);
    if (used != v.str.size()) throw std::invalid_argument(v.str);
    return n;
  } catch (const std::exception&) {
    throw ConfigError(where + ": expected a non-negative integer, got '" +
                      v.str + "'");
  }
}

std::string as_str(const TomlValue& v, const std::string& where) {
  if (v.kind != TomlValue::Kind::Str)
    throw ConfigError(where + ": expected a quoted string");
  return v.str;
}

std::vector<int> as_int_array(const TomlValue& v, const std::string& where) {
  if (v.kind != TomlValue::Kind::NumArray)
    throw ConfigError(where + ": expected an array of integers");
  std::vector<int> out;
  for (const std::string& item : v.items)
    out.push_back(static_cast<int>(
        as_int(TomlValue{TomlValue::Kind::Num, item, {}}, where)));
  return out;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

const char* forecast_method_name(ForecastMethod method) {
  switch (method) {
    case ForecastMethod::Persistence: return "persistence";
    case ForecastMethod::EmaDrift: return "ema_drift";
    case ForecastMethod::Perfect: return "perfect";
  }
  return "persistence";
}

ForecastMethod parse_forecast_method(const std::string& name) {
  if (name == "persistence") return ForecastMethod::Persistence;
  if (name == "ema_drift") return ForecastMethod::EmaDrift;
  if (name == "perfect") return ForecastMethod::Perfect;
  throw ConfigError("unknown forecast method '" + name +
                    "' (expected persistence, ema_drift or perfect)");
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path.string());
  return parse(is, path.string());
}

RunConfig RunConfig::parse(std::istream& is, const std::string& name) {
  RunConfig rc;
  bool csv_set = false, synth_set = false;
  std::string section;
  std::string line;
  int lineno = 0;

  auto fail = [&](const std::string& msg) -> ConfigError {
    return ConfigError(name + ":" + std::to_string(lineno) + ": " + msg);
  };

  while (std::getline(is, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw fail("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "system" && section != "train" && section != "hyper" &&
          section != "data" && section != "data.synth" &&
          section != "baseline" && section != "output")
        throw fail("unknown section [" + section + "]");
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw fail("expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw fail("empty key");
    if (section.empty()) throw fail("key '" + key + "' outside any section");
    const std::string where = section + "." + key;
    const TomlValue val = parse_value(trim(line.substr(eq + 1)), where);

    if (section == "system") {
      SystemConfig& s = rc.system;
      if (key == "dt_hours") s.dt_hours = as_double(val, where);
      else if (key == "lambda_penalty") s.lambda_penalty = as_double(val, where);
      else if (key == "eta_ch") s.eta_ch = as_double(val, where);
      else if (key == "eta_dch") s.eta_dch = as_double(val, where);
      else if (key == "c_degradation") s.c_degradation = as_double(val, where);
      else if (key == "p_max_wind") s.p_max_wind = as_double(val, where);
      else if (key == "p_max_bess") s.p_max_bess = as_double(val, where);
      else if (key == "e_min") s.e_min = as_double(val, where);
      else if (key == "e_max") s.e_max = as_double(val, where);
      else if (key == "window_len")
        s.window_len = static_cast<int>(as_int(val, where));
      else if (key == "tau_ema") s.tau_ema = as_double(val, where);
      else if (key == "beta_incentive") s.beta_incentive = as_double(val, where);
      else if (key == "gamma_discount") s.gamma_discount = as_double(val, where);
      else if (key == "initial_energy") s.initial_energy = as_double(val, where);
      else throw fail("unknown key '" + where + "'");
    } else if (section == "train") {
      if (key == "seed") rc.seed = as_u64(val, where);
      else if (key == "episodes")
        rc.episodes = static_cast<int>(as_int(val, where));
      else if (key == "split_fraction")
        rc.split_fraction = as_double(val, where);
      else if (key == "coupling") rc.coupling = parse_coupling(as_str(val, where));
      else throw fail("unknown key '" + where + "'");
    } else if (section == "hyper") {
      Td3Hyper& h = rc.hyper;
      if (key == "polyak") h.polyak = as_double(val, where);
      else if (key == "policy_delay")
        h.policy_delay = static_cast<int>(as_int(val, where));
      else if (key == "target_noise_std")
        h.target_noise_std = as_double(val, where);
      else if (key == "target_noise_clip")
        h.target_noise_clip = as_double(val, where);
      else if (key == "exploration_noise_std")
        h.exploration_noise_std = as_double(val, where);
      else if (key == "batch_size")
        h.batch_size = static_cast<int>(as_int(val, where));
      else if (key == "buffer_capacity")
        h.buffer_capacity = static_cast<std::size_t>(as_u64(val, where));
      else if (key == "actor_lr") h.actor_lr = as_double(val, where);
      else if (key == "critic_lr") h.critic_lr = as_double(val, where);
      else if (key == "warmup_steps")
        h.warmup_steps = static_cast<long>(as_int(val, where));
      else if (key == "reward_scale") h.reward_scale = as_double(val, where);
      else if (key == "hidden") h.hidden = as_int_array(val, where);
      else throw fail("unknown key '" + where + "'");
    } else if (section == "data") {
      if (key == "csv") {
        rc.csv_path = as_str(val, where);
        csv_set = true;
      } else {
        throw fail("unknown key '" + where + "'");
      }
    } else if (section == "data.synth") {
      SynthProfile& p = rc.synth;
      synth_set = true;
      if (key == "days") rc.synth_days = static_cast<int>(as_int(val, where));
      else if (key == "price_mean") p.price_mean = as_double(val, where);
      else if (key == "price_amplitude")
        p.price_amplitude = as_double(val, where);
      else if (key == "price_noise_std")
        p.price_noise_std = as_double(val, where);
      else if (key == "price_ar") p.price_ar = as_double(val, where);
      else if (key == "spike_prob") p.spike_prob = as_double(val, where);
      else if (key == "spike_min") p.spike_min = as_double(val, where);
      else if (key == "spike_max") p.spike_max = as_double(val, where);
      else if (key == "spike_negative_frac")
        p.spike_negative_frac = as_double(val, where);
      else if (key == "wind_mean") p.wind_mean = as_double(val, where);
      else if (key == "wind_ar") p.wind_ar = as_double(val, where);
      else if (key == "wind_noise_std")
        p.wind_noise_std = as_double(val, where);
      else if (key == "surge_prob") p.surge_prob = as_double(val, where);
      else if (key == "surge_boost") p.surge_boost = as_double(val, where);
      else if (key == "surge_decay") p.surge_decay = as_double(val, where);
      else if (key == "wind_cap") p.wind_cap = as_double(val, where);
      else if (key == "intervals_per_day")
        p.intervals_per_day = static_cast<int>(as_int(val, where));
      else throw fail("unknown key '" + where + "'");
    } else if (section == "baseline") {
      BaselineOptions& b = rc.baseline;
      if (key == "horizon") b.horizon = static_cast<int>(as_int(val, where));
      else if (key == "soc_steps")
        b.soc_steps = static_cast<int>(as_int(val, where));
      else if (key == "method")
        b.method = parse_forecast_method(as_str(val, where));
      else if (key == "ema_tau") b.ema_tau = as_double(val, where);
      else throw fail("unknown key '" + where + "'");
    } else {  // output
      if (key == "dir") rc.out_dir = as_str(val, where);
      else throw fail("unknown key '" + where + "'");
    }
  }

  if (csv_set && synth_set)
    throw ConfigError(name +
                      ": [data] csv and [data.synth] are mutually exclusive");
  return rc;
}

void RunConfig::echo(std::ostream& os) const {
  os << "[system]\n";
  os << "dt_hours = " << fmt_double(system.dt_hours) << '\n';
  os << "lambda_penalty = " << fmt_double(system.lambda_penalty) << '\n';
  os << "eta_ch = " << fmt_double(system.eta_ch) << '\n';
  os << "eta_dch = " << fmt_double(system.eta_dch) << '\n';
  os << "c_degradation = " << fmt_double(system.c_degradation) << '\n';
  os << "p_max_wind = " << fmt_double(system.p_max_wind) << '\n';
  os << "p_max_bess = " << fmt_double(system.p_max_bess) << '\n';
  os << "e_min = " << fmt_double(system.e_min) << '\n';
  os << "e_max = " << fmt_double(system.e_max) << '\n';
  os << "window_len = " << system.window_len << '\n';
  os << "tau_ema = " << fmt_double(system.tau_ema) << '\n';
  os << "beta_incentive = " << fmt_double(system.beta_incentive) << '\n';
  os << "gamma_discount = " << fmt_double(system.gamma_discount) << '\n';
  if (system.initial_energy)
    os << "initial_energy = " << fmt_double(*system.initial_energy) << '\n';

  os << "\n[train]\n";
  os << "seed = " << seed << '\n';
  os << "episodes = " << episodes << '\n';
  os << "split_fraction = " << fmt_double(split_fraction) << '\n';
  os << "coupling = \"" << coupling_name(coupling) << "\"\n";

  os << "\n[hyper]\n";
  os << "polyak = " << fmt_double(hyper.polyak) << '\n';
  os << "policy_delay = " << hyper.policy_delay << '\n';
  os << "target_noise_std = " << fmt_double(hyper.target_noise_std) << '\n';
  os << "target_noise_clip = " << fmt_double(hyper.target_noise_clip) << '\n';
  os << "exploration_noise_std = " << fmt_double(hyper.exploration_noise_std)
     << '\n';
  os << "batch_size = " << hyper.batch_size << '\n';
  os << "buffer_capacity = " << hyper.buffer_capacity << '\n';
  os << "actor_lr = " << fmt_double(hyper.actor_lr) << '\n';
  os << "critic_lr = " << fmt_double(hyper.critic_lr) << '\n';
  os << "warmup_steps = " << hyper.warmup_steps << '\n';
  os << "reward_scale = " << fmt_double(hyper.reward_scale) << '\n';
  os << "hidden = [";
  for (std::size_t i = 0; i < hyper.hidden.size(); ++i)
    os << (i ? ", " : "") << hyper.hidden[i];
  os << "]\n";

  if (!csv_path.empty()) {
    os << "\n[data]\n";
    os << "csv = \"" << csv_path << "\"\n";
  } else {
    os << "\n[data.synth]\n";
    os << "days = " << synth_days << '\n';
    os << "price_mean = " << fmt_double(synth.price_mean) << '\n';
    os << "price_amplitude = " << fmt_double(synth.price_amplitude) << '\n';
    os << "price_noise_std = " << fmt_double(synth.price_noise_std) << '\n';
    os << "price_ar = " << fmt_double(synth.price_ar) << '\n';
    os << "spike_prob = " << fmt_double(synth.spike_prob) << '\n';
    os << "spike_min = " << fmt_double(synth.spike_min) << '\n';
    os << "spike_max = " << fmt_double(synth.spike_max) << '\n';
    os << "spike_negative_frac = " << fmt_double(synth.spike_negative_frac)
       << '\n';
    os << "wind_mean = " << fmt_double(synth.wind_mean) << '\n';
    os << "wind_ar = " << fmt_double(synth.wind_ar) << '\n';
    os << "wind_noise_std = " << fmt_double(synth.wind_noise_std) << '\n';
    os << "surge_prob = " << fmt_double(synth.surge_prob) << '\n';
    os << "surge_boost = " << fmt_double(synth.surge_boost) << '\n';
    os << "surge_decay = " << fmt_double(synth.surge_decay) << '\n';
    os << "wind_cap = " << fmt_double(synth.wind_cap) << '\n';
    os << "intervals_per_day = " << synth.intervals_per_day << '\n';
  }

  os << "\n[baseline]\n";
  os << "horizon = " << baseline.horizon << '\n';
  os << "soc_steps = " << baseline.soc_steps << '\n';
  os << "method = \"" << forecast_method_name(baseline.method) << "\"\n";
  os << "ema_tau = " << fmt_double(baseline.ema_tau) << '\n';

  os << "\n[output]\n";
  os << "dir = \"" << out_dir << "\"\n";
}

void RunConfig::validate() const {
  system.validate();
  std::string problems;
  auto flag = [&](const std::string& msg) {
    problems += problems.empty() ? msg : "; " + msg;
  };
  if (!(split_fraction > 0.0 && split_fraction < 1.0))
    flag("train.split_fraction must lie in (0, 1)");
  if (episodes < -1) flag("train.episodes must be >= -1");
  if (!(hyper.polyak > 0.0 && hyper.polyak <= 1.0))
    flag("hyper.polyak must lie in (0, 1]");
  if (hyper.policy_delay < 1) flag("hyper.policy_delay must be >= 1");
  if (hyper.batch_size < 1) flag("hyper.batch_size must be >= 1");
  if (hyper.buffer_capacity == 0) flag("hyper.buffer_capacity must be > 0");
  if (!(hyper.actor_lr > 0.0)) flag("hyper.actor_lr must be > 0");
  if (!(hyper.critic_lr > 0.0)) flag("hyper.critic_lr must be > 0");
  if (hyper.warmup_steps < 0) flag("hyper.warmup_steps must be >= 0");
  if (!(hyper.reward_scale > 0.0)) flag("hyper.reward_scale must be > 0");
  if (!(hyper.target_noise_std >= 0.0))
    flag("hyper.target_noise_std must be >= 0");
  if (!(hyper.target_noise_clip >= 0.0))
    flag("hyper.target_noise_clip must be >= 0");
  if (!(hyper.exploration_noise_std >= 0.0))
    flag("hyper.exploration_noise_std must be >= 0");
  if (hyper.hidden.empty()) flag("hyper.hidden must name at least one layer");
  for (int h : hyper.hidden)
    if (h < 1) {
      flag("hyper.hidden sizes must be >= 1");
      break;
    }
  if (csv_path.empty()) {
    if (synth_days < 1) flag("data.synth.days must be >= 1");
    if (synth.intervals_per_day < 1)
      flag("data.synth.intervals_per_day must be >= 1");
  }
  if (baseline.horizon < 1) flag("baseline.horizon must be >= 1");
  if (baseline.soc_steps < 2) flag("baseline.soc_steps must be >= 2");
  if (!(baseline.ema_tau > 0.0 && baseline.ema_tau < 1.0))
    flag("baseline.ema_tau must lie in (0, 1)");
  if (out_dir.empty()) flag("output.dir must not be empty");
  if (!problems.empty()) throw ConfigError(problems);
}

}  // namespace windbess
