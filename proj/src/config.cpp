#include "windbess/config.hpp"

#include <cmath>
#include <sstream>

#include "windbess/errors.hpp"

namespace windbess {

void SystemConfig::validate() const {
  std::ostringstream bad;
  auto require = [&](bool ok, const char* what) {
    if (!ok) bad << (bad.tellp() > 0 ? "; " : "") << what;
  };
  require(std::isfinite(dt_hours) && dt_hours > 0, "dt_hours must be > 0");
  require(lambda_penalty >= 0, "lambda_penalty must be >= 0");
  require(eta_ch > 0 && eta_ch <= 1, "eta_ch must be in (0, 1]");
  require(eta_dch > 0 && eta_dch <= 1, "eta_dch must be in (0, 1]");
  require(c_degradation >= 0, "c_degradation must be >= 0");
  require(p_max_wind > 0, "p_max_wind must be > 0");
  require(p_max_bess > 0, "p_max_bess must be > 0");
  require(e_min > 0, "e_min must be > 0");
  require(e_min <= e_max, "e_min must not exceed e_max");
  require(window_len > 0, "window_len must be > 0");
  require(tau_ema >= 0 && tau_ema < 1, "tau_ema must be in [0, 1)");
  require(beta_incentive >= 0, "beta_incentive must be >= 0");
  require(gamma_discount >= 0 && gamma_discount < 1,
          "gamma_discount must be in [0, 1)");
  if (initial_energy) {
    require(*initial_energy >= e_min && *initial_energy <= e_max,
            "initial_energy must lie in [e_min, e_max]");
  }
  if (bad.tellp() > 0) throw ConfigError("invalid system config: " + bad.str());
}

}  // namespace windbess
