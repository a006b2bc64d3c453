#include "windbess/trainer.hpp"

#include <chrono>
#include <ostream>
#include <string>
#include <utility>

#include "windbess/errors.hpp"

namespace windbess {

namespace {

// Distinct seed salts so the two agents never share a random stream even
// under identical user seeds.
constexpr std::uint64_t kWindSalt = 0x57494e44u;
constexpr std::uint64_t kBessSalt = 0x42455353u;

SystemConfig validated(SystemConfig cfg) {
  cfg.validate();
  return cfg;
}

Td3Hyper with_discount(Td3Hyper hyper, const SystemConfig& cfg) {
  hyper.gamma = cfg.gamma_discount;  // single source of truth
  return hyper;
}

}  // namespace

const char* coupling_name(WindCoupling coupling) {
  return coupling == WindCoupling::Policy ? "policy" : "perfect_forecast";
}

WindCoupling parse_coupling(const std::string& name) {
  if (name == "policy") return WindCoupling::Policy;
  if (name == "perfect_forecast") return WindCoupling::PerfectForecast;
  throw ConfigError("unknown coupling '" + name +
                    "' (expected policy or perfect_forecast)");
}

JointTrainer::JointTrainer(Trace train, SystemConfig cfg, Td3Hyper hyper,
                           WindCoupling coupling, std::uint64_t seed)
    : trace_(std::move(train)),
      cfg_(validated(cfg)),
      hyper_(with_discount(std::move(hyper), cfg_)),
      coupling_(coupling),
      stats_(NormStats::compute(trace_)),
      wind_env_(&trace_, cfg_, stats_),
      bess_env_(&trace_, cfg_, stats_),
      wind_(WindEnv::kObsDim, WindEnv::kActDim, hyper_, seed ^ kWindSalt),
      bess_(BessEnv::kObsDim, BessEnv::kActDim, hyper_, seed ^ kBessSalt) {
  if (wind_env_.episode_count() == 0)
    throw DataError("training trace shorter than one episode");
}

EpisodeLog JointTrainer::run_episode() {
  const int e = next_episode_;
  if (e >= wind_env_.episode_count())
    throw ConfigError("training trace exhausted after " + std::to_string(e) +
                      " episodes");

  WindObservation wobs = wind_env_.reset(e);
  BessObservation bobs = bess_env_.reset(e);
  EpisodeLog log;
  log.episode = e;
  double wind_loss_sum = 0.0, bess_loss_sum = 0.0;

  bool done = false;
  while (!done) {
    const auto wvec = wind_env_.observation_vector(wobs);
    const auto bvec = bess_env_.observation_vector(bobs);
    const bool warm = total_steps_ < hyper_.warmup_steps;
    const std::vector<double> wraw =
        warm ? wind_.act_random() : wind_.act_noisy(wvec);
    const std::vector<double> braw =
        warm ? bess_.act_random() : bess_.act_noisy(bvec);
    const WindAction wa = decode_wind_action(wraw[0], cfg_);
    const BessAction ba = decode_bess_action(braw, cfg_);

    const WindEnv::Step wstep = wind_env_.step(wa);
    const BessEnv::Step bstep = coupling_ == WindCoupling::Policy
                                    ? bess_env_.step(ba, wa.availability_mw)
                                    : bess_env_.step(ba);
    done = wstep.done;

    const auto wnext = wind_env_.observation_vector(wstep.obs);
    const auto bnext = bess_env_.observation_vector(bstep.obs);
    wind_.observe({{wvec.begin(), wvec.end()},
                   wraw,
                   wstep.reward / hyper_.reward_scale,
                   {wnext.begin(), wnext.end()},
                   wstep.done});
    bess_.observe({{bvec.begin(), bvec.end()},
                   braw,
                   bstep.reward / hyper_.reward_scale,
                   {bnext.begin(), bnext.end()},
                   bstep.done});
    log.wind_return += wstep.reward;
    log.bess_return += bstep.reward;
    ++total_steps_;

    if (!warm &&
        wind_.buffer().size() >= static_cast<std::size_t>(hyper_.batch_size)) {
      const auto wd = wind_.train_step();
      const auto bd = bess_.train_step();
      wind_loss_sum += wd.critic1_loss;
      bess_loss_sum += bd.critic1_loss;
      ++log.updates;
    }
    wobs = wstep.obs;
    bobs = bstep.obs;
  }

  if (log.updates > 0) {
    log.wind_critic_loss = wind_loss_sum / static_cast<double>(log.updates);
    log.bess_critic_loss = bess_loss_sum / static_cast<double>(log.updates);
  }
  ++next_episode_;
  return log;
}

std::vector<EpisodeLog> JointTrainer::run(int episodes) {
  if (episodes < 0) throw ConfigError("episode count must be >= 0");
  if (next_episode_ + episodes > max_episodes())
    throw ConfigError("requested " + std::to_string(episodes) +
                      " episodes but trace holds only " +
                      std::to_string(max_episodes() - next_episode_) +
                      " more full days");
  std::vector<EpisodeLog> logs;
  logs.reserve(static_cast<std::size_t>(episodes));
  for (int i = 0; i < episodes; ++i) logs.push_back(run_episode());
  return logs;
}

EvalResult evaluate_policies(const Trace& trace, const SystemConfig& cfg,
                             const Td3Agent& wind, const Td3Agent& bess,
                             const NormStats& stats, WindCoupling coupling,
                             int episode_len) {
  WindEnv wenv(&trace, cfg, stats, episode_len);
  BessEnv benv(&trace, cfg, stats, episode_len);
  const int episodes = wenv.episode_count();
  if (episodes == 0)
    throw DataError("evaluation slice shorter than one episode");

  EvalResult out;
  std::vector<StepLedger> steps;
  steps.reserve(static_cast<std::size_t>(episodes) * episode_len);
  using clock = std::chrono::steady_clock;

  for (int e = 0; e < episodes; ++e) {
    WindObservation wobs = wenv.reset(e);
    BessObservation bobs = benv.reset(e);
    bool done = false;
    while (!done) {
      const auto wvec = wenv.observation_vector(wobs);
      const auto bvec = benv.observation_vector(bobs);
      const auto t0 = clock::now();
      const auto wraw = wind.act_deterministic(wvec);
      const auto braw = bess.act_deterministic(bvec);
      const WindAction wa = decode_wind_action(wraw[0], cfg);
      const BessAction ba = decode_bess_action(braw, cfg);
      out.decision_seconds +=
          std::chrono::duration<double>(clock::now() - t0).count();
      ++out.decisions;

      const WindEnv::Step wstep = wenv.step(wa);
      const BessEnv::Step bstep = coupling == WindCoupling::Policy
                                      ? benv.step(ba, wa.availability_mw)
                                      : benv.step(ba);
      // The battery environment settles both plants with the wind bid it
      // actually saw, so its ledger is the system of record.
      steps.push_back(bstep.ledger);
      out.wind_return += wstep.reward;
      out.bess_return += bstep.reward;
      done = wstep.done;
      wobs = wstep.obs;
      bobs = bstep.obs;
    }
  }
  out.ledger = summarize(std::move(steps), cfg.dt_hours);
  return out;
}

void save_checkpoint(std::ostream& os, const JointTrainer& trainer) {
  os << "windbess-agents v1\n";
  os << "coupling " << coupling_name(trainer.coupling()) << '\n';
  os << "reward_scale ";
  write_hex(os, trainer.wind_agent().hyper().reward_scale);
  os << '\n';
  const NormStats& s = trainer.stats();
  os << "stats ";
  write_hex(os, s.price_mean);
  os << ' ';
  write_hex(os, s.price_std);
  os << ' ';
  write_hex(os, s.wind_mean);
  os << ' ';
  write_hex(os, s.wind_std);
  os << '\n';
  trainer.wind_agent().save(os);
  trainer.bess_agent().save(os);
}

Checkpoint load_checkpoint(std::istream& is) {
  try {
    std::string tag, version, key, name;
    if (!(is >> tag >> version) || tag != "windbess-agents" || version != "v1")
      throw DataError("checkpoint: unrecognized header");
    if (!(is >> key >> name) || key != "coupling")
      throw DataError("checkpoint: missing coupling");
    const WindCoupling coupling = parse_coupling(name);
    if (!(is >> key) || key != "reward_scale")
      throw DataError("checkpoint: missing reward_scale");
    const double reward_scale = read_hex(is);
    if (!(is >> key) || key != "stats")
      throw DataError("checkpoint: missing stats");
    NormStats stats;
    stats.price_mean = read_hex(is);
    stats.price_std = read_hex(is);
    stats.wind_mean = read_hex(is);
    stats.wind_std = read_hex(is);

    Td3Hyper hyper;
    hyper.reward_scale = reward_scale;
    Td3Agent wind(WindEnv::kObsDim, WindEnv::kActDim, hyper, 0);
    wind.load(is);
    Td3Agent bess(BessEnv::kObsDim, BessEnv::kActDim, hyper, 0);
    bess.load(is);
    return Checkpoint{std::move(wind), std::move(bess), stats, coupling,
                      reward_scale};
  } catch (const ConfigError& e) {
    throw DataError(std::string("checkpoint: ") + e.what());
  } catch (const DataError&) {
    throw;
  } catch (const std::runtime_error& e) {
    throw DataError(std::string("checkpoint: ") + e.what());
  }
}

}  // namespace windbess
