#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "windbess/baseline.hpp"
#include "windbess/commands.hpp"
#include "windbess/env.hpp"
#include "windbess/errors.hpp"
#include "windbess/metrics.hpp"
#include "windbess/settlement.hpp"
#include "windbess/td3.hpp"
#include "windbess/trace.hpp"
#include "windbess/trainer.hpp"

namespace py = pybind11;
using namespace windbess;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Joint wind-farm + battery bidding laboratory";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_RuntimeError);

  py::class_<SystemConfig>(m, "SystemConfig")
      .def(py::init<>())
      .def_readwrite("dt_hours", &SystemConfig::dt_hours)
      .def_readwrite("lambda_penalty", &SystemConfig::lambda_penalty)
      .def_readwrite("eta_ch", &SystemConfig::eta_ch)
      .def_readwrite("eta_dch", &SystemConfig::eta_dch)
      .def_readwrite("c_degradation", &SystemConfig::c_degradation)
      .def_readwrite("p_max_wind", &SystemConfig::p_max_wind)
      .def_readwrite("p_max_bess", &SystemConfig::p_max_bess)
      .def_readwrite("e_min", &SystemConfig::e_min)
      .def_readwrite("e_max", &SystemConfig::e_max)
      .def_readwrite("window_len", &SystemConfig::window_len)
      .def_readwrite("tau_ema", &SystemConfig::tau_ema)
      .def_readwrite("beta_incentive", &SystemConfig::beta_incentive)
      .def_readwrite("gamma_discount", &SystemConfig::gamma_discount)
      .def_readwrite("initial_energy", &SystemConfig::initial_energy)
      .def("initial_energy_mwh", &SystemConfig::initial_energy_mwh)
      .def("validate", &SystemConfig::validate);

  py::class_<MarketTick>(m, "MarketTick")
      .def(py::init<std::int64_t, double, double>(), py::arg("t_index"),
           py::arg("spot_price"), py::arg("wind_actual"))
      .def_readwrite("t_index", &MarketTick::t_index)
      .def_readwrite("spot_price", &MarketTick::spot_price)
      .def_readwrite("wind_actual", &MarketTick::wind_actual);

  py::enum_<BessMode>(m, "BessMode")
      .value("Idle", BessMode::Idle)
      .value("Charge", BessMode::Charge)
      .value("Discharge", BessMode::Discharge);

  py::class_<WindAction>(m, "WindAction")
      .def(py::init<double>(), py::arg("availability_mw"))
      .def_readwrite("availability_mw", &WindAction::availability_mw);

  py::class_<BessAction>(m, "BessAction")
      .def(py::init<BessMode, double, double>(), py::arg("mode"),
           py::arg("p_spot_mw"), py::arg("p_curtail_mw"))
      .def_readwrite("mode", &BessAction::mode)
      .def_readwrite("p_spot_mw", &BessAction::p_spot_mw)
      .def_readwrite("p_curtail_mw", &BessAction::p_curtail_mw);

  py::class_<StepLedger>(m, "StepLedger")
      .def(py::init<>())
      .def_readwrite("wind_dispatched_mw", &StepLedger::wind_dispatched_mw)
      .def_readwrite("wind_curtailed_mw", &StepLedger::wind_curtailed_mw)
      .def_readwrite("wind_revenue", &StepLedger::wind_revenue)
      .def_readwrite("bess_revenue", &StepLedger::bess_revenue)
      .def_readwrite("degradation_cost", &StepLedger::degradation_cost)
      .def_readwrite("energy_delta_mwh", &StepLedger::energy_delta_mwh)
      .def_readwrite("absorbed_curtailment_mwh",
                     &StepLedger::absorbed_curtailment_mwh)
      .def_readwrite("spot_charged_mwh", &StepLedger::spot_charged_mwh)
      .def_readwrite("spot_price", &StepLedger::spot_price)
      .def_readwrite("curtail_freq", &StepLedger::curtail_freq);

  py::class_<WindSettlement>(m, "WindSettlement")
      .def_readonly("dispatched_mw", &WindSettlement::dispatched_mw)
      .def_readonly("revenue", &WindSettlement::revenue);

  m.def("settle_wind", &settle_wind, py::arg("forecast_mw"), py::arg("tick"),
        py::arg("cfg"));
  m.def("curtailed_power", &curtailed_power, py::arg("actual_mw"),
        py::arg("forecast_mw"));
  m.def("settle_bess", &settle_bess, py::arg("action"), py::arg("tick"),
        py::arg("cfg"));
  m.def("degradation_step", &degradation_step, py::arg("action"),
        py::arg("cfg"));
  m.def("energy_delta", &energy_delta, py::arg("action"),
        py::arg("curtailed_mw"), py::arg("cfg"));
  m.def("clamp_feasible", &clamp_feasible, py::arg("raw"), py::arg("energy"),
        py::arg("curtailed_mw"), py::arg("cfg"));
  m.def(
      "objective_total",
      [](const std::vector<StepLedger>& steps) {
        const ObjectiveTotal t = objective_total(steps);
        return py::make_tuple(t.wind_revenue, t.bess_revenue,
                              t.degradation_cost, t.total);
      },
      py::arg("steps"),
      "Returns (wind_revenue, bess_revenue, degradation_cost, total)");

  py::class_<Trace>(m, "Trace")
      .def(py::init<>())
      .def_readwrite("ticks", &Trace::ticks)
      .def_readwrite("dt_hours", &Trace::dt_hours)
      .def_readwrite("source", &Trace::source)
      .def("__len__", &Trace::size);

  py::class_<NormStats>(m, "NormStats")
      .def(py::init<>())
      .def_readwrite("price_mean", &NormStats::price_mean)
      .def_readwrite("price_std", &NormStats::price_std)
      .def_readwrite("wind_mean", &NormStats::wind_mean)
      .def_readwrite("wind_std", &NormStats::wind_std)
      .def_static("compute", &NormStats::compute);

  py::class_<SynthProfile>(m, "SynthProfile")
      .def(py::init<>())
      .def_readwrite("price_mean", &SynthProfile::price_mean)
      .def_readwrite("price_amplitude", &SynthProfile::price_amplitude)
      .def_readwrite("price_noise_std", &SynthProfile::price_noise_std)
      .def_readwrite("price_ar", &SynthProfile::price_ar)
      .def_readwrite("spike_prob", &SynthProfile::spike_prob)
      .def_readwrite("spike_min", &SynthProfile::spike_min)
      .def_readwrite("spike_max", &SynthProfile::spike_max)
      .def_readwrite("spike_negative_frac", &SynthProfile::spike_negative_frac)
      .def_readwrite("wind_mean", &SynthProfile::wind_mean)
      .def_readwrite("wind_ar", &SynthProfile::wind_ar)
      .def_readwrite("wind_noise_std", &SynthProfile::wind_noise_std)
      .def_readwrite("surge_prob", &SynthProfile::surge_prob)
      .def_readwrite("surge_boost", &SynthProfile::surge_boost)
      .def_readwrite("surge_decay", &SynthProfile::surge_decay)
      .def_readwrite("wind_cap", &SynthProfile::wind_cap)
      .def_readwrite("intervals_per_day", &SynthProfile::intervals_per_day);

  m.def("synth_trace", &synth_trace, py::arg("days"), py::arg("seed"),
        py::arg("profile") = SynthProfile{});
  m.def(
      "load_csv",
      [](const std::string& path, const SystemConfig& cfg) {
        return load_csv(path, cfg);
      },
      py::arg("path"), py::arg("cfg"));
  m.def(
      "write_csv",
      [](const Trace& trace, const std::string& path) {
        write_csv(trace, path);
      },
      py::arg("trace"), py::arg("path"));
  m.def("split_trace", &split_trace, py::arg("trace"),
        py::arg("train_fraction"), py::arg("episode_len") = 288);
  m.def("trace_hash", &trace_hash, py::arg("trace"));

  py::class_<EpisodeLedger>(m, "EpisodeLedger")
      .def(py::init<>())
      .def_readwrite("steps", &EpisodeLedger::steps)
      .def_readwrite("wind_revenue", &EpisodeLedger::wind_revenue)
      .def_readwrite("bess_revenue", &EpisodeLedger::bess_revenue)
      .def_readwrite("degradation_cost", &EpisodeLedger::degradation_cost)
      .def_readwrite("total", &EpisodeLedger::total)
      .def_readwrite("curtailed_mwh", &EpisodeLedger::curtailed_mwh)
      .def_readwrite("absorbed_mwh", &EpisodeLedger::absorbed_mwh)
      .def_readwrite("spot_charged_mwh", &EpisodeLedger::spot_charged_mwh);

  m.def(
      "summarize",
      [](std::vector<StepLedger> steps, double dt_hours) {
        return summarize(std::move(steps), dt_hours);
      },
      py::arg("steps"), py::arg("dt_hours"));

  py::enum_<GroupBy>(m, "GroupBy")
      .value("SpotPrice", GroupBy::SpotPrice)
      .value("CurtailFreq", GroupBy::CurtailFreq);

  py::class_<QuartileReport>(m, "QuartileReport")
      .def_readonly("group_by", &QuartileReport::group_by)
      .def_readonly("edges", &QuartileReport::edges)
      .def_readonly("curtail_share", &QuartileReport::curtail_share)
      .def_readonly("spot_share", &QuartileReport::spot_share)
      .def_readonly("counts", &QuartileReport::counts);

  m.def(
      "quartile_analysis",
      [](const std::vector<StepLedger>& steps, GroupBy group_by) {
        return quartile_analysis(steps, group_by);
      },
      py::arg("steps"), py::arg("group_by"));

  py::enum_<ForecastMethod>(m, "ForecastMethod")
      .value("Persistence", ForecastMethod::Persistence)
      .value("EmaDrift", ForecastMethod::EmaDrift)
      .value("Perfect", ForecastMethod::Perfect);

  py::class_<Forecast>(m, "Forecast")
      .def(py::init<>())
      .def_readwrite("prices", &Forecast::prices)
      .def_readwrite("winds", &Forecast::winds)
      .def("horizon", &Forecast::horizon);

  m.def(
      "make_forecast",
      [](const std::vector<MarketTick>& history, int horizon,
         ForecastMethod method, double ema_tau) {
        return make_forecast(history, horizon, method, ema_tau);
      },
      py::arg("history"), py::arg("horizon"), py::arg("method"),
      py::arg("ema_tau") = 0.9);

  py::class_<DpPlan>(m, "DpPlan")
      .def_readonly("wind", &DpPlan::wind)
      .def_readonly("bess", &DpPlan::bess)
      .def_readonly("objective", &DpPlan::objective);

  m.def("dp_optimize", &dp_optimize, py::arg("forecast"), py::arg("e0"),
        py::arg("cfg"), py::arg("soc_steps"));

  py::class_<BaselineOptions>(m, "BaselineOptions")
      .def(py::init<>())
      .def_readwrite("horizon", &BaselineOptions::horizon)
      .def_readwrite("soc_steps", &BaselineOptions::soc_steps)
      .def_readwrite("method", &BaselineOptions::method)
      .def_readwrite("ema_tau", &BaselineOptions::ema_tau);

  m.def("rolling_run", &rolling_run, py::arg("trace"), py::arg("cfg"),
        py::arg("options"));

  py::class_<Td3Hyper>(m, "Td3Hyper")
      .def(py::init<>())
      .def_readwrite("gamma", &Td3Hyper::gamma)
      .def_readwrite("polyak", &Td3Hyper::polyak)
      .def_readwrite("policy_delay", &Td3Hyper::policy_delay)
      .def_readwrite("target_noise_std", &Td3Hyper::target_noise_std)
      .def_readwrite("target_noise_clip", &Td3Hyper::target_noise_clip)
      .def_readwrite("exploration_noise_std", &Td3Hyper::exploration_noise_std)
      .def_readwrite("batch_size", &Td3Hyper::batch_size)
      .def_readwrite("buffer_capacity", &Td3Hyper::buffer_capacity)
      .def_readwrite("actor_lr", &Td3Hyper::actor_lr)
      .def_readwrite("critic_lr", &Td3Hyper::critic_lr)
      .def_readwrite("warmup_steps", &Td3Hyper::warmup_steps)
      .def_readwrite("reward_scale", &Td3Hyper::reward_scale)
      .def_readwrite("hidden", &Td3Hyper::hidden);

  m.def(
      "decode_bess_action",
      [](const std::vector<double>& raw, const SystemConfig& cfg) {
        return decode_bess_action(raw, cfg);
      },
      py::arg("raw"), py::arg("cfg"));
  m.def("decode_wind_action", &decode_wind_action, py::arg("raw"),
        py::arg("cfg"));

  py::class_<Td3Agent>(m, "Td3Agent")
      .def(py::init<int, int, Td3Hyper, std::uint64_t>(), py::arg("obs_dim"),
           py::arg("act_dim"), py::arg("hyper"), py::arg("seed"))
      .def("obs_dim", &Td3Agent::obs_dim)
      .def("act_dim", &Td3Agent::act_dim)
      .def(
          "act_deterministic",
          [](const Td3Agent& a, const std::vector<double>& obs) {
            return a.act_deterministic(obs);
          },
          py::arg("obs"))
      .def("save_text",
           [](const Td3Agent& a) {
             std::ostringstream os;
             a.save(os);
             return os.str();
           })
      .def("load_text", [](Td3Agent& a, const std::string& text) {
        std::istringstream is(text);
        a.load(is);
      });

  py::enum_<WindCoupling>(m, "WindCoupling")
      .value("Policy", WindCoupling::Policy)
      .value("PerfectForecast", WindCoupling::PerfectForecast);

  py::class_<EpisodeLog>(m, "EpisodeLog")
      .def_readonly("episode", &EpisodeLog::episode)
      .def_readonly("wind_return", &EpisodeLog::wind_return)
      .def_readonly("bess_return", &EpisodeLog::bess_return)
      .def_readonly("wind_critic_loss", &EpisodeLog::wind_critic_loss)
      .def_readonly("bess_critic_loss", &EpisodeLog::bess_critic_loss)
      .def_readonly("updates", &EpisodeLog::updates);

  py::class_<JointTrainer>(m, "JointTrainer")
      .def(py::init<Trace, SystemConfig, Td3Hyper, WindCoupling,
                    std::uint64_t>(),
           py::arg("train_trace"), py::arg("cfg"), py::arg("hyper"),
           py::arg("coupling"), py::arg("seed"))
      .def("run_episode", &JointTrainer::run_episode)
      .def("run", &JointTrainer::run, py::arg("episodes"))
      .def("max_episodes", &JointTrainer::max_episodes)
      .def("episodes_run", &JointTrainer::episodes_run)
      .def("total_steps", &JointTrainer::total_steps)
      .def("stats", &JointTrainer::stats)
      .def("coupling", &JointTrainer::coupling)
      .def("wind_agent", py::overload_cast<>(&JointTrainer::wind_agent),
           py::return_value_policy::reference_internal)
      .def("bess_agent", py::overload_cast<>(&JointTrainer::bess_agent),
           py::return_value_policy::reference_internal)
      .def("save_checkpoint", [](const JointTrainer& t,
                                 const std::string& path) {
        std::ofstream os(path);
        if (!os) throw DataError("cannot write checkpoint: " + path);
        save_checkpoint(os, t);
      });

  py::class_<EvalResult>(m, "EvalResult")
      .def_readonly("ledger", &EvalResult::ledger)
      .def_readonly("wind_return", &EvalResult::wind_return)
      .def_readonly("bess_return", &EvalResult::bess_return)
      .def_readonly("decisions", &EvalResult::decisions)
      .def_readonly("decision_seconds", &EvalResult::decision_seconds);

  m.def("evaluate_policies", &evaluate_policies, py::arg("trace"),
        py::arg("cfg"), py::arg("wind_agent"), py::arg("bess_agent"),
        py::arg("stats"), py::arg("coupling"), py::arg("episode_len") = 288);

  py::class_<Checkpoint>(m, "Checkpoint")
      .def_readonly("wind", &Checkpoint::wind)
      .def_readonly("bess", &Checkpoint::bess)
      .def_readonly("stats", &Checkpoint::stats)
      .def_readonly("coupling", &Checkpoint::coupling)
      .def_readonly("reward_scale", &Checkpoint::reward_scale);

  m.def(
      "load_checkpoint",
      [](const std::string& path) {
        std::ifstream is(path);
        if (!is) throw DataError("cannot open checkpoint: " + path);
        return load_checkpoint(is);
      },
      py::arg("path"));
}
