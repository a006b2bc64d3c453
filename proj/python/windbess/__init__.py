"""Joint wind-farm + battery bidding laboratory."""

from ._core import (
    BaselineOptions,
    BessAction,
    BessMode,
    Checkpoint,
    ConfigError,
    DataError,
    DpPlan,
    EpisodeLedger,
    EpisodeLog,
    EvalResult,
    Forecast,
    ForecastMethod,
    GroupBy,
    JointTrainer,
    MarketTick,
    NormStats,
    QuartileReport,
    StepLedger,
    SynthProfile,
    SystemConfig,
    Td3Agent,
    Td3Hyper,
    Trace,
    WindAction,
    WindCoupling,
    WindSettlement,
    clamp_feasible,
    curtailed_power,
    decode_bess_action,
    decode_wind_action,
    degradation_step,
    dp_optimize,
    energy_delta,
    evaluate_policies,
    load_checkpoint,
    load_csv,
    make_forecast,
    objective_total,
    quartile_analysis,
    rolling_run,
    settle_bess,
    settle_wind,
    split_trace,
    summarize,
    synth_trace,
    trace_hash,
    write_csv,
)

__all__ = [
    "BaselineOptions",
    "BessAction",
    "BessMode",
    "Checkpoint",
    "ConfigError",
    "DataError",
    "DpPlan",
    "EpisodeLedger",
    "EpisodeLog",
    "EvalResult",
    "Forecast",
    "ForecastMethod",
    "GroupBy",
    "JointTrainer",
    "MarketTick",
    "NormStats",
    "QuartileReport",
    "StepLedger",
    "SynthProfile",
    "SystemConfig",
    "Td3Agent",
    "Td3Hyper",
    "Trace",
    "WindAction",
    "WindCoupling",
    "WindSettlement",
    "clamp_feasible",
    "curtailed_power",
    "decode_bess_action",
    "decode_wind_action",
    "degradation_step",
    "dp_optimize",
    "energy_delta",
    "evaluate_policies",
    "load_checkpoint",
    "load_csv",
    "make_forecast",
    "objective_total",
    "quartile_analysis",
    "rolling_run",
    "settle_bess",
    "settle_wind",
    "split_trace",
    "summarize",
    "synth_trace",
    "trace_hash",
    "write_csv",
]
