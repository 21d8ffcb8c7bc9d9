"""設定管理モジュール"""

from .settings import (
    Config,
    LimitsConfig,
    OutputConfig,
    RunConfig,
    SamplingConfig,
    ScheduleConfig,
    load_config,
)

__all__ = [
    "Config",
    "LimitsConfig",
    "OutputConfig",
    "RunConfig",
    "SamplingConfig",
    "ScheduleConfig",
    "load_config",
]
