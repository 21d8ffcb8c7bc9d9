"""設定管理"""

import os
from pathlib import Path
from typing import Literal

import yaml
from pydantic import BaseModel, Field, field_validator

OutputFormat = Literal["pretty", "csv", "json"]


class LimitsConfig(BaseModel):
    """計算量の上限"""

    max_sequences: int = Field(default=10_000_000, gt=0)
    max_states: int = Field(default=200_000, gt=0)
    max_interval: int = Field(default=5_000, gt=0)


class SamplingConfig(BaseModel):
    """モンテカルロ体積推定の設定"""

    seed: int = Field(default=20240601)
    samples: int = Field(default=200_000, gt=0)


class ScheduleConfig(BaseModel):
    """ρ 列の既定値"""

    steps: int = Field(default=20, gt=0)
    start: int = Field(default=1, gt=0)
    stride: int = Field(default=1, gt=0)


class OutputConfig(BaseModel):
    """出力設定"""

    format: OutputFormat = Field(default="pretty")
    db_path: str = Field(default="./bm_poisson_runs.db")


class Config(BaseModel):
    """全体設定"""

    limits: LimitsConfig = Field(default_factory=LimitsConfig)
    sampling: SamplingConfig = Field(default_factory=SamplingConfig)
    schedule: ScheduleConfig = Field(default_factory=ScheduleConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)


class RunConfig(BaseModel):
    """1 回の実行の条件"""

    command: str
    cone: str | None = Field(default=None)
    p_values: list[int] = Field(default_factory=list)
    lambdas: list[float] = Field(default_factory=list)
    symbolic: bool = Field(default=True)
    exact: bool = Field(default=False)
    steps: int = Field(default=20)
    start: int = Field(default=1)
    stride: int = Field(default=1)
    format: OutputFormat = Field(default="pretty")
    limits: LimitsConfig = Field(default_factory=LimitsConfig)
    seed: int = Field(default=20240601)

    @field_validator("p_values")
    @classmethod
    def _positive_p(cls, value: list[int]) -> list[int]:
        if any(p < 0 for p in value):
            raise ValueError(f"p は 0 以上: {value}")
        return value

    @field_validator("steps", "start", "stride")
    @classmethod
    def _positive_schedule(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"ρ 列の指定は 1 以上: {value}")
        return value

    @classmethod
    def from_config(
        cls, config: Config, command: str, **overrides: object
    ) -> "RunConfig":
        """設定ファイルの値にコマンドラインの指定を重ねる

        max_sequences / max_states / max_interval は limits の上書きとして扱う。
        """
        given = {k: v for k, v in overrides.items() if v is not None}
        limits = config.limits.model_dump()
        for name in LimitsConfig.model_fields:
            if name in given:
                limits[name] = given.pop(name)
        values: dict[str, object] = {
            "command": command,
            "format": config.output.format,
            "limits": LimitsConfig.model_validate(limits),
            "seed": config.sampling.seed,
            "steps": config.schedule.steps,
            "start": config.schedule.start,
            "stride": config.schedule.stride,
        }
        values.update(given)
        return cls.model_validate(values)

    def to_config(self, base: Config) -> Config:
        """この実行の上限・乱数シード・出力形式を反映した設定"""
        return base.model_copy(
            update={
                "limits": self.limits.model_copy(),
                "sampling": base.sampling.model_copy(update={"seed": self.seed}),
                "output": base.output.model_copy(update={"format": self.format}),
            }
        )


def load_config(config_path: str | None = None) -> Config:
    """設定ファイルを読み込み"""
    if config_path is None:
        # デフォルトの設定ファイルパスを探索
        candidates = [
            Path.cwd() / "bm-poisson.yaml",
            Path.home() / ".config" / "bm-poisson" / "config.yaml",
        ]
        for candidate in candidates:
            if candidate.exists():
                config_path = str(candidate)
                break

    if config_path and Path(config_path).exists():
        with open(config_path, encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
        return Config(**data)

    # 設定ファイルがない場合はデフォルト設定を返す
    config = Config()

    # 環境変数から乱数シードを取得
    seed = os.getenv("BM_POISSON_SEED")
    if seed:
        config.sampling.seed = int(seed)

    return config
