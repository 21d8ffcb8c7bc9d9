"""converge コマンド - ρ → ∞ の収束列"""

from pathlib import Path
from typing import Any

import typer
from rich.console import Console
from rich.progress import Progress, SpinnerColumn, TextColumn

from ..cones import ConeDescriptor
from ..config import Config, RunConfig
from ..formatting import emit_rows
from ..models import DatabaseManager
from ..partitions import Partition
from ..polynomial import format_number
from ..study import ConvergenceService
from .common import fail, load_and_override_config

converge_command = typer.Typer()
console = Console()

TRUNCATED = "TRUNCATED"


def _service(config: Config, db_path: str | None) -> ConvergenceService:
    db_manager = None
    if db_path:
        db_manager = DatabaseManager(db_path)
        db_manager.initialize_schema()
    return ConvergenceService(db_manager, config, console)


def _truncated_row() -> dict[str, Any]:
    return {
        "step": TRUNCATED,
        "rho": "",
        "value": None,
        "target": None,
        "abs_error": None,
    }


def _emit_series(result: dict[str, Any], fmt: str, verbose: bool) -> None:
    rows = list(result["rows"])
    if result["truncated"]:
        rows.append(_truncated_row())
    emit_rows(rows, fmt, console, title=f"{result['series']} ({result['cone']})")
    if fmt == "pretty":
        console.print(f"目標値: {format_number(result['target'])}")
        if result["run_id"] is not None:
            console.print(f"保存先 run_id: {result['run_id']}")
        console.print(f"処理時間: {result['duration']:.2f}秒")
    if verbose and result.get("warnings"):
        console.print("\n[yellow]警告:[/yellow]")
        for warning in result["warnings"]:
            console.print(f"  - {warning}")


def _run_with_progress(label: str, call: Any) -> dict[str, Any]:
    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        console=console,
        transient=True,
    ) as progress:
        task = progress.add_task(f"{label}...", total=None)
        result: dict[str, Any] = call(progress, task)
        progress.update(task, description=f"{label} 完了")
    return result


STEPS_OPTION = typer.Option(None, "--steps", help="ρ 列の長さ（既定は設定ファイル）")
START_OPTION = typer.Option(None, "--start", help="ρ 列の初項")
STRIDE_OPTION = typer.Option(None, "--stride", help="ρ 列の刻み")
MAX_INTERVAL_OPTION = typer.Option(
    None, "--max-interval", help="区間の格子点数の上限"
)
DB_OPTION = typer.Option(None, "--db", help="保存先データベース")
FORMAT_OPTION = typer.Option(None, "--format", "-f", help="pretty | csv | json")
CONFIG_OPTION = typer.Option(None, "--config", "-c", help="設定ファイルのパス")
VERBOSE_OPTION = typer.Option(False, "--verbose", help="詳細な出力を表示")


def _series_run(
    config: Config,
    command: str,
    cone: str,
    steps: int | None,
    start: int | None,
    stride: int | None,
    max_interval: int | None,
) -> RunConfig:
    return RunConfig.from_config(
        config,
        command,
        cone=cone,
        steps=steps,
        start=start,
        stride=stride,
        max_interval=max_interval,
    )


@converge_command.command("ratio")
def converge_ratio(
    partition: str = typer.Option(..., "--partition", help="例: {{1,4},{2,3}}"),
    cone: str = typer.Option(..., "--cone", help="錐"),
    steps: int | None = STEPS_OPTION,
    start: int | None = START_OPTION,
    stride: int | None = STRIDE_OPTION,
    max_interval: int | None = MAX_INTERVAL_OPTION,
    db_path: str | None = DB_OPTION,
    fmt: str | None = FORMAT_OPTION,
    config_path: str | None = CONFIG_OPTION,
    verbose: bool = VERBOSE_OPTION,
) -> None:
    """|strict-BMO(π̃, ρ)| / v(ρ)^b → V(π̃)"""
    try:
        config = load_and_override_config(config_path, fmt)
        run = _series_run(
            config, "converge ratio", cone, steps, start, stride, max_interval
        )
        parsed = Partition.parse(partition)
        descriptor = ConeDescriptor.parse(cone)
        service = _service(run.to_config(config), db_path)
        result = _run_with_progress(
            "比の列を計算中",
            lambda progress, task: service.ratio_series(
                parsed,
                descriptor,
                run.steps,
                run.start,
                run.stride,
                verbose,
                progress,
                task,
            ),
        )
    except Exception as e:
        fail(console, e, verbose)

    _emit_series(result, run.format, verbose)


@converge_command.command("moment")
def converge_moment(
    p: int = typer.Option(..., "--p", help="次数"),
    cone: str = typer.Option(..., "--cone", help="錐"),
    coefficient: int = typer.Option(0, "--coefficient", help="λ の次数"),
    steps: int | None = STEPS_OPTION,
    start: int | None = START_OPTION,
    stride: int | None = STRIDE_OPTION,
    max_interval: int | None = MAX_INTERVAL_OPTION,
    db_path: str | None = DB_OPTION,
    fmt: str | None = FORMAT_OPTION,
    config_path: str | None = CONFIG_OPTION,
    verbose: bool = VERBOSE_OPTION,
) -> None:
    """有限 ρ のモーメントの係数 → m_p(λ) の係数"""
    try:
        config = load_and_override_config(config_path, fmt)
        run = _series_run(
            config, "converge moment", cone, steps, start, stride, max_interval
        )
        descriptor = ConeDescriptor.parse(cone)
        service = _service(run.to_config(config), db_path)
        result = _run_with_progress(
            "モーメントの列を計算中",
            lambda progress, task: service.moment_series(
                p,
                descriptor,
                run.steps,
                coefficient,
                run.start,
                run.stride,
                verbose,
                progress,
                task,
            ),
        )
    except Exception as e:
        fail(console, e, verbose)

    _emit_series(result, run.format, verbose)


@converge_command.command("gamma")
def converge_gamma(
    cone: str = typer.Option(..., "--cone", help="錐"),
    m: int = typer.Option(2, "--m", help="γ_m の m"),
    steps: int | None = STEPS_OPTION,
    start: int | None = START_OPTION,
    stride: int | None = STRIDE_OPTION,
    max_interval: int | None = MAX_INTERVAL_OPTION,
    db_path: str | None = DB_OPTION,
    fmt: str | None = FORMAT_OPTION,
    config_path: str | None = CONFIG_OPTION,
    verbose: bool = VERBOSE_OPTION,
) -> None:
    """格子版 γ_m → γ_m"""
    try:
        config = load_and_override_config(config_path, fmt)
        run = _series_run(
            config, "converge gamma", cone, steps, start, stride, max_interval
        )
        descriptor = ConeDescriptor.parse(cone)
        service = _service(run.to_config(config), db_path)
        result = _run_with_progress(
            "γ の列を計算中",
            lambda progress, task: service.gamma_series(
                descriptor,
                m,
                run.steps,
                run.start,
                run.stride,
                verbose,
                progress,
                task,
            ),
        )
    except Exception as e:
        fail(console, e, verbose)

    _emit_series(result, run.format, verbose)


@converge_command.command("adjudicate")
def converge_adjudicate(
    rho_max: int = typer.Option(40, "--rho-max", help="ρ = 2..rho_max"),
    fock_max: int = typer.Option(6, "--fock-max", help="Fock 照合を行う ρ の上限"),
    max_states: int | None = typer.Option(
        None, "--max-states", help="Fock 状態数の上限"
    ),
    db_path: str | None = DB_OPTION,
    config_path: str | None = CONFIG_OPTION,
    verbose: bool = VERBOSE_OPTION,
) -> None:
    """orthant:1 の m₆ の λ² 係数を有限 ρ 列で判定し、判定を保存"""
    try:
        config = load_and_override_config(config_path, db_path=db_path)
        run = RunConfig.from_config(
            config,
            "converge adjudicate",
            cone="orthant:1",
            p_values=[6],
            max_states=max_states,
        )
        service = _service(run.to_config(config), config.output.db_path)
        result = _run_with_progress(
            "判定中",
            lambda progress, task: service.adjudicate(
                rho_max, fock_max, verbose, progress, task
            ),
        )
    except Exception as e:
        fail(console, e, verbose)

    console.print(f"[bold blue]{result['subject']}[/bold blue]")
    console.print(f"導出値: {format_number(result['derived'])}")
    console.print(f"印刷値: {format_number(result['printed'])}")
    console.print(f"{result['detail']}")
    colour = "green" if result["verdict"] == "derived" else "yellow"
    console.print(f"[bold {colour}]判定: {result['verdict']}[/bold {colour}]")
    console.print(f"保存先: {config.output.db_path} (run_id {result['run_id']})")
    if verbose and result.get("warnings"):
        console.print("\n[yellow]警告:[/yellow]")
        for warning in result["warnings"]:
            console.print(f"  - {warning}")


@converge_command.command("show")
def converge_show(
    run_id: int = typer.Option(..., "--run-id", help="表示する run_id"),
    db_path: str | None = DB_OPTION,
    fmt: str | None = FORMAT_OPTION,
    config_path: str | None = CONFIG_OPTION,
    verbose: bool = VERBOSE_OPTION,
) -> None:
    """保存済みの収束列と判定を表示"""
    try:
        config = load_and_override_config(config_path, fmt, db_path)
        if not Path(config.output.db_path).exists():
            raise ValueError(f"データベースがありません: {config.output.db_path}")
        service = _service(config, config.output.db_path)
        stored = service.load_run(run_id)
    except Exception as e:
        fail(console, e, verbose)

    run = stored["run"]
    rows = [
        {key: point[key] for key in ("step", "rho", "value", "target", "abs_error")}
        for point in stored["points"]
    ]
    if run["truncated"]:
        rows.append(_truncated_row())
    fmt_out = config.output.format
    if fmt_out == "pretty":
        console.print(f"[bold blue]run {run['id']}: {run['command']}[/bold blue]")
        console.print(f"錐: {run['cone']}  作成: {run['created_at']}")
        for key, value in stored["parameters"].items():
            console.print(f"  {key} = {value}")
    emit_rows(rows, fmt_out, console, title=f"run {run['id']}")
    if fmt_out == "pretty":
        for verdict in stored["verdicts"]:
            console.print(
                f"判定: {verdict['verdict']} "
                f"(導出値 {verdict['derived_value']}, 印刷値 {verdict['printed_value']})"
            )
