"""moments コマンド - 極限モーメントの表"""

from typing import Any

import typer
from rich.console import Console

from ..cones import ConeDescriptor, parse_point
from ..config import RunConfig
from ..formatting import emit_rows, parse_p_range
from ..moments import (
    V_of,
    clt_table,
    compare_with_printed,
    finite_rho_moment,
    moment_poly,
)
from ..partitions import Partition, reduce
from ..polynomial import format_number
from .common import EXIT_INVALID, fail, load_and_override_config

moments_command = typer.Typer()
console = Console()


def _moment_row(
    cone: ConeDescriptor, p: int, compare_printed: bool, fmt: str
) -> dict[str, Any]:
    poly = moment_poly(p, cone)
    row: dict[str, Any] = {"p": p, "cone": str(cone), "poly": poly}
    if not compare_printed:
        return row
    comparison = compare_with_printed(cone, p)
    row["printed"] = comparison.printed if comparison.printed is not None else ""
    if comparison.status == "absent":
        row["status"] = "absent"
    elif comparison.matches:
        row["status"] = "match"
    else:
        row["status"] = "MISMATCH"
    if fmt == "pretty" and row["status"] == "MISMATCH":
        row["status"] = f"[bold red]MISMATCH[/bold red] ({comparison.status})"
    return row


def _show_table(
    cone: str,
    p_range: str,
    compare_printed: bool,
    fmt: str | None,
    config_path: str | None,
    verbose: bool,
) -> None:
    try:
        config = load_and_override_config(config_path, fmt)
        run = RunConfig.from_config(
            config, "moments", cone=cone, p_values=parse_p_range(p_range)
        )
        descriptor = ConeDescriptor.parse(run.cone or cone)
        if any(p < 1 for p in run.p_values):
            raise ValueError(f"p は 1 以上: {p_range}")
        rows = [
            _moment_row(descriptor, p, compare_printed, run.format)
            for p in run.p_values
        ]
    except Exception as e:
        fail(console, e, verbose)

    emit_rows(rows, run.format, console, title=f"m_p(λ): {descriptor}")


CONE_OPTION = typer.Option(None, "--cone", help="錐 (例: orthant:2, lorentz:2, psd:2)")
P_RANGE_OPTION = typer.Option("1..6", "--p", help="次数 (例: 1..6, 4, 1,3,5)")
COMPARE_OPTION = typer.Option(
    False, "--compare-paper", "--compare-printed", help="印刷表との一致を併記"
)
FORMAT_OPTION = typer.Option(None, "--format", "-f", help="pretty | csv | json")
CONFIG_OPTION = typer.Option(None, "--config", "-c", help="設定ファイルのパス")
VERBOSE_OPTION = typer.Option(False, "--verbose", help="詳細な出力を表示")


@moments_command.callback(invoke_without_command=True)
def moments_default(
    ctx: typer.Context,
    cone: str | None = CONE_OPTION,
    p_range: str = P_RANGE_OPTION,
    compare_printed: bool = COMPARE_OPTION,
    fmt: str | None = FORMAT_OPTION,
    config_path: str | None = CONFIG_OPTION,
    verbose: bool = VERBOSE_OPTION,
) -> None:
    """サブコマンドなしで --cone を与えると m_p(λ) の表を表示"""
    if ctx.invoked_subcommand is not None:
        return
    if cone is None:
        console.print(ctx.get_help())
        raise typer.Exit(EXIT_INVALID)
    _show_table(cone, p_range, compare_printed, fmt, config_path, verbose)


@moments_command.command("table")
def moments_table(
    cone: str = typer.Option(..., "--cone", help="錐 (例: orthant:2, lorentz:2, psd:2)"),
    p_range: str = P_RANGE_OPTION,
    compare_printed: bool = COMPARE_OPTION,
    fmt: str | None = FORMAT_OPTION,
    config_path: str | None = CONFIG_OPTION,
    verbose: bool = VERBOSE_OPTION,
) -> None:
    """m_p(λ) の表を表示"""
    _show_table(cone, p_range, compare_printed, fmt, config_path, verbose)


@moments_command.command("finite")
def moments_finite(
    cone: str = typer.Option(..., "--cone", help="錐"),
    rho: str = typer.Option(..., "--rho", help="ρ (例: 4, 2,3, 3;0, 2,0,2)"),
    p_range: str = typer.Option("1..6", "--p", help="次数"),
    fmt: str | None = typer.Option(None, "--format", "-f", help="pretty | csv | json"),
    config_path: str | None = typer.Option(
        None, "--config", "-c", help="設定ファイルのパス"
    ),
    verbose: bool = typer.Option(False, "--verbose", help="詳細な出力を表示"),
) -> None:
    """有限 ρ のモーメント φ(S_ρ(λ)^p) を表示"""
    try:
        config = load_and_override_config(config_path, fmt)
        run = RunConfig.from_config(
            config, "moments finite", cone=cone, p_values=parse_p_range(p_range)
        )
        descriptor = ConeDescriptor.parse(cone)
        point = parse_point(descriptor, rho)
        rows = [
            {
                "p": p,
                "rho": rho,
                "finite": finite_rho_moment(p, descriptor, point),
                "limit": moment_poly(p, descriptor),
            }
            for p in run.p_values
        ]
    except Exception as e:
        fail(console, e, verbose)

    emit_rows(rows, run.format, console, title=f"φ(S_ρ(λ)^p): {descriptor}")


@moments_command.command("clt")
def moments_clt(
    cone: str = typer.Option(..., "--cone", help="錐"),
    n_max: int = typer.Option(6, "--n-max", help="最大の n（m_{2n}(0)）"),
    fmt: str | None = typer.Option(None, "--format", "-f", help="pretty | csv | json"),
    config_path: str | None = typer.Option(
        None, "--config", "-c", help="設定ファイルのパス"
    ),
    verbose: bool = typer.Option(False, "--verbose", help="詳細な出力を表示"),
) -> None:
    """中心極限 m_{2n}(0) を漸化式と分割和の 2 通りで表示"""
    try:
        config = load_and_override_config(config_path, fmt)
        rows = clt_table(n_max, ConeDescriptor.parse(cone))
    except Exception as e:
        fail(console, e, verbose)

    emit_rows(rows, config.output.format, console, title=f"m_2n(0): {cone}")
    if not all(row["agree"] for row in rows):
        console.print("[red]漸化式と分割和が一致しません[/red]")
        raise typer.Exit(3)


@moments_command.command("v")
def moments_v(
    partition: str = typer.Option(..., "--partition", help="例: {{1,4},{2,3}}"),
    cone: str = typer.Option(..., "--cone", help="錐"),
    verbose: bool = typer.Option(False, "--verbose", help="詳細な出力を表示"),
) -> None:
    """V(π̃) を表示"""
    try:
        parsed = Partition.parse(partition)
        reduced = reduce(parsed)
        value = V_of(reduced, ConeDescriptor.parse(cone))
    except Exception as e:
        fail(console, e, verbose)

    console.print(f"π̃ = {reduced}")
    console.print(f"V(π̃) = {format_number(value)}")
