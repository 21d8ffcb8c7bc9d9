"""appendix コマンド - 単一作用素 A⁺ + A⁻ + λA° の法則"""

from fractions import Fraction

import typer
from rich.console import Console

from ..formatting import emit_rows, parse_lambdas, parse_p_range
from ..moments import (
    appendix_a,
    appendix_measure,
    appendix_transforms,
    measure_cauchy_transform,
)
from .common import fail, load_and_override_config

appendix_command = typer.Typer()
console = Console()


@appendix_command.command("table")
def appendix_table(
    p_range: str = typer.Option("0..6", "--p", help="次数"),
    lambdas: str = typer.Option("1", "--lambda", help="評価する λ (例: 0,1,2)"),
    fmt: str | None = typer.Option(None, "--format", "-f", help="pretty | csv | json"),
    config_path: str | None = typer.Option(
        None, "--config", "-c", help="設定ファイルのパス"
    ),
    verbose: bool = typer.Option(False, "--verbose", help="詳細な出力を表示"),
) -> None:
    """a_p(λ)（分割和・漸化式・転送行列の一致を確認済み）"""
    try:
        config = load_and_override_config(config_path, fmt)
        values = parse_lambdas(lambdas)
        rows = []
        for p in parse_p_range(p_range):
            poly = appendix_a(p)
            row = {"p": p, "a_p": poly}
            for lam in values:
                row[f"λ={lam:g}"] = poly.evaluate(Fraction(str(lam)))
            rows.append(row)
    except Exception as e:
        fail(console, e, verbose)

    emit_rows(rows, config.output.format, console, title="a_p(λ)")


@appendix_command.command("measure")
def appendix_measure_cmd(
    lam: float = typer.Option(..., "--lambda", help="λ ≥ 0"),
    verbose: bool = typer.Option(False, "--verbose", help="詳細な出力を表示"),
) -> None:
    """2 点測度 ν_λ の原子と重み"""
    try:
        measure = appendix_measure(lam)
    except Exception as e:
        fail(console, e, verbose)

    console.print(f"[bold blue]ν_{lam:g}[/bold blue]")
    console.print(f"x₁ = {measure.x1:.12g}, p₁ = {measure.p1:.12g}")
    console.print(f"x₂ = {measure.x2:.12g}, p₂ = {measure.p2:.12g}")


@appendix_command.command("transform")
def appendix_transform_cmd(
    lam: float = typer.Option(..., "--lambda", help="λ"),
    x: float = typer.Option(..., "--x", help="評価点"),
    verbose: bool = typer.Option(False, "--verbose", help="詳細な出力を表示"),
) -> None:
    """M_λ(x)、G_λ(x)（記載式）と ν_λ の Cauchy 変換"""
    try:
        m_value, g_value = appendix_transforms(lam, x)
        cauchy = measure_cauchy_transform(lam, x)
    except Exception as e:
        fail(console, e, verbose)

    console.print(f"M_λ(x) = {m_value.real:.12g}")
    console.print(f"G_λ(x) = {g_value.real:.12g}")
    console.print(f"ν_λ の Cauchy 変換 = {cauchy.real:.12g}")
