"""fock コマンド - 単調 Fock 空間上の作用素モデル"""

from fractions import Fraction
from typing import Any

import typer
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from ..cones import ConeDescriptor, ConePoint, format_point, parse_point
from ..config import RunConfig
from ..fock import (
    IndependenceReport,
    RelationReport,
    check_relations,
    check_self_adjoint,
    run_bm_presets,
    vacuum_moment,
    vacuum_moment_poly,
)
from ..formatting import emit_rows, parse_lambdas, parse_p_range
from ..moments import finite_rho_moment
from .common import EXIT_MISMATCH, fail, load_and_override_config

fock_command = typer.Typer()
console = Console()


def _real_agree(value: float, expected: float) -> bool:
    return abs(value - expected) <= 1e-9 * max(1.0, abs(expected))


def _moment_rows(
    run: RunConfig, cone: ConeDescriptor, point: ConePoint
) -> list[dict[str, Any]]:
    """記号モードは λ 多項式、λ 指定時は λ ごとに 1 行（exact なら有理数で評価）"""
    max_states = run.limits.max_states
    rows: list[dict[str, Any]] = []
    for p in run.p_values:
        combinatorial = finite_rho_moment(p, cone, point)
        fock_poly = None
        if run.symbolic or run.exact:
            fock_poly = vacuum_moment_poly(cone, point, p, max_states)
        if not run.lambdas:
            rows.append(
                {
                    "p": p,
                    "fock": fock_poly,
                    "combinatorial": combinatorial,
                    "agree": fock_poly == combinatorial,
                }
            )
            continue
        for lam in run.lambdas:
            row: dict[str, Any] = {"p": p}
            if len(run.lambdas) > 1:
                row["λ"] = lam
            if run.exact and fock_poly is not None:
                x = Fraction(str(lam))
                row["fock"] = fock_poly.evaluate(x)
                row["combinatorial"] = combinatorial.evaluate(x)
                agree = row["fock"] == row["combinatorial"]
            else:
                value = vacuum_moment(cone, point, lam, p, max_states)
                expected = float(combinatorial.evaluate(lam))
                row["fock"] = value
                row["combinatorial"] = expected
                agree = _real_agree(value, expected)
                if fock_poly is not None:
                    agree = agree and fock_poly == combinatorial
            if run.symbolic and fock_poly is not None:
                row["poly"] = fock_poly
            row["agree"] = agree
            rows.append(row)
    return rows


@fock_command.command("moment")
def fock_moment(
    cone: str = typer.Option(..., "--cone", help="錐"),
    rho: str = typer.Option(..., "--rho", help="ρ"),
    p_range: str = typer.Option("1..6", "--p", help="次数"),
    lambdas: str | None = typer.Option(
        None, "--lambda", help="λ を与えると数値で評価 (例: 1.5, 0,1,2)"
    ),
    exact: bool = typer.Option(
        False, "--exact", help="λ での値を有理数のまま計算"
    ),
    poly: bool = typer.Option(False, "--poly", help="λ 多項式も併記"),
    max_states: int | None = typer.Option(
        None, "--max-states", help="Fock 状態数の上限"
    ),
    fmt: str | None = typer.Option(None, "--format", "-f", help="pretty | csv | json"),
    config_path: str | None = typer.Option(
        None, "--config", "-c", help="設定ファイルのパス"
    ),
    verbose: bool = typer.Option(False, "--verbose", help="詳細な出力を表示"),
) -> None:
    """⟨S_ρ(λ)^p Ω, Ω⟩ を Fock 空間で計算し、組合せ公式と並べる"""
    try:
        config = load_and_override_config(config_path, fmt)
        values = parse_lambdas(lambdas) if lambdas is not None else []
        run = RunConfig.from_config(
            config,
            "fock moment",
            cone=cone,
            p_values=parse_p_range(p_range),
            lambdas=values,
            symbolic=not values or poly,
            exact=exact,
            max_states=max_states,
        )
        descriptor = ConeDescriptor.parse(cone)
        point = parse_point(descriptor, rho)
        if any(p < 1 for p in run.p_values):
            raise ValueError(f"p は 1 以上: {p_range}")
        rows = _moment_rows(run, descriptor, point)
    except Exception as e:
        fail(console, e, verbose)

    title = f"Fock: {descriptor} ρ = {format_point(descriptor, point)}"
    if len(run.lambdas) == 1:
        title += f", λ = {run.lambdas[0]:g}"
    emit_rows(rows, run.format, console, title=title)
    if not all(row["agree"] for row in rows):
        console.print("[red]Fock 計算と組合せ公式が一致しません[/red]")
        raise typer.Exit(EXIT_MISMATCH)


def _relation_table(title: str, report: RelationReport) -> Table:
    table = Table(title=title)
    table.add_column("恒等式", style="blue")
    table.add_column("検査数", style="yellow", justify="right")
    for name, count in report.checked.items():
        table.add_row(name, str(count))
    return table


def _independence_table(reports: list[IndependenceReport]) -> Table:
    table = Table(title="bm 独立性")
    table.add_column("種別", style="blue")
    table.add_column("配置", style="cyan")
    table.add_column("点")
    table.add_column("元")
    table.add_column("結果", style="green")
    for report in reports:
        table.add_row(
            report.kind,
            report.pattern,
            ", ".join(format_point(report.cone, point) for point in report.points),
            " · ".join(report.words),
            "✓" if report.passed else "[red]✗[/red]",
        )
    return table


@fock_command.command("check")
def fock_check(
    cone: str = typer.Option(..., "--cone", help="錐"),
    rho: str = typer.Option(..., "--rho", help="ρ"),
    lam: float = typer.Option(1.0, "--lambda", help="自己共役性の検査に使う λ"),
    max_length: int = typer.Option(4, "--max-length", help="基底鎖の最大長"),
    verbose: bool = typer.Option(False, "--verbose", help="詳細な出力を表示"),
) -> None:
    """作用素恒等式・自己共役性・bm 独立性を検査"""
    try:
        descriptor = ConeDescriptor.parse(cone)
        point = parse_point(descriptor, rho)
        relations = check_relations(descriptor, point, max_length)
        adjoint = check_self_adjoint(descriptor, point, lam, min(max_length, 3))
        independence = run_bm_presets(descriptor, point, max_length)
    except Exception as e:
        fail(console, e, verbose)

    label = f"{descriptor} ρ = {format_point(descriptor, point)}"
    console.print(f"[bold blue]{label}[/bold blue]")
    console.print(_relation_table("作用素恒等式", relations))
    console.print(_relation_table("自己共役性", adjoint))
    console.print(_independence_table(independence))

    violations = relations.violations + adjoint.violations
    for report in independence:
        violations.extend(report.violations)
    if violations:
        shown = violations if verbose else violations[:5]
        console.print(
            Panel(
                "\n".join(f"[red]✗ {v}[/red]" for v in shown),
                title=f"違反 {len(violations)} 件",
                border_style="red",
            )
        )
        raise typer.Exit(EXIT_MISMATCH)
    console.print(
        Panel("[bold green]✓ すべての検査に合格[/bold green]", title="結果", border_style="green")
    )
