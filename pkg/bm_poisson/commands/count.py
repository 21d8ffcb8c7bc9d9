"""count コマンド - 分割の列挙とラベル付け・格子点の数え上げ"""

import typer
from rich.console import Console

from ..cones import (
    ConeDescriptor,
    density_ratio,
    euclid_volume,
    format_point,
    interval_count,
    monte_carlo_volume,
    parse_point,
)
from ..config import RunConfig
from ..formatting import emit_rows
from ..labellings import count_record
from ..partitions import (
    EpsilonSequence,
    Partition,
    enumerate_pair_inner_singleton,
    epsilon_of_partition,
    partition_of_epsilon,
    reduce,
)
from ..polynomial import format_number
from .common import fail, load_and_override_config

count_command = typer.Typer()
console = Console()


@count_command.command("labellings")
def count_labellings_cmd(
    partition: str = typer.Option(..., "--partition", help="例: {{1,4},{2},{3}}"),
    cone: str = typer.Option(..., "--cone", help="錐"),
    rho: str = typer.Option(..., "--rho", help="ρ"),
    naive: bool = typer.Option(False, "--naive", help="列の総当たりでも数える"),
    max_sequences: int | None = typer.Option(
        None, "--max-sequences", help="総当たりする列数の上限"
    ),
    fmt: str | None = typer.Option(None, "--format", "-f", help="pretty | csv | json"),
    config_path: str | None = typer.Option(
        None, "--config", "-c", help="設定ファイルのパス"
    ),
    verbose: bool = typer.Option(False, "--verbose", help="詳細な出力を表示"),
) -> None:
    """bm 順序ラベル付けの数（nonstrict / strict）と正規化比"""
    try:
        config = load_and_override_config(config_path, fmt)
        run = RunConfig.from_config(
            config, "count labellings", cone=cone, max_sequences=max_sequences
        )
        descriptor = ConeDescriptor.parse(cone)
        record = count_record(
            Partition.parse(partition),
            descriptor,
            parse_point(descriptor, rho),
            naive=naive,
            max_sequences=run.limits.max_sequences,
        )
    except Exception as e:
        fail(console, e, verbose)

    emit_rows([record.to_row()], run.format, console, title="ラベル付け")


@count_command.command("enumerate")
def enumerate_partitions(
    p: int = typer.Option(..., "--p", help="長さ"),
    fmt: str | None = typer.Option(None, "--format", "-f", help="pretty | csv | json"),
    config_path: str | None = typer.Option(
        None, "--config", "-c", help="設定ファイルのパス"
    ),
    verbose: bool = typer.Option(False, "--verbose", help="詳細な出力を表示"),
) -> None:
    """NC₂^{1,i}(p) を ε 列・縮約と共に列挙"""
    try:
        config = load_and_override_config(config_path, fmt)
        partitions = enumerate_pair_inner_singleton(p)
    except Exception as e:
        fail(console, e, verbose)

    rows = [
        {
            "partition": str(part),
            "epsilon": str(epsilon_of_partition(part)),
            "s": part.s,
            "reduced": str(reduce(part)),
        }
        for part in partitions
    ]
    title = f"NC₂^(1,i)({p}): {len(rows)} 件"
    emit_rows(rows, config.output.format, console, title=title)


@count_command.command("epsilon")
def diagnose_epsilon(
    sequence: str = typer.Argument(..., help="ε 列 (例: +0-+-)"),
    verbose: bool = typer.Option(False, "--verbose", help="詳細な出力を表示"),
) -> None:
    """ε 列の許容条件を診断し、対応する分割を表示"""
    try:
        epsilon = EpsilonSequence.parse(sequence)
    except Exception as e:
        fail(console, e, verbose)

    problems = epsilon.violations()
    if problems:
        console.print(f"[red]✗ {epsilon} は許容されません[/red]")
        for problem in problems:
            console.print(f"  - {problem}")
        raise typer.Exit(1)
    console.print(f"[green]✓ {epsilon}[/green]")
    console.print(f"分割: {partition_of_epsilon(epsilon)}")


@count_command.command("interval")
def interval_info(
    cone: str = typer.Option(..., "--cone", help="錐"),
    rho: str = typer.Option(..., "--rho", help="ρ"),
    monte_carlo: bool = typer.Option(
        False, "--monte-carlo", help="モンテカルロ体積推定を併記"
    ),
    seed: int | None = typer.Option(None, "--seed", help="モンテカルロの乱数シード"),
    config_path: str | None = typer.Option(
        None, "--config", "-c", help="設定ファイルのパス"
    ),
    verbose: bool = typer.Option(False, "--verbose", help="詳細な出力を表示"),
) -> None:
    """[0, ρ] の格子点数・体積・密度比"""
    try:
        config = load_and_override_config(config_path)
        run = RunConfig.from_config(config, "count interval", cone=cone, seed=seed)
        descriptor = ConeDescriptor.parse(cone)
        point = parse_point(descriptor, rho)
        count = interval_count(descriptor, point)
        volume = euclid_volume(descriptor, point)
        ratio = density_ratio(descriptor, point)
        estimate = (
            monte_carlo_volume(descriptor, point, config.sampling.samples, run.seed)
            if monte_carlo
            else None
        )
    except Exception as e:
        fail(console, e, verbose)

    label = f"{descriptor} ρ = {format_point(descriptor, point)}"
    console.print(f"[bold blue]{label}[/bold blue]")
    console.print(f"格子点数: {count}")
    console.print(f"体積 v(ρ): {format_number(volume)}")
    console.print(f"密度比: {ratio:.6f}")
    if estimate is not None:
        console.print(
            f"モンテカルロ推定: {estimate:.6f} "
            f"(seed={run.seed}, samples={config.sampling.samples})"
        )
