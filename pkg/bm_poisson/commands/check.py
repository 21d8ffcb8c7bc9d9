"""確認コマンド"""

import typer
from rich.console import Console
from rich.panel import Panel
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table

from ..config import RunConfig, load_config
from ..oracles import OracleService
from .common import EXIT_MISMATCH, fail, load_and_override_config

check_command = typer.Typer()
console = Console()


@check_command.command("config")
def check_config(
    config_path: str | None = typer.Option(
        None, "--config", "-c", help="設定ファイルのパス"
    ),
) -> None:
    """設定ファイルの確認"""

    config = load_config(config_path)

    console.print("[bold blue]設定確認[/bold blue]")

    # 計算量の上限
    limits_table = Table(title="上限設定")
    limits_table.add_column("項目", style="blue")
    limits_table.add_column("値", style="green")

    limits_table.add_row("列の総当たり", f"{config.limits.max_sequences:,}")
    limits_table.add_row("Fock 状態数", f"{config.limits.max_states:,}")
    limits_table.add_row("区間の格子点数", f"{config.limits.max_interval:,}")

    console.print(limits_table)

    # サンプリング
    sampling_table = Table(title="サンプリング設定")
    sampling_table.add_column("項目", style="blue")
    sampling_table.add_column("値", style="green")

    sampling_table.add_row("Seed", str(config.sampling.seed))
    sampling_table.add_row("サンプル数", f"{config.sampling.samples:,}")

    console.print(sampling_table)

    # ρ 列
    schedule_table = Table(title="ρ 列の設定")
    schedule_table.add_column("項目", style="blue")
    schedule_table.add_column("値", style="green")

    schedule_table.add_row("長さ", str(config.schedule.steps))
    schedule_table.add_row("初項", str(config.schedule.start))
    schedule_table.add_row("刻み", str(config.schedule.stride))

    console.print(schedule_table)

    # 出力
    output_table = Table(title="出力設定")
    output_table.add_column("項目", style="blue")
    output_table.add_column("値", style="green")

    output_table.add_row("形式", config.output.format)
    output_table.add_row("データベース", config.output.db_path)

    console.print(output_table)


@check_command.command("oracles")
def check_oracles(
    only: list[str] | None = typer.Option(
        None, "--only", help="実行する照合（複数指定可）"
    ),
    seed: int | None = typer.Option(None, "--seed", help="モンテカルロの乱数シード"),
    max_states: int | None = typer.Option(
        None, "--max-states", help="Fock 状態数の上限"
    ),
    max_sequences: int | None = typer.Option(
        None, "--max-sequences", help="総当たりする列数の上限"
    ),
    config_path: str | None = typer.Option(
        None, "--config", "-c", help="設定ファイルのパス"
    ),
    verbose: bool = typer.Option(False, "--verbose", help="詳細な出力を表示"),
) -> None:
    """既知の値・独立な計算経路との照合を実行"""
    try:
        config = load_and_override_config(config_path)
        run = RunConfig.from_config(
            config,
            "check oracles",
            seed=seed,
            max_states=max_states,
            max_sequences=max_sequences,
        )
        service = OracleService(run.to_config(config), console)
        with Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            console=console,
            transient=True,
        ) as progress:
            task = progress.add_task("照合中...", total=None)
            result = service.run(only or None, verbose, progress, task)
            progress.update(task, description="照合完了")
    except Exception as e:
        fail(console, e, verbose)

    table = Table(title="照合結果")
    table.add_column("照合", style="blue")
    table.add_column("結果")
    table.add_column("詳細")
    table.add_column("時間", style="yellow", justify="right")
    for item in result["results"]:
        table.add_row(
            item["name"],
            "[green]✓[/green]" if item["passed"] else "[red]✗[/red]",
            item["detail"],
            f"{item['duration']:.2f}秒",
        )
    console.print(table)

    if result["warnings"]:
        console.print("\n[yellow]警告:[/yellow]")
        for warning in result["warnings"]:
            console.print(f"  - {warning}")

    if not result["passed"]:
        console.print(
            Panel("[bold red]✗ 不一致があります[/bold red]", title="結果", border_style="red")
        )
        raise typer.Exit(EXIT_MISMATCH)
    console.print(
        Panel(
            f"[bold green]✓ すべて一致 ({result['duration']:.2f}秒)[/bold green]",
            title="結果",
            border_style="green",
        )
    )
