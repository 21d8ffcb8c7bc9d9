"""コマンド共通の処理"""

from typing import NoReturn

import typer
from rich.console import Console

from ..config import Config, OutputConfig, load_config
from ..errors import InfeasibleError, OracleMismatchError

EXIT_INVALID = 1
EXIT_INFEASIBLE = 2
EXIT_MISMATCH = 3


def load_and_override_config(
    config_path: str | None,
    fmt: str | None = None,
    db_path: str | None = None,
) -> Config:
    """設定を読み込み、コマンドライン引数で上書き"""
    config = load_config(config_path)

    if fmt or db_path:
        config.output = OutputConfig(
            format=fmt or config.output.format,  # type: ignore[arg-type]
            db_path=db_path or config.output.db_path,
        )

    return config


def exit_code_for(error: Exception) -> int:
    if isinstance(error, InfeasibleError):
        return EXIT_INFEASIBLE
    if isinstance(error, OracleMismatchError):
        return EXIT_MISMATCH
    return EXIT_INVALID


def fail(console: Console, error: Exception, verbose: bool = False) -> NoReturn:
    """エラーを表示し、種類に応じた終了コードで終了"""
    console.print(f"\n[red]エラー: {str(error)}[/red]")
    if verbose:
        console.print_exception()
    raise typer.Exit(exit_code_for(error)) from error
