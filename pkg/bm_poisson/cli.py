"""CLI エントリーポイント"""

import typer  # pragma: no cover
from rich.console import Console  # pragma: no cover

from .commands.appendix import appendix_command  # pragma: no cover
from .commands.check import check_command  # pragma: no cover
from .commands.converge import converge_command  # pragma: no cover
from .commands.count import count_command  # pragma: no cover
from .commands.fock import fock_check, fock_command, fock_moment  # pragma: no cover
from .commands.moments import moments_command  # pragma: no cover

app = typer.Typer(
    help="錐に添字付けられた bm 独立性のポアソン型極限モーメント計算ツール"
)  # pragma: no cover
console = Console()  # pragma: no cover

# サブコマンドを追加
app.add_typer(
    moments_command, name="moments", help="極限モーメントの表"
)  # pragma: no cover
app.add_typer(
    count_command, name="count", help="分割・ラベル付け・格子点の数え上げ"
)  # pragma: no cover
app.add_typer(
    converge_command, name="converge", help="ρ → ∞ の収束列"
)  # pragma: no cover
app.add_typer(
    appendix_command, name="appendix", help="単一作用素の法則"
)  # pragma: no cover
app.add_typer(
    fock_command, name="fock", help="Fock 空間モデル"
)  # pragma: no cover
app.add_typer(
    check_command, name="check", help="設定と照合の確認"
)  # pragma: no cover

# fock moment / fock check の短縮形
app.command("fock-moment")(fock_moment)  # pragma: no cover
app.command("fock-check")(fock_check)  # pragma: no cover


def main_entry() -> None:  # pragma: no cover
    """メインエントリーポイント"""
    app()  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    main_entry()  # pragma: no cover
