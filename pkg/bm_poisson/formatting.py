"""表形式の出力（pretty / csv / json）と引数の解析"""

import json
from fractions import Fraction
from typing import Any

import pandas as pd
import typer
from rich.console import Console
from rich.table import Table

from .polynomial import RationalPolynomial, format_number


def to_cell(value: Any) -> Any:
    """有理数は "num/den"、多項式は文字列に"""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (Fraction, float)):
        return format_number(value)
    if isinstance(value, RationalPolynomial):
        return str(value)
    return value


def to_json_value(value: Any) -> Any:
    if isinstance(value, RationalPolynomial):
        return value.to_json()
    return to_cell(value)


def emit_rows(
    rows: list[dict[str, Any]],
    fmt: str,
    console: Console,
    title: str | None = None,
) -> None:
    """行の列を指定形式で出力。csv/json は markup を避けて typer.echo で書く"""
    if fmt == "json":
        typer.echo(
            json.dumps(
                [{k: to_json_value(v) for k, v in row.items()} for row in rows],
                ensure_ascii=False,
                indent=2,
            )
        )
        return
    if fmt == "csv":
        frame = pd.DataFrame([{k: to_cell(v) for k, v in row.items()} for row in rows])
        typer.echo(frame.to_csv(index=False), nl=False)
        return
    if fmt != "pretty":
        raise ValueError(f"未知の出力形式です: {fmt}")

    table = Table(title=title)
    columns = list(rows[0]) if rows else []
    for i, column in enumerate(columns):
        table.add_column(column, style="yellow" if i == 0 else "")
    for row in rows:
        table.add_row(*(("" if v is None else str(to_cell(v))) for v in row.values()))
    console.print(table)


def parse_p_range(text: str) -> list[int]:
    """ "1..6" / "4" / "1,3,5" """
    text = text.strip()
    try:
        if ".." in text:
            start, _, end = text.partition("..")
            lo, hi = int(start), int(end)
            if lo > hi:
                raise ValueError(f"範囲が逆順です: {text}")
            return list(range(lo, hi + 1))
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ValueError(f"p の指定が不正です: {text!r}") from e


def parse_lambdas(text: str) -> list[float]:
    """ "0,0.5,1" """
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ValueError(f"λ の指定が不正です: {text!r}") from e
