"""formatting.py のテスト"""

import json
from fractions import Fraction
from io import StringIO

import pytest
from rich.console import Console

from bm_poisson.formatting import emit_rows, parse_lambdas, parse_p_range, to_cell
from bm_poisson.polynomial import RationalPolynomial

M4 = RationalPolynomial({2: 1, 0: Fraction(3, 2)})


class TestToCell:
    """to_cell のテスト"""

    def test_values(self):
        assert to_cell(Fraction(1, 2)) == "1/2"
        assert to_cell(0.25) == "0.25"
        assert to_cell(M4) == "λ^2 + 3/2"
        assert to_cell(True) is True
        assert to_cell(None) is None
        assert to_cell(7) == 7


class TestEmitRows:
    """emit_rows のテスト"""

    def test_json(self, capsys):
        emit_rows([{"p": 4, "moment": M4, "agree": True}], "json", Console())

        data = json.loads(capsys.readouterr().out)
        assert data == [{"p": 4, "moment": {"0": "3/2", "2": "1"}, "agree": True}]

    def test_csv(self, capsys):
        rows = [{"p": 4, "moment": M4}, {"p": 2, "moment": Fraction(1)}]
        emit_rows(rows, "csv", Console())

        assert capsys.readouterr().out == "p,moment\n4,λ^2 + 3/2\n2,1\n"

    def test_pretty(self):
        buffer = StringIO()
        console = Console(file=buffer, width=100)

        rows = [{"p": 4, "moment": M4, "note": None}]
        emit_rows(rows, "pretty", console, title="m_p")

        output = buffer.getvalue()
        assert "m_p" in output
        assert "λ^2 + 3/2" in output

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            emit_rows([], "xml", Console())


class TestParse:
    """引数の解析のテスト"""

    def test_p_range(self):
        assert parse_p_range("1..3") == [1, 2, 3]
        assert parse_p_range("4") == [4]
        assert parse_p_range(" 1,3,5 ") == [1, 3, 5]

    @pytest.mark.parametrize("text", ["3..1", "a", "1..x"])
    def test_p_range_invalid(self, text):
        with pytest.raises(ValueError):
            parse_p_range(text)

    def test_lambdas(self):
        assert parse_lambdas("0,0.5, 2") == [0.0, 0.5, 2.0]
        with pytest.raises(ValueError):
            parse_lambdas("1,x")
