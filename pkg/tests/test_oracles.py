"""oracles.py のテスト"""

from unittest.mock import patch

import pytest
from rich.console import Console

from bm_poisson.errors import InfeasibleError
from bm_poisson.oracles import (
    OracleService,
    check_appendix,
    check_clt,
    check_enumeration,
    check_interval_counts,
    check_naive_labellings,
    check_printed_tables,
    check_worked_examples,
)


class TestChecks:
    """個々の照合のテスト"""

    @pytest.mark.parametrize(
        "check",
        [
            check_printed_tables,
            check_worked_examples,
            check_enumeration,
            check_interval_counts,
            check_clt,
            check_appendix,
        ],
    )
    def test_passes(self, check):
        passed, detail = check()
        assert passed, detail

    def test_printed_tables_counts_flagged(self):
        _, detail = check_printed_tables()
        assert "印刷誤り" in detail

    @patch("bm_poisson.oracles.load_printed_tables")
    def test_appendix_printed_mismatch(self, mock_tables):
        """単一作用素の印刷値と食い違えば不合格"""
        mock_tables.return_value = {
            "single_operator": [
                {"p": 3, "printed": {"1": "1"}},
                {"p": 4, "printed": {"2": "2", "0": "1"}},
            ]
        }

        passed, detail = check_appendix()

        assert not passed
        assert "a_4 != 印刷値" in detail
        assert "a_3" not in detail

    def test_naive_labellings(self):
        passed, detail = check_naive_labellings(200_000)
        assert passed, detail
        assert "件一致" in detail

    def test_naive_labellings_cap(self):
        """総当たりの上限を超えると例外"""
        with pytest.raises(InfeasibleError):
            check_naive_labellings(10)


class TestOracleService:
    """OracleService のテスト"""

    def test_names(self, mock_config):
        service = OracleService(mock_config, Console(quiet=True))
        assert list(service.checks) == [
            "printed-tables",
            "worked-examples",
            "enumeration",
            "interval-counts",
            "naive-labellings",
            "fock-equivalence",
            "clt",
            "appendix",
            "operator-identities",
            "volumes",
        ]

    def test_run_selected(self, mock_config):
        service = OracleService(mock_config, Console(quiet=True))

        result = service.run(["enumeration", "clt"])

        assert result["passed"]
        assert [row["name"] for row in result["results"]] == ["enumeration", "clt"]
        assert result["warnings"] == []

    def test_unknown_name(self, mock_config):
        service = OracleService(mock_config, Console(quiet=True))
        with pytest.raises(ValueError):
            service.run(["nonexistent"])

    def test_error_becomes_failure(self, mock_config):
        """計算量超過は不一致として記録"""
        service = OracleService(mock_config, Console(quiet=True))
        with patch.dict(
            service.checks,
            {"clt": lambda: (_ for _ in ()).throw(InfeasibleError("重い", 10, 5))},
        ):
            result = service.run(["clt"])

        assert not result["passed"]
        assert "上限 5" in result["results"][0]["detail"]
        assert result["warnings"] == ["clt: InfeasibleError"]

    def test_verbose(self, mock_config):
        console = Console(record=True, width=120)
        service = OracleService(mock_config, console)

        service.run(["enumeration"], verbose=True)

        assert "enumeration: p ≤ 8 一致" in console.export_text()
