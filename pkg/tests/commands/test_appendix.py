"""appendix コマンドのテスト"""

import json
from unittest.mock import patch

from typer.testing import CliRunner

from bm_poisson.commands.appendix import appendix_command


class TestAppendixCommand:
    """appendix コマンドのテストクラス"""

    def setup_method(self):
        """各テストメソッドの前に実行"""
        self.runner = CliRunner()

    @patch("bm_poisson.commands.common.load_config")
    def test_table(self, mock_load_config, mock_config):
        """λ = 1 では Fibonacci 数"""
        mock_load_config.return_value = mock_config

        result = self.runner.invoke(
            appendix_command, ["table", "--p", "4..6", "--lambda", "0,1", "-f", "json"]
        )

        assert result.exit_code == 0
        rows = json.loads(result.stdout)
        assert [row["λ=1"] for row in rows] == ["2", "3", "5"]
        assert [row["λ=0"] for row in rows] == ["1", "0", "1"]
        assert rows[2]["a_p"] == {"4": "1", "2": "3", "0": "1"}

    @patch("bm_poisson.commands.common.load_config")
    def test_table_bad_lambda(self, mock_load_config, mock_config):
        mock_load_config.return_value = mock_config

        result = self.runner.invoke(appendix_command, ["table", "--lambda", "a"])

        assert result.exit_code == 1

    def test_measure(self):
        """ν₀ は ±1 に重み 1/2"""
        result = self.runner.invoke(appendix_command, ["measure", "--lambda", "0"])

        assert result.exit_code == 0
        assert "x₁ = 1, p₁ = 0.5" in result.stdout
        assert "x₂ = -1, p₂ = 0.5" in result.stdout

    def test_measure_negative(self):
        result = self.runner.invoke(appendix_command, ["measure", "--lambda=-1"])

        assert result.exit_code == 1
        assert "エラー" in result.stdout

    def test_transform(self):
        result = self.runner.invoke(
            appendix_command, ["transform", "--lambda", "0", "--x", "0.5"]
        )

        assert result.exit_code == 0
        assert "M_λ(x) = 1.33333333333" in result.stdout
        assert "G_λ(x) = 0.666666666667" in result.stdout

    def test_transform_pole(self):
        """M_0 の極 x = 1"""
        result = self.runner.invoke(
            appendix_command, ["transform", "--lambda", "0", "--x", "1"]
        )

        assert result.exit_code == 1
        assert "エラー" in result.stdout
