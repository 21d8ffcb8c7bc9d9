"""moments コマンドのテスト"""

import json
from unittest.mock import patch

from typer.testing import CliRunner

from bm_poisson.commands.moments import moments_command


class TestMomentsCommand:
    """moments コマンドのテストクラス"""

    def setup_method(self):
        """各テストメソッドの前に実行"""
        self.runner = CliRunner()

    @patch("bm_poisson.commands.common.load_config")
    def test_table_csv(self, mock_load_config, mock_config):
        """設定ファイルの形式（csv）で出力"""
        mock_load_config.return_value = mock_config

        result = self.runner.invoke(
            moments_command, ["table", "--cone", "orthant:1", "--p", "4..5"]
        )

        assert result.exit_code == 0
        assert result.stdout == (
            "p,cone,poly\n4,orthant:1,λ^2 + 3/2\n5,orthant:1,λ^3 + 7/2·λ\n"
        )
        mock_load_config.assert_called_once_with(None)

    @patch("bm_poisson.commands.common.load_config")
    def test_table_compare_printed(self, mock_load_config, mock_config):
        """印刷表と異なる項目は MISMATCH"""
        mock_load_config.return_value = mock_config

        result = self.runner.invoke(
            moments_command,
            [
                "table",
                "--cone",
                "orthant:1",
                "--p",
                "5,6",
                "--compare-printed",
                "-f",
                "json",
            ],
        )

        assert result.exit_code == 0
        rows = json.loads(result.stdout)
        assert [row["status"] for row in rows] == ["match", "MISMATCH"]
        assert rows[1]["poly"]["2"] == "6"
        assert rows[1]["printed"]["2"] == "9/2"

    @patch("bm_poisson.commands.common.load_config")
    def test_table_invalid_cone(self, mock_load_config, mock_config):
        mock_load_config.return_value = mock_config

        result = self.runner.invoke(moments_command, ["table", "--cone", "cube:3"])

        assert result.exit_code == 1
        assert "エラー" in result.stdout

    @patch("bm_poisson.commands.common.load_config")
    def test_finite(self, mock_load_config, mock_config):
        """ρ = 3 の m₄ は λ² + 4/3"""
        mock_load_config.return_value = mock_config

        result = self.runner.invoke(
            moments_command, ["finite", "--cone", "orthant:1", "--rho", "3", "--p", "4"]
        )

        assert result.exit_code == 0
        assert "4,3,λ^2 + 4/3,λ^2 + 3/2" in result.stdout

    @patch("bm_poisson.commands.common.load_config")
    def test_clt(self, mock_load_config, mock_config):
        mock_load_config.return_value = mock_config

        result = self.runner.invoke(
            moments_command, ["clt", "--cone", "orthant:1", "--n-max", "2"]
        )

        assert result.exit_code == 0
        assert "2,3/2,3/2,True" in result.stdout

    def test_v(self):
        """シングルトンは縮約で消える"""
        result = self.runner.invoke(
            moments_command,
            ["v", "--partition", "{{1,4},{2},{3}}", "--cone", "orthant:1"],
        )

        assert result.exit_code == 0
        assert "π̃ = {{1,2}}" in result.stdout
        assert "V(π̃) = 1" in result.stdout

    def test_v_nested(self):
        result = self.runner.invoke(
            moments_command,
            ["v", "--partition", "{{1,4},{2,3}}", "--cone", "orthant:1"],
        )

        assert result.exit_code == 0
        assert "V(π̃) = 1/2" in result.stdout

    def test_v_crossing(self):
        """交差する分割は入力エラー"""
        result = self.runner.invoke(
            moments_command,
            ["v", "--partition", "{{1,3},{2,4}}", "--cone", "orthant:2"],
        )

        assert result.exit_code == 1
        assert "エラー" in result.stdout
