"""CLI エントリーポイントのテスト"""

import json
from unittest.mock import patch

from typer.testing import CliRunner

from bm_poisson.cli import app


class TestApp:
    """トップレベルのコマンド構成のテストクラス"""

    def setup_method(self):
        """各テストメソッドの前に実行"""
        self.runner = CliRunner()

    @patch("bm_poisson.commands.common.load_config")
    def test_moments_without_subcommand(self, mock_load_config, mock_config):
        """moments --cone だけで m_p(λ) の表"""
        mock_load_config.return_value = mock_config

        result = self.runner.invoke(
            app, ["moments", "--cone", "orthant:2", "--p", "4", "-f", "csv"]
        )

        assert result.exit_code == 0
        assert result.stdout == "p,cone,poly\n4,orthant:2,λ^2 + 5/4\n"

    @patch("bm_poisson.commands.common.load_config")
    def test_moments_compare_option(self, mock_load_config, mock_config):
        """--compare-paper で印刷表との照合を併記"""
        mock_load_config.return_value = mock_config

        result = self.runner.invoke(
            app,
            [
                "moments",
                "--cone",
                "orthant:1",
                "--p",
                "6",
                "--compare-paper",
                "-f",
                "json",
            ],
        )

        assert result.exit_code == 0
        rows = json.loads(result.stdout)
        assert rows[0]["status"] == "MISMATCH"
        assert rows[0]["printed"]["2"] == "9/2"

    def test_moments_without_cone(self):
        """--cone もサブコマンドもなければ終了コード 1"""
        result = self.runner.invoke(app, ["moments"])

        assert result.exit_code == 1

    @patch("bm_poisson.commands.common.load_config")
    def test_fock_moment_exact(self, mock_load_config, mock_config):
        """fock-moment --exact は λ での値を有理数で比べる"""
        mock_load_config.return_value = mock_config

        result = self.runner.invoke(
            app,
            [
                "fock-moment",
                "--cone",
                "orthant:1",
                "--rho",
                "4",
                "--p",
                "6",
                "--lambda",
                "1.5",
                "--exact",
            ],
        )

        assert result.exit_code == 0
        assert result.stdout == "p,fock,combinatorial,agree\n6,605/32,605/32,True\n"

    @patch("bm_poisson.commands.common.load_config")
    def test_fock_moment_poly(self, mock_load_config, mock_config):
        """--poly で λ 多項式の列が加わる"""
        mock_load_config.return_value = mock_config

        result = self.runner.invoke(
            app,
            [
                "fock-moment",
                "--cone",
                "orthant:1",
                "--rho",
                "3",
                "--p",
                "2",
                "--lambda",
                "1.5",
                "--poly",
                "-f",
                "json",
            ],
        )

        assert result.exit_code == 0
        rows = json.loads(result.stdout)
        assert rows[0]["poly"] == {"0": "1"}
        assert rows[0]["agree"] is True

    def test_fock_check(self):
        """fock-check は fock check と同じ検査"""
        result = self.runner.invoke(
            app,
            ["fock-check", "--cone", "orthant:2", "--rho", "2,2", "--max-length", "3"],
        )

        assert result.exit_code == 0
        assert "すべての検査に合格" in result.stdout
