"""converge コマンドのテスト"""

import json
from unittest.mock import patch

from typer.testing import CliRunner

from bm_poisson.commands.converge import converge_command
from bm_poisson.models import DatabaseManager, SeriesModel, VerdictModel
from bm_poisson.study import ADJUDICATION_SUBJECT


class TestConvergeCommand:
    """converge コマンドのテストクラス"""

    def setup_method(self):
        """各テストメソッドの前に実行"""
        self.runner = CliRunner()

    @patch("bm_poisson.commands.common.load_config")
    def test_ratio_csv(self, mock_load_config, mock_config):
        """(n-1)/(2n) の列"""
        mock_load_config.return_value = mock_config

        result = self.runner.invoke(
            converge_command,
            [
                "ratio",
                "--partition",
                "{{1,4},{2,3}}",
                "--cone",
                "orthant:1",
                "--steps",
                "3",
            ],
        )

        assert result.exit_code == 0
        assert "step,rho,value,target,abs_error" in result.stdout
        assert "2,2,1/4,1/2,0.25" in result.stdout
        assert "3,3,1/3,1/2,0.166666666667" in result.stdout

    @patch("bm_poisson.commands.common.load_config")
    def test_ratio_truncated(self, mock_load_config, mock_config):
        """区間の上限を超えたら TRUNCATED 行を付ける"""
        mock_config.limits.max_interval = 10
        mock_load_config.return_value = mock_config

        result = self.runner.invoke(
            converge_command,
            [
                "ratio",
                "--partition",
                "{{1,4},{2,3}}",
                "--cone",
                "orthant:2",
                "--steps",
                "5",
                "-f",
                "json",
            ],
        )

        assert result.exit_code == 0
        rows = json.loads(result.stdout)
        assert len(rows) == 4
        assert rows[-1]["step"] == "TRUNCATED"
        assert rows[-1]["value"] is None

    @patch("bm_poisson.commands.common.load_config")
    def test_moment_saved(self, mock_load_config, mock_config, tmp_path):
        """--db 指定で収束列を保存"""
        mock_load_config.return_value = mock_config
        db_path = str(tmp_path / "runs.db")

        result = self.runner.invoke(
            converge_command,
            [
                "moment",
                "--p",
                "4",
                "--cone",
                "orthant:1",
                "--steps",
                "3",
                "--db",
                db_path,
            ],
        )

        assert result.exit_code == 0
        assert "3,3,4/3,3/2" in result.stdout
        points = SeriesModel(DatabaseManager(db_path)).get_points(1)
        assert [point["value"] for point in points] == ["1", "5/4", "4/3"]

    @patch("bm_poisson.commands.common.load_config")
    def test_gamma_pretty(self, mock_load_config, mock_config):
        mock_load_config.return_value = mock_config

        result = self.runner.invoke(
            converge_command,
            ["gamma", "--cone", "orthant:1", "--steps", "4", "-f", "pretty"],
        )

        assert result.exit_code == 0
        assert "目標値: 1/2" in result.stdout
        assert "処理時間" in result.stdout

    @patch("bm_poisson.commands.common.load_config")
    def test_too_few_steps(self, mock_load_config, mock_config):
        mock_load_config.return_value = mock_config

        result = self.runner.invoke(
            converge_command, ["gamma", "--cone", "orthant:1", "--steps", "1"]
        )

        assert result.exit_code == 1
        assert "エラー" in result.stdout

    @patch("bm_poisson.commands.common.load_config")
    def test_adjudicate(self, mock_load_config, mock_config, tmp_path):
        """判定を表示して verdicts に保存"""
        mock_load_config.return_value = mock_config
        db_path = str(tmp_path / "verdicts.db")

        result = self.runner.invoke(
            converge_command,
            ["adjudicate", "--rho-max", "6", "--fock-max", "2", "--db", db_path],
        )

        assert result.exit_code == 0
        assert "導出値: 6" in result.stdout
        assert "印刷値: 9/2" in result.stdout
        assert "判定: derived" in result.stdout
        verdicts = VerdictModel(DatabaseManager(db_path)).get_verdicts(
            ADJUDICATION_SUBJECT
        )
        assert len(verdicts) == 1

    @patch("bm_poisson.commands.common.load_config")
    def test_ratio_schedule_options(self, mock_load_config, mock_config):
        """--start / --stride で ρ 列を指定"""
        mock_load_config.return_value = mock_config

        result = self.runner.invoke(
            converge_command,
            [
                "ratio",
                "--partition",
                "{{1,4},{2,3}}",
                "--cone",
                "orthant:1",
                "--steps",
                "2",
                "--start",
                "2",
                "--stride",
                "2",
            ],
        )

        assert result.exit_code == 0
        assert "1,2,1/4,1/2,0.25" in result.stdout
        assert "2,4,3/8,1/2,0.125" in result.stdout

    @patch("bm_poisson.commands.common.load_config")
    def test_gamma_max_interval_option(self, mock_load_config, mock_config):
        """--max-interval が設定ファイルの上限より優先"""
        mock_load_config.return_value = mock_config

        result = self.runner.invoke(
            converge_command,
            [
                "gamma",
                "--cone",
                "orthant:2",
                "--steps",
                "5",
                "--max-interval",
                "10",
                "-f",
                "json",
            ],
        )

        assert result.exit_code == 0
        rows = json.loads(result.stdout)
        assert [row["step"] for row in rows] == [1, 2, 3, "TRUNCATED"]
        assert mock_config.limits.max_interval == 500

    @patch("bm_poisson.commands.common.load_config")
    def test_show_series(self, mock_load_config, mock_config, tmp_path):
        """保存した収束列を run_id で読み出す"""
        mock_load_config.return_value = mock_config
        db_path = str(tmp_path / "runs.db")
        self.runner.invoke(
            converge_command,
            [
                "moment",
                "--p",
                "4",
                "--cone",
                "orthant:1",
                "--steps",
                "3",
                "--db",
                db_path,
            ],
        )

        result = self.runner.invoke(
            converge_command, ["show", "--run-id", "1", "--db", db_path]
        )

        assert result.exit_code == 0
        assert "step,rho,value,target,abs_error" in result.stdout
        assert "3,3,4/3,3/2,0.166666666667" in result.stdout

    @patch("bm_poisson.commands.common.load_config")
    def test_show_adjudication(self, mock_load_config, mock_config, tmp_path):
        """判定の実行は判定行も表示"""
        mock_load_config.return_value = mock_config
        db_path = str(tmp_path / "verdicts.db")
        self.runner.invoke(
            converge_command,
            ["adjudicate", "--rho-max", "6", "--fock-max", "2", "--db", db_path],
        )

        result = self.runner.invoke(
            converge_command,
            ["show", "--run-id", "1", "--db", db_path, "-f", "pretty"],
        )

        assert result.exit_code == 0
        assert "converge adjudicate" in result.stdout
        assert "rho_max = 6" in result.stdout
        assert "判定: derived" in result.stdout

    @patch("bm_poisson.commands.common.load_config")
    def test_show_missing_db(self, mock_load_config, mock_config, tmp_path):
        """データベースがなければ終了コード 1"""
        mock_load_config.return_value = mock_config

        result = self.runner.invoke(
            converge_command,
            ["show", "--run-id", "1", "--db", str(tmp_path / "none.db")],
        )

        assert result.exit_code == 1
        assert not (tmp_path / "none.db").exists()

    @patch("bm_poisson.commands.common.load_config")
    def test_show_missing_run(self, mock_load_config, mock_config, temp_db):
        """存在しない run_id は終了コード 1"""
        mock_load_config.return_value = mock_config

        result = self.runner.invoke(
            converge_command,
            ["show", "--run-id", "42", "--db", str(temp_db.db_path)],
        )

        assert result.exit_code == 1
        assert "存在しません" in result.stdout
