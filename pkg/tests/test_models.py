"""models.py のテスト"""

import json

from bm_poisson.models import RunModel, SeriesModel, VerdictModel


class TestDatabaseManager:
    """DatabaseManager のテスト"""

    def test_initialize_schema(self, temp_db):
        """スキーマ初期化のテスト"""
        with temp_db.get_connection() as conn:
            # テーブルが作成されていることを確認（sqlite_sequenceは除外）
            cursor = conn.execute("""
                SELECT name FROM sqlite_master
                WHERE type='table' AND name != 'sqlite_sequence'
                ORDER BY name
            """)
            tables = [row[0] for row in cursor.fetchall()]

            assert tables == ["meta", "runs", "series_points", "verdicts"]

    def test_schema_version(self, temp_db):
        with temp_db.get_connection() as conn:
            row = conn.execute(
                "SELECT value FROM meta WHERE key = 'schema_version'"
            ).fetchone()
            assert row["value"] == "1"

    def test_initialize_twice(self, temp_db):
        """再初期化しても壊れない"""
        temp_db.initialize_schema()
        with temp_db.get_connection() as conn:
            count = conn.execute("SELECT COUNT(*) FROM meta").fetchone()[0]
            assert count == 1


class TestRunModel:
    """RunModel のテスト"""

    def test_create_and_get(self, temp_db):
        """実行記録の作成と取得"""
        run_model = RunModel(temp_db)
        run_id = run_model.create_run(
            "converge ratio",
            "orthant:1",
            {"steps": 5, "partition": "{{1,4},{2,3}}"},
            0.25,
            True,
        )

        row = run_model.get_run(run_id)
        assert row is not None
        assert row["command"] == "converge ratio"
        assert row["cone"] == "orthant:1"
        assert json.loads(row["parameters"]) == {
            "partition": "{{1,4},{2,3}}",
            "steps": 5,
        }
        assert row["duration"] == 0.25
        assert row["truncated"] == 1

    def test_ids_increase(self, temp_db):
        run_model = RunModel(temp_db)
        first = run_model.create_run("a", None, {})
        second = run_model.create_run("b", None, {})
        assert second > first

    def test_get_missing(self, temp_db):
        assert RunModel(temp_db).get_run(999) is None


class TestSeriesModel:
    """SeriesModel のテスト"""

    def test_save_and_get_points(self, temp_db):
        """収束列の保存と取得（step 順）"""
        run_id = RunModel(temp_db).create_run("converge ratio", "orthant:1", {})
        series_model = SeriesModel(temp_db)
        series_model.save_points(
            run_id,
            "ratio",
            [
                {
                    "step": 2,
                    "rho": "2",
                    "value": "1/4",
                    "target": "1/2",
                    "abs_error": 0.25,
                },
                {
                    "step": 1,
                    "rho": "1",
                    "value": "0",
                    "target": "1/2",
                    "abs_error": 0.5,
                },
            ],
        )

        points = series_model.get_points(run_id)
        assert [point["step"] for point in points] == [1, 2]
        assert points[1]["value"] == "1/4"
        assert points[1]["abs_error"] == 0.25

    def test_replace_point(self, temp_db):
        """同じ (run, series, step) は上書き"""
        run_id = RunModel(temp_db).create_run("converge gamma2", "orthant:1", {})
        series_model = SeriesModel(temp_db)
        row = {"step": 1, "rho": "1", "value": "1", "target": "1/2", "abs_error": 0.5}
        series_model.save_points(run_id, "gamma2", [row])
        series_model.save_points(run_id, "gamma2", [{**row, "value": "3/4"}])

        points = series_model.get_points(run_id)
        assert len(points) == 1
        assert points[0]["value"] == "3/4"


class TestVerdictModel:
    """VerdictModel のテスト"""

    def test_save_and_get(self, temp_db):
        """判定は新しい順に取得"""
        verdict_model = VerdictModel(temp_db)
        for verdict in ("printed", "derived"):
            verdict_model.save_verdict(
                {
                    "run_id": None,
                    "subject": "orthant:1 m6 λ^2",
                    "verdict": verdict,
                    "derived_value": "6",
                    "printed_value": "9/2",
                    "detail": "",
                }
            )

        verdicts = verdict_model.get_verdicts("orthant:1 m6 λ^2")
        assert [row["verdict"] for row in verdicts] == ["derived", "printed"]
        assert verdicts[0]["printed_value"] == "9/2"
        assert verdict_model.get_verdicts("other") == []
