"""実行記録のデータベースモデル定義"""

import json
import sqlite3
from collections.abc import Generator
from contextlib import contextmanager
from pathlib import Path
from typing import Any

SCHEMA_VERSION = "1"


class DatabaseManager:
    """SQLiteデータベース管理クラス"""

    def __init__(self, db_path: str | Path):
        self.db_path = Path(db_path)
        self.db_path.parent.mkdir(parents=True, exist_ok=True)

    @contextmanager
    def get_connection(self) -> Generator[sqlite3.Connection, None, None]:
        """データベース接続のコンテキストマネージャ"""
        conn = sqlite3.connect(self.db_path)
        conn.row_factory = sqlite3.Row
        try:
            yield conn
        finally:
            conn.close()

    def initialize_schema(self) -> None:
        """データベーススキーマを初期化"""
        with self.get_connection() as conn:
            # runs テーブル（1 コマンド実行 = 1 行）
            conn.execute("""
                CREATE TABLE IF NOT EXISTS runs (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    command TEXT NOT NULL,
                    cone TEXT,
                    parameters TEXT NOT NULL,  -- JSON
                    duration REAL DEFAULT 0,
                    truncated INTEGER DEFAULT 0,
                    created_at TEXT DEFAULT CURRENT_TIMESTAMP
                )
            """)

            # series_points テーブル（収束列の各点）
            conn.execute("""
                CREATE TABLE IF NOT EXISTS series_points (
                    run_id INTEGER NOT NULL,
                    series TEXT NOT NULL,
                    step INTEGER NOT NULL,
                    rho TEXT NOT NULL,
                    value TEXT NOT NULL,  -- "num/den" または実数表記
                    target TEXT,
                    abs_error REAL,
                    PRIMARY KEY (run_id, series, step),
                    FOREIGN KEY (run_id) REFERENCES runs (id)
                )
            """)

            # verdicts テーブル（印刷値と導出値の判定）
            conn.execute("""
                CREATE TABLE IF NOT EXISTS verdicts (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    run_id INTEGER,
                    subject TEXT NOT NULL,
                    verdict TEXT NOT NULL,  -- 'derived' | 'printed' | 'undecided'
                    derived_value TEXT,
                    printed_value TEXT,
                    detail TEXT,
                    created_at TEXT DEFAULT CURRENT_TIMESTAMP,
                    FOREIGN KEY (run_id) REFERENCES runs (id)
                )
            """)

            # meta テーブル
            conn.execute("""
                CREATE TABLE IF NOT EXISTS meta (
                    key TEXT PRIMARY KEY,
                    value TEXT NOT NULL,
                    updated_at TEXT DEFAULT CURRENT_TIMESTAMP
                )
            """)

            # インデックス作成
            conn.execute(
                "CREATE INDEX IF NOT EXISTS idx_series_points_run_id "
                "ON series_points (run_id)"
            )
            conn.execute(
                "CREATE INDEX IF NOT EXISTS idx_verdicts_subject ON verdicts (subject)"
            )

            conn.execute(
                "INSERT OR REPLACE INTO meta (key, value) VALUES (?, ?)",
                ("schema_version", SCHEMA_VERSION),
            )
            conn.commit()


class BaseModel:
    """データベース操作の基底クラス"""

    def __init__(self, db_manager: DatabaseManager):
        self.db_manager = db_manager

    def _execute_insert_or_replace(
        self, table: str, columns: list[str], data: dict[str, Any]
    ) -> None:
        """INSERT OR REPLACE文の共通実行"""
        placeholders = ", ".join(["?" for _ in columns])
        sql = (
            f"INSERT OR REPLACE INTO {table} "
            f"({', '.join(columns)}) VALUES ({placeholders})"
        )

        values = tuple(data.get(col) for col in columns)

        with self.db_manager.get_connection() as conn:
            conn.execute(sql, values)
            conn.commit()

    def _execute_select_by_run(
        self, table: str, run_id: int, order_by: str = ""
    ) -> list[sqlite3.Row]:
        """run_idでSELECTする共通処理"""
        order_clause = f"ORDER BY {order_by}" if order_by else ""
        sql = f"SELECT * FROM {table} WHERE run_id = ? {order_clause}"  # nosec B608

        with self.db_manager.get_connection() as conn:
            cursor = conn.execute(sql, (run_id,))
            return cursor.fetchall()


class RunModel(BaseModel):
    """実行記録のCRUD操作"""

    def create_run(
        self,
        command: str,
        cone: str | None,
        parameters: dict[str, Any],
        duration: float = 0.0,
        truncated: bool = False,
    ) -> int:
        """実行を記録し、IDを返す"""
        with self.db_manager.get_connection() as conn:
            cursor = conn.execute(
                "INSERT INTO runs (command, cone, parameters, duration, truncated) "
                "VALUES (?, ?, ?, ?, ?)",
                (
                    command,
                    cone,
                    json.dumps(parameters, ensure_ascii=False, sort_keys=True),
                    duration,
                    int(truncated),
                ),
            )
            conn.commit()
            run_id = cursor.lastrowid
        if run_id is None:
            raise RuntimeError("実行記録のIDを取得できませんでした")
        return run_id

    def get_run(self, run_id: int) -> sqlite3.Row | None:
        with self.db_manager.get_connection() as conn:
            cursor = conn.execute("SELECT * FROM runs WHERE id = ?", (run_id,))
            row: sqlite3.Row | None = cursor.fetchone()
            return row


class SeriesModel(BaseModel):
    """収束列の保存と取得"""

    def save_points(self, run_id: int, series: str, rows: list[dict[str, Any]]) -> None:
        columns = ["run_id", "series", "step", "rho", "value", "target", "abs_error"]
        for row in rows:
            self._execute_insert_or_replace(
                "series_points", columns, {**row, "run_id": run_id, "series": series}
            )

    def get_points(self, run_id: int) -> list[sqlite3.Row]:
        return self._execute_select_by_run(
            "series_points", run_id, order_by="series, step"
        )


class VerdictModel(BaseModel):
    """判定のCRUD操作"""

    def save_verdict(self, verdict_data: dict[str, Any]) -> None:
        columns = [
            "run_id",
            "subject",
            "verdict",
            "derived_value",
            "printed_value",
            "detail",
        ]
        self._execute_insert_or_replace("verdicts", columns, verdict_data)

    def get_verdicts(self, subject: str) -> list[sqlite3.Row]:
        """対象名で判定を新しい順に取得"""
        with self.db_manager.get_connection() as conn:
            cursor = conn.execute(
                "SELECT * FROM verdicts WHERE subject = ? ORDER BY id DESC", (subject,)
            )
            return cursor.fetchall()
