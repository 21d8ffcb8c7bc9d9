"""ρ → ∞ の収束列を計算するサービス"""

import json
import time
from collections.abc import Callable
from fractions import Fraction
from typing import Any

from rich.console import Console
from rich.progress import Progress

from .cones import (
    ConeDescriptor,
    ConePoint,
    format_point,
    gamma_closed,
    gamma_estimate,
    interval_count,
    rho_schedule,
)
from .config import Config
from .fock import vacuum_moment_poly
from .labellings import v_ratio
from .models import DatabaseManager, RunModel, SeriesModel, VerdictModel
from .moments import V_of, finite_rho_moment, load_printed_tables, moment_poly
from .partitions import Partition, reduce
from .polynomial import RationalPolynomial, format_number

MONOTONE = ConeDescriptor("orthant", 1)
ADJUDICATION_SUBJECT = "orthant:1 m6 λ^2"


def error_trend_ok(errors: list[float]) -> bool:
    """後半の誤差が単調非増加か"""
    tail = errors[len(errors) // 2 :]
    return all(b <= a for a, b in zip(tail, tail[1:], strict=False))


class ConvergenceService:
    """収束列の計算・保存サービス"""

    def __init__(
        self, db_manager: DatabaseManager | None, config: Config, console: Console
    ):
        self.db_manager = db_manager
        self.config = config
        self.console = console

    def ratio_series(
        self,
        partition: Partition,
        cone: ConeDescriptor,
        steps: int,
        start: int = 1,
        stride: int = 1,
        verbose: bool = False,
        progress: Progress | None = None,
        task_id: Any = None,
    ) -> dict[str, Any]:
        """|strict-BMO(π̃, ρ)| / v(ρ)^{b(π̃)} → V(π̃)"""
        target = V_of(reduce(partition), cone)
        return self._run_series(
            "ratio",
            cone,
            {
                "partition": str(partition),
                "steps": steps,
                "start": start,
                "stride": stride,
            },
            rho_schedule(cone, steps, start, stride),
            lambda rho: v_ratio(partition, cone, rho),
            target,
            verbose,
            progress,
            task_id,
        )

    def moment_series(
        self,
        p: int,
        cone: ConeDescriptor,
        steps: int,
        coefficient: int = 0,
        start: int = 1,
        stride: int = 1,
        verbose: bool = False,
        progress: Progress | None = None,
        task_id: Any = None,
    ) -> dict[str, Any]:
        """有限 ρ のモーメントの λ^coefficient の係数 → m_p(λ) の係数"""
        target = moment_poly(p, cone).coefficient(coefficient)
        return self._run_series(
            f"m{p}[λ^{coefficient}]",
            cone,
            {
                "p": p,
                "coefficient": coefficient,
                "steps": steps,
                "start": start,
                "stride": stride,
            },
            rho_schedule(cone, steps, start, stride),
            lambda rho: finite_rho_moment(p, cone, rho).coefficient(coefficient),
            target,
            verbose,
            progress,
            task_id,
        )

    def gamma_series(
        self,
        cone: ConeDescriptor,
        m: int,
        steps: int,
        start: int = 1,
        stride: int = 1,
        verbose: bool = False,
        progress: Progress | None = None,
        task_id: Any = None,
    ) -> dict[str, Any]:
        """格子版 γ_m の推定値 → γ_m"""
        return self._run_series(
            f"gamma{m}",
            cone,
            {"m": m, "steps": steps, "start": start, "stride": stride},
            rho_schedule(cone, steps, start, stride),
            lambda rho: gamma_estimate(cone, m, rho),
            gamma_closed(cone, m),
            verbose,
            progress,
            task_id,
        )

    def _run_series(
        self,
        series: str,
        cone: ConeDescriptor,
        parameters: dict[str, Any],
        schedule: list[ConePoint],
        compute: Callable[[ConePoint], Fraction | float],
        target: Fraction | float,
        verbose: bool,
        progress: Progress | None,
        task_id: Any,
    ) -> dict[str, Any]:
        start_time = time.time()
        warnings: list[str] = []
        if len(schedule) < 2:
            raise ValueError(f"収束列には 2 点以上が必要です: {len(schedule)}")

        rows: list[dict[str, Any]] = []
        truncated = False
        for step, rho in enumerate(schedule, start=1):
            size = interval_count(cone, rho)
            if size > self.config.limits.max_interval:
                truncated = True
                warnings.append(
                    f"ρ={format_point(cone, rho)} の区間 {size} 点が上限 "
                    f"{self.config.limits.max_interval} を超えたため打ち切りました"
                )
                break
            if progress is not None and task_id is not None:
                progress.update(
                    task_id, description=f"ρ = {format_point(cone, rho)} を計算中..."
                )
            value = compute(rho)
            rows.append(
                {
                    "step": step,
                    "rho": format_point(cone, rho),
                    "value": value,
                    "target": target,
                    "abs_error": abs(float(value) - float(target)),
                }
            )
            if verbose:
                self.console.print(
                    f"  ρ={rows[-1]['rho']}: {format_number(value)} "
                    f"(誤差 {rows[-1]['abs_error']:.3g})"
                )

        errors = [row["abs_error"] for row in rows]
        if len(rows) >= 2 and not error_trend_ok(errors):
            warnings.append("後半の誤差が単調に減少していません")

        duration = time.time() - start_time
        run_id = self._persist(series, cone, parameters, rows, duration, truncated)
        return {
            "series": series,
            "cone": str(cone),
            "rows": rows,
            "target": target,
            "truncated": truncated,
            "run_id": run_id,
            "duration": duration,
            "warnings": warnings,
        }

    def _persist(
        self,
        series: str,
        cone: ConeDescriptor,
        parameters: dict[str, Any],
        rows: list[dict[str, Any]],
        duration: float,
        truncated: bool,
    ) -> int | None:
        if self.db_manager is None:
            return None
        run_id = RunModel(self.db_manager).create_run(
            f"converge {series}", str(cone), parameters, duration, truncated
        )
        SeriesModel(self.db_manager).save_points(
            run_id,
            series,
            [
                {
                    **row,
                    "value": format_number(row["value"]),
                    "target": format_number(row["target"]),
                }
                for row in rows
            ],
        )
        return run_id

    def load_run(self, run_id: int) -> dict[str, Any]:
        """保存済みの実行と、その収束列・判定を読み出す"""
        if self.db_manager is None:
            raise ValueError("データベースが指定されていません")
        run = RunModel(self.db_manager).get_run(run_id)
        if run is None:
            raise ValueError(f"run_id {run_id} は存在しません")
        points = SeriesModel(self.db_manager).get_points(run_id)
        verdicts = []
        if run["command"] == "converge adjudicate":
            verdicts = [
                dict(row)
                for row in VerdictModel(self.db_manager).get_verdicts(
                    ADJUDICATION_SUBJECT
                )
                if row["run_id"] == run_id
            ]
        return {
            "run": dict(run),
            "parameters": json.loads(run["parameters"]),
            "points": [dict(point) for point in points],
            "verdicts": verdicts,
        }

    def adjudicate(
        self,
        rho_max: int = 40,
        fock_max: int = 6,
        verbose: bool = False,
        progress: Progress | None = None,
        task_id: Any = None,
    ) -> dict[str, Any]:
        """orthant:1 の m₆ の λ² 係数: 有限 ρ 列の極限が導出値か印刷値かを判定"""
        start_time = time.time()
        warnings: list[str] = []
        derived = moment_poly(6, MONOTONE).coefficient(2)
        printed = _printed_coefficient("orthant:1", 6, 2)

        rows: list[dict[str, Any]] = []
        for n in range(2, rho_max + 1):
            if progress is not None and task_id is not None:
                progress.update(task_id, description=f"ρ = {n} を計算中...")
            value = finite_rho_moment(6, MONOTONE, (n,)).coefficient(2)
            rows.append(
                {
                    "step": n - 1,
                    "rho": str(n),
                    "value": value,
                    "target": derived,
                    "abs_error": abs(float(value) - float(derived)),
                }
            )

        fock_agree = True
        for n in range(1, fock_max + 1):
            fock_value = vacuum_moment_poly(
                MONOTONE, (n,), 6, max_states=self.config.limits.max_states
            ).coefficient(2)
            combinatorial = finite_rho_moment(6, MONOTONE, (n,)).coefficient(2)
            if fock_value != combinatorial:
                fock_agree = False
                warnings.append(
                    f"ρ={n}: Fock {format_number(fock_value)} != "
                    f"組合せ {format_number(combinatorial)}"
                )
            elif verbose:
                self.console.print(
                    f"  ρ={n}: Fock と組合せが一致 ({format_number(fock_value)})"
                )

        values = [row["value"] for row in rows]
        monotone = all(b >= a for a, b in zip(values, values[1:], strict=False))
        last = float(values[-1])
        nearer_derived = abs(last - float(derived)) < abs(last - float(printed))
        passes_printed = printed < derived and any(v > printed for v in values)
        if monotone and nearer_derived and fock_agree:
            verdict = "derived"
        elif not nearer_derived and fock_agree:
            verdict = "printed"
        else:
            verdict = "undecided"
        detail = (
            f"ρ=2..{rho_max} で単調{'増加' if monotone else 'でない'}、"
            f"最終値 {format_number(values[-1])}、"
            f"印刷値を{'超えた' if passes_printed else '超えない'}、"
            f"Fock 照合 ρ ≤ {fock_max}: {'一致' if fock_agree else '不一致'}"
        )

        duration = time.time() - start_time
        run_id = None
        if self.db_manager is not None:
            run_id = self._persist(
                "adjudicate",
                MONOTONE,
                {"rho_max": rho_max, "fock_max": fock_max},
                rows,
                duration,
                False,
            )
            VerdictModel(self.db_manager).save_verdict(
                {
                    "run_id": run_id,
                    "subject": ADJUDICATION_SUBJECT,
                    "verdict": verdict,
                    "derived_value": format_number(derived),
                    "printed_value": format_number(printed),
                    "detail": detail,
                }
            )

        return {
            "subject": ADJUDICATION_SUBJECT,
            "verdict": verdict,
            "derived": derived,
            "printed": printed,
            "monotone": monotone,
            "fock_agree": fock_agree,
            "detail": detail,
            "rows": rows,
            "run_id": run_id,
            "duration": duration,
            "warnings": warnings,
        }


def _printed_coefficient(cone: str, p: int, k: int) -> Fraction:
    for table in load_printed_tables()["moment_tables"]:
        if cone in table["cones"]:
            printed = RationalPolynomial.from_json(table["entries"][p]["printed"])
            value = printed.coefficient(k)
            return Fraction(value)
    raise KeyError(f"表に {cone} がありません")
