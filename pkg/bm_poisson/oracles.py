"""独立な計算経路同士の照合サービス"""

import math
import time
from collections.abc import Callable
from fractions import Fraction
from typing import Any

from rich.console import Console
from rich.progress import Progress

from .cones import (
    ConeDescriptor,
    ConePoint,
    VOLUME_CONSTANTS,
    beta2_by_quadrature,
    euclid_volume,
    interval_count,
    interval_lattice,
    monte_carlo_volume,
)
from .config import Config
from .errors import BmPoissonError
from .fock import (
    check_relations,
    check_self_adjoint,
    run_bm_presets,
    vacuum_moment_poly,
)
from .labellings import count_labellings, count_sequences_naive
from .moments import (
    V_of,
    appendix_a,
    appendix_measure,
    clt_moment,
    compare_with_printed,
    finite_rho_moment,
    load_printed_tables,
    mgf_series_coefficients,
)
from .partitions import (
    Partition,
    enumerate_by_filter,
    enumerate_pair_inner_singleton,
    is_pair_inner_singleton,
    reduce,
)
from .polynomial import RationalPolynomial

CheckResult = tuple[bool, str]

ALL_CONES = tuple(
    ConeDescriptor.parse(text)
    for text in (
        "orthant:1", "orthant:2", "orthant:3", "lorentz:1", "lorentz:2", "psd:2"
    )
)

OPERATOR_CONFIGURATIONS: tuple[tuple[str, ConePoint], ...] = (
    ("orthant:1", (4,)),
    ("orthant:2", (2, 2)),
    ("lorentz:1", (3, 0)),
    ("psd:2", (2, 0, 2)),
)


def check_printed_tables() -> CheckResult:
    """m_1..m_6 と印刷表（flagged-typo は導出値側と一致すること）"""
    failures: list[str] = []
    flagged = 0
    for table in load_printed_tables()["moment_tables"]:
        for cone_text in table["cones"]:
            cone = ConeDescriptor.parse(cone_text)
            for p, entry in table["entries"].items():
                comparison = compare_with_printed(cone, p)
                if comparison.status == "flagged-typo":
                    flagged += 1
                    expected = RationalPolynomial.from_json(entry["derived"])
                    if comparison.derived != expected or comparison.matches:
                        failures.append(f"{cone} m{p}: {comparison.derived}")
                elif not comparison.matches:
                    failures.append(
                        f"{cone} m{p}: {comparison.derived} != {comparison.printed}"
                    )
    if failures:
        return False, "; ".join(failures)
    return True, f"全項目一致（印刷誤りとして扱う項目 {flagged} 件）"


def check_worked_examples() -> CheckResult:
    failures: list[str] = []
    for example in load_printed_tables()["worked_examples"]:
        partition = Partition.parse(example["partition"])
        reduced = reduce(partition)
        if str(reduced) != example["reduced"]:
            failures.append(f"{example['name']}: π̃ = {reduced}")
        for item in example.get("values", []):
            expected = Fraction(item.get("derived", item["printed"]))
            value = V_of(reduced, ConeDescriptor.parse(item["cone"]))
            if value != expected:
                failures.append(f"{example['name']} {item['cone']}: V = {value}")
    return (not failures, "; ".join(failures) or "V の値と縮約がすべて一致")


def check_fock_equivalence(max_states: int) -> CheckResult:
    """vacuum_moment_poly = finite_rho_moment（p ≤ 6）"""
    cases: list[tuple[ConeDescriptor, ConePoint]] = []
    monotone = ConeDescriptor("orthant", 1)
    cases.extend((monotone, (n,)) for n in range(1, 7))
    planar = ConeDescriptor("orthant", 2)
    cases.extend((planar, rho) for rho in interval_lattice(planar, (3, 3)))
    failures: list[str] = []
    for cone, rho in cases:
        for p in range(1, 7):
            fock = vacuum_moment_poly(cone, rho, p, max_states=max_states)
            combinatorial = finite_rho_moment(p, cone, rho)
            if fock != combinatorial:
                failures.append(f"{cone} ρ={rho} p={p}: {fock} != {combinatorial}")
    return (not failures, "; ".join(failures) or f"{len(cases) * 6} 件一致")


def check_naive_labellings(max_sequences: int) -> CheckResult:
    """列の総当たり = 入れ子森の数え上げ（nonstrict, p ≤ 5, orthant:1, ρ ≤ 4）"""
    cone = ConeDescriptor("orthant", 1)
    failures: list[str] = []
    checked = 0
    for p in range(1, 6):
        for partition in enumerate_pair_inner_singleton(p):
            for n in range(1, 5):
                naive = count_sequences_naive(
                    partition, cone, (n,), max_sequences=max_sequences
                )
                forest = count_labellings(partition, cone, (n,), "nonstrict")
                checked += 1
                if naive != forest:
                    failures.append(f"{partition} ρ={n}: {naive} != {forest}")
    return (not failures, "; ".join(failures) or f"{checked} 件一致")


def check_enumeration() -> CheckResult:
    """ε 路による列挙 = 全集合分割の絞り込み（p ≤ 8）"""
    failures = [
        str(p)
        for p in range(1, 9)
        if enumerate_pair_inner_singleton(p)
        != enumerate_by_filter(p, is_pair_inner_singleton)
    ]
    return (not failures, f"不一致 p = {', '.join(failures)}" if failures else "p ≤ 8 一致")


def check_interval_counts() -> CheckResult:
    samples: dict[str, list[ConePoint]] = {
        "orthant:2": [(3, 4), (5, 5)],
        "orthant:3": [(2, 3, 4)],
        "lorentz:1": [(3, 0), (6, 2), (10, -3)],
        "lorentz:2": [(4, 0, 0), (5, 1, 2)],
        "psd:2": [(2, 0, 2), (4, 1, 3), (6, 0, 6)],
    }
    failures: list[str] = []
    for cone_text, points in samples.items():
        cone = ConeDescriptor.parse(cone_text)
        for rho in points:
            if interval_count(cone, rho) != len(interval_lattice(cone, rho)):
                failures.append(f"{cone} ρ={rho}")
    return (not failures, "; ".join(failures) or "行ごとの公式と格子の列挙が一致")


def check_appendix() -> CheckResult:
    failures: list[str] = []
    fib = [0, 1]
    while len(fib) < 17:
        fib.append(fib[-1] + fib[-2])
    for p in range(17):
        poly = appendix_a(p)
        if p >= 1 and poly.evaluate(1) != fib[p - 1]:
            failures.append(f"a_{p}(1) != F({p - 1})")
    for entry in load_printed_tables()["single_operator"]:
        printed = RationalPolynomial.from_json(entry["printed"])
        if appendix_a(entry["p"]) != printed:
            failures.append(f"a_{entry['p']} != 印刷値 {printed}")
    for lam in (0.0, 0.5, 1.0, 2.0):
        measure = appendix_measure(lam)
        for p in range(11):
            expected = float(appendix_a(p).evaluate(Fraction(str(lam))))
            moment = measure.moment(p)
            if not math.isclose(moment, expected, abs_tol=1e-9, rel_tol=1e-9):
                failures.append(f"ν_{lam} の {p} 次モーメント")
        series = mgf_series_coefficients(lam, 10)
        for p, coefficient in enumerate(series):
            expected = float(appendix_a(p).evaluate(Fraction(str(lam))))
            if abs(float(coefficient) - expected) > 1e-12:
                failures.append(f"M_{lam} の {p} 次係数")
    return (not failures, "; ".join(failures) or "3 経路・Fibonacci・測度・級数が一致")


def check_clt() -> CheckResult:
    failures = []
    for cone in ALL_CONES:
        for n in range(7):
            values = clt_moment(n, cone)
            if values.by_recursion != values.by_partitions:
                failures.append(f"{cone} n={n}")
    return (not failures, "; ".join(failures) or "g 漸化式 = NC₂ 和（n ≤ 6）")


def check_operator_identities(max_length: int) -> CheckResult:
    failures: list[str] = []
    checked = 0
    for cone_text, rho in OPERATOR_CONFIGURATIONS:
        cone = ConeDescriptor.parse(cone_text)
        relations = check_relations(cone, rho, max_length)
        checked += sum(relations.checked.values())
        failures.extend(f"{cone}: {v}" for v in relations.violations[:3])
        adjoint = check_self_adjoint(cone, rho, 1.5, max_length=min(max_length, 3))
        failures.extend(f"{cone}: {v}" for v in adjoint.violations[:3])
        for report in run_bm_presets(cone, rho, max_length):
            checked += report.checked
            failures.extend(
                f"{cone} {report.kind} {report.pattern} {report.words}: {v}"
                for v in report.violations[:1]
            )
    return (not failures, "; ".join(failures) or f"{checked} 件の恒等式が成立")


def check_volumes(seed: int, samples: int) -> CheckResult:
    failures: list[str] = []
    beta2 = beta2_by_quadrature()
    if abs(beta2 - VOLUME_CONSTANTS.beta2) > 1e-4:
        failures.append(f"β₂ の数値積分 {beta2:.6f}")
    volume_cases = (
        ("lorentz:1", (6, 2)),
        ("lorentz:2", (4, 0, 0)),
        ("psd:2", (3, 1, 2)),
    )
    for cone_text, rho in volume_cases:
        cone = ConeDescriptor.parse(cone_text)
        estimate = monte_carlo_volume(cone, rho, samples, seed)
        exact = float(euclid_volume(cone, rho))
        if abs(estimate - exact) > 0.05 * exact:
            failures.append(f"{cone} ρ={rho}: {estimate:.4f} vs {exact:.4f}")
    return (not failures, "; ".join(failures) or "体積定数と数値推定が一致")


class OracleService:
    """照合の実行サービス"""

    def __init__(self, config: Config, console: Console):
        self.config = config
        self.console = console
        limits = config.limits
        sampling = config.sampling
        self.checks: dict[str, Callable[[], CheckResult]] = {
            "printed-tables": check_printed_tables,
            "worked-examples": check_worked_examples,
            "enumeration": check_enumeration,
            "interval-counts": check_interval_counts,
            "naive-labellings": lambda: check_naive_labellings(limits.max_sequences),
            "fock-equivalence": lambda: check_fock_equivalence(limits.max_states),
            "clt": check_clt,
            "appendix": check_appendix,
            "operator-identities": lambda: check_operator_identities(4),
            "volumes": lambda: check_volumes(sampling.seed, sampling.samples),
        }

    def run(
        self,
        names: list[str] | None = None,
        verbose: bool = False,
        progress: Progress | None = None,
        task_id: Any = None,
    ) -> dict[str, Any]:
        """指定した照合を順に実行"""
        start_time = time.time()
        warnings: list[str] = []
        selected = names or list(self.checks)
        unknown = [name for name in selected if name not in self.checks]
        if unknown:
            raise ValueError(f"未知の照合です: {', '.join(unknown)}")

        results: list[dict[str, Any]] = []
        for name in selected:
            if progress is not None and task_id is not None:
                progress.update(task_id, description=f"{name} を照合中...")
            check_start = time.time()
            try:
                passed, detail = self.checks[name]()
            except BmPoissonError as e:
                passed, detail = False, str(e)
                warnings.append(f"{name}: {type(e).__name__}")
            results.append(
                {
                    "name": name,
                    "passed": passed,
                    "detail": detail,
                    "duration": time.time() - check_start,
                }
            )
            if verbose:
                mark = "[green]✓[/green]" if passed else "[red]✗[/red]"
                self.console.print(f"  {mark} {name}: {detail}")

        return {
            "results": results,
            "passed": all(result["passed"] for result in results),
            "duration": time.time() - start_time,
            "warnings": warnings,
        }
