"""極限モーメント: V の再帰、m_p(λ)、有限 ρ のモーメント、CLT、単一作用素の法則"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Any, NamedTuple

import sympy
import yaml

from .cones import ConeDescriptor, ConePoint, euclid_volume, gamma_closed
from .errors import OracleMismatchError, PartitionError, PoleError
from .labellings import count_labellings
from .partitions import (
    Partition,
    enumerate_outer_pair_inner_singleton,
    enumerate_pair,
    enumerate_pair_inner_singleton,
    reduce,
    structure,
)
from .polynomial import RationalPolynomial


def V_of(partition: Partition, cone: ConeDescriptor) -> Fraction:  # noqa: N802
    """入れ子森の各根 r について W(r) = γ_{部分木のブロック数} · ∏ W(子) の積"""
    if not partition.is_noncrossing:
        raise PartitionError(f"交差する分割です: {partition}")
    report = structure(partition)

    def weight(i: int) -> Fraction:
        value = gamma_closed(cone, report.subtree_size(i))
        for child in report.children[i]:
            value *= weight(child)
        return value

    result = Fraction(1)
    for root in report.roots:
        result *= weight(root)
    return result


@lru_cache(maxsize=256)
def moment_poly(p: int, cone: ConeDescriptor) -> RationalPolynomial:
    """m_p(λ) = Σ_{π ∈ NC₂^{1,i}(p)} λ^{s(π)} V(π̃)"""
    if p < 1:
        raise ValueError(f"p は 1 以上: {p}")
    return RationalPolynomial.sum(
        RationalPolynomial.lam(partition.s) * V_of(reduce(partition), cone)
        for partition in enumerate_pair_inner_singleton(p)
    )


def finite_rho_moment(
    p: int, cone: ConeDescriptor, rho: ConePoint
) -> RationalPolynomial:
    """φ(S_ρ(λ)^p) = Σ_π λ^{s(π)} |strict-BMO(π̃, ρ)| / v(ρ)^{(p - s(π))/2}"""
    if p < 1:
        raise ValueError(f"p は 1 以上: {p}")
    counts: dict[Partition, int] = {}
    totals: dict[int, int] = {}
    for partition in enumerate_pair_inner_singleton(p):
        reduced = reduce(partition)
        if reduced not in counts:
            counts[reduced] = count_labellings(reduced, cone, rho, "strict")
        totals[partition.s] = totals.get(partition.s, 0) + counts[reduced]
    return normalize_counts(totals, p, euclid_volume(cone, rho))


def normalize_counts(
    totals: dict[int, int], p: int, volume: Fraction | float
) -> RationalPolynomial:
    """λ^k の係数（ラベル付け総数）を v^{(p-k)/2} で割る"""
    return RationalPolynomial(totals).map_coefficients(
        lambda k, count: count / volume ** ((p - k) // 2)
    )


class CltValues(NamedTuple):
    """m_{2n}(0) の 2 通りの値"""

    by_recursion: Fraction
    by_partitions: Fraction


def clt_moment(n: int, cone: ConeDescriptor) -> CltValues:
    """g_n = Σ_{k=1}^n γ_k g_{k-1} g_{n-k} と Σ_{NC₂(2n)} V(π)"""
    if n < 0:
        raise ValueError(f"n は 0 以上: {n}")
    g = [Fraction(1)]
    for m in range(1, n + 1):
        g.append(
            sum(
                (gamma_closed(cone, k) * g[k - 1] * g[m - k] for k in range(1, m + 1)),
                Fraction(0),
            )
        )
    by_partitions = sum(
        (V_of(partition, cone) for partition in enumerate_pair(2 * n)), Fraction(0)
    )
    return CltValues(g[n], by_partitions)


def monotone_closed_forms(n: int) -> dict[str, Fraction]:
    """orthant:1, ρ = n での有限 ρ の値（収束の検算用）"""
    if n < 1:
        raise ValueError(f"n は 1 以上: {n}")
    nested = Fraction(n - 1, 2 * n)
    return {
        "nested_pair_ratio": nested,
        "m4_constant": 1 + nested,
        "m6_lambda2": 3 + 6 * nested,
    }


def clt_table(n_max: int, cone: ConeDescriptor) -> list[dict[str, Any]]:
    rows = []
    for n in range(n_max + 1):
        values = clt_moment(n, cone)
        rows.append(
            {
                "n": n,
                "recursion": values.by_recursion,
                "partitions": values.by_partitions,
                "agree": values.by_recursion == values.by_partitions,
            }
        )
    return rows


# 単一作用素 A⁺ + A⁻ + λA° の法則


def appendix_a_by_partitions(p: int) -> RationalPolynomial:
    """Σ_{π ∈ NC_{2,o}^{1,i}(p)} λ^{s(π)}"""
    if p == 0:
        return RationalPolynomial.constant(1)
    terms: dict[int, int] = {}
    for partition in enumerate_outer_pair_inner_singleton(p):
        terms[partition.s] = terms.get(partition.s, 0) + 1
    return RationalPolynomial(terms)


def appendix_a_by_recursion(p: int) -> RationalPolynomial:
    """a_p = λ a_{p-1} + a_{p-2}, a_0 = 1, a_1 = 0"""
    previous, current = RationalPolynomial.constant(1), RationalPolynomial()
    if p == 0:
        return previous
    for _ in range(p - 1):
        previous, current = current, RationalPolynomial.lam() * current + previous
    return current


_LAMBDA = sympy.Symbol("lambda")


def appendix_a_by_transfer_matrix(p: int) -> RationalPolynomial:
    """[[0,1],[1,λ]]^p の真空成分"""
    matrix = sympy.Matrix([[0, 1], [1, _LAMBDA]])
    entry = sympy.expand((matrix**p)[0, 0])
    poly = sympy.Poly(entry, _LAMBDA)
    return RationalPolynomial(
        {
            monom[0]: Fraction(int(coeff.p), int(coeff.q))
            for monom, coeff in zip(poly.monoms(), poly.coeffs(), strict=True)
        }
    )


def appendix_a(p: int) -> RationalPolynomial:
    """3 経路の一致を確認して a_p(λ) を返す"""
    if p < 0:
        raise ValueError(f"p は 0 以上: {p}")
    by_partitions = appendix_a_by_partitions(p)
    by_recursion = appendix_a_by_recursion(p)
    by_matrix = appendix_a_by_transfer_matrix(p)
    if not (by_partitions == by_recursion == by_matrix):
        raise OracleMismatchError(
            f"a_{p} が一致しません: 分割 {by_partitions}, 漸化式 {by_recursion}, "
            f"転送行列 {by_matrix}"
        )
    return by_recursion


@dataclass(frozen=True)
class TwoAtomMeasure:
    """ν_λ = p₁δ_{x₁} + p₂δ_{x₂}"""

    x1: float
    x2: float
    p1: float
    p2: float

    def moment(self, p: int) -> float:
        return self.p1 * self.x1**p + self.p2 * self.x2**p

    def cauchy_transform(self, x: complex) -> complex:
        """Σ pᵢ / (x - xᵢ)"""
        if x in (self.x1, self.x2):
            raise PoleError("原子上では評価できません", (self.x1, self.x2))
        return self.p1 / (x - self.x1) + self.p2 / (x - self.x2)


def appendix_measure(lam: float) -> TwoAtomMeasure:
    if lam < 0:
        raise ValueError(f"λ は 0 以上: {lam}")
    root = math.sqrt(lam * lam + 4)
    return TwoAtomMeasure(
        x1=lam / 2 + root / 2,
        x2=lam / 2 - root / 2,
        p1=0.5 - lam / (2 * root),
        p2=0.5 + lam / (2 * root),
    )


def _quadratic_roots(b: float, c: float) -> tuple[complex, complex]:
    """x^2 + b x + c = 0 の根"""
    disc = complex(b * b - 4 * c) ** 0.5
    return ((-b + disc) / 2, (-b - disc) / 2)


def appendix_transforms(lam: float, x: complex) -> tuple[complex, complex]:
    """M_λ(x) = (1-λx)/(1-λx-x²) と G_λ(x) = (x-1)/(x²-λx-1) を記載どおりに評価"""
    m_den = 1 - lam * x - x * x
    g_den = x * x - lam * x - 1
    if m_den == 0:
        poles = tuple(-r for r in _quadratic_roots(-lam, -1))
        raise PoleError(f"M_λ の極です: x={x}", poles)
    if g_den == 0:
        raise PoleError(f"G_λ の極です: x={x}", _quadratic_roots(-lam, -1))
    return (1 - lam * x) / m_den, (x - 1) / g_den


def measure_cauchy_transform(lam: float, x: complex) -> complex:
    """ν_λ の Cauchy 変換。閉じた形は (x - λ)/(x² - λx - 1)"""
    return appendix_measure(lam).cauchy_transform(x)


def mgf_series_coefficients(lam: float, order: int) -> list[Fraction]:
    """M_λ の原点まわりの級数係数 c_0..c_order"""
    frac = Fraction(str(lam))
    lam_sym = sympy.Rational(frac.numerator, frac.denominator)
    x = sympy.Symbol("x")
    series = sympy.series((1 - lam_sym * x) / (1 - lam_sym * x - x**2), x, 0, order + 1)
    poly = sympy.Poly(series.removeO(), x)
    coefficients = []
    for k in range(order + 1):
        coeff = sympy.Rational(poly.coeff_monomial(x**k))
        coefficients.append(Fraction(int(coeff.p), int(coeff.q)))
    return coefficients


# 印刷表との照合


@dataclass(frozen=True)
class PrintedComparison:
    cone: ConeDescriptor
    p: int
    derived: RationalPolynomial
    printed: RationalPolynomial | None
    status: str  # confirmed | flagged-typo | absent
    note: str = ""

    @property
    def matches(self) -> bool:
        return self.printed is not None and self.printed == self.derived


@lru_cache(maxsize=1)
def load_printed_tables() -> dict[str, Any]:
    """同梱の表データ（版付き）"""
    text = resources.files("bm_poisson.data").joinpath("printed_tables.yaml").read_text(
        encoding="utf-8"
    )
    data: dict[str, Any] = yaml.safe_load(text)
    return data


def _table_entry(cone: ConeDescriptor, p: int) -> dict[str, Any] | None:
    for table in load_printed_tables()["moment_tables"]:
        if str(cone) in table["cones"]:
            entry: dict[str, Any] | None = table["entries"].get(p)
            return entry
    return None


def compare_with_printed(cone: ConeDescriptor, p: int) -> PrintedComparison:
    derived = moment_poly(p, cone)
    entry = _table_entry(cone, p)
    if entry is None:
        return PrintedComparison(cone, p, derived, None, "absent")
    printed = RationalPolynomial.from_json(entry["printed"])
    return PrintedComparison(
        cone,
        p,
        derived,
        printed,
        entry.get("status", "confirmed"),
        entry.get("note", ""),
    )
