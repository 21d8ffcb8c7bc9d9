"""正値錐（直交錐・ローレンツ錐・半正定値行列）の格子・区間・体積

格子点は整数タプルで表す。
    orthant:d  (x_1, ..., x_d)       各成分 >= 1
    lorentz:d  (t, z_1, ..., z_d)    t >= 1, t^2 >= |z|^2
    psd:2      (a, b, c) = [[a,b],[b,c]]   a, c >= 0, ac - b^2 >= 0, 非零
頂点 0 はどの族でも格子に含めない。
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import isqrt

import numpy as np
from scipy import integrate

from .errors import ConeError

ConePoint = tuple[int, ...]

FAMILIES = ("orthant", "lorentz", "psd")
_ALIASES = {"psd-matrices": "psd", "symm": "psd", "light-cone": "lorentz"}


@dataclass(frozen=True)
class ConeDescriptor:
    """錐の族と次元"""

    family: str
    d: int

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ConeError(f"未知の錐です: {self.family}")
        if self.family == "orthant" and self.d < 1:
            raise ConeError(f"orthant の次元は 1 以上: {self.d}")
        if self.family == "lorentz" and self.d not in (1, 2):
            raise ConeError(f"lorentz は d=1,2 のみ対応: {self.d}")
        if self.family == "psd" and self.d != 2:
            raise ConeError(f"psd は d=2 のみ対応: {self.d}")

    @classmethod
    def parse(cls, text: str) -> ConeDescriptor:
        """ "orthant:2" 形式"""
        family, sep, dim = text.strip().partition(":")
        family = _ALIASES.get(family.lower(), family.lower())
        if not sep:
            raise ConeError(f"錐は family:d の形で指定してください: {text!r}")
        try:
            return cls(family, int(dim))
        except ValueError as e:
            if isinstance(e, ConeError):
                raise
            raise ConeError(f"錐の次元が不正です: {text!r}") from e

    def __str__(self) -> str:
        return f"{self.family}:{self.d}"

    @property
    def point_length(self) -> int:
        if self.family == "orthant":
            return self.d
        if self.family == "lorentz":
            return self.d + 1
        return 3


def parse_point(cone: ConeDescriptor, text: str) -> ConePoint:
    """ "2,3" / "3;0,1" / "2,0,2" または "a,b;b,c" """
    raw = text.strip()
    try:
        if cone.family == "lorentz":
            head, _, tail = raw.partition(";")
            z = [int(v) for v in tail.split(",") if v.strip()] if tail else []
            point: ConePoint = (int(head), *z)
            if not tail:
                point = (int(head),) + (0,) * cone.d
        elif cone.family == "psd" and ";" in raw:
            rows = [[int(v) for v in row.split(",")] for row in raw.split(";")]
            if (
                len(rows) != 2
                or any(len(r) != 2 for r in rows)
                or rows[0][1] != rows[1][0]
            ):
                raise ConeError(f"2x2 対称行列として解釈できません: {text!r}")
            point = (rows[0][0], rows[0][1], rows[1][1])
        else:
            point = tuple(int(v) for v in raw.split(","))
    except ValueError as e:
        raise ConeError(f"格子点の表記が不正です: {text!r}") from e
    if len(point) != cone.point_length:
        raise ConeError(f"{cone} の点は成分 {cone.point_length} 個です: {text!r}")
    return point


def format_point(cone: ConeDescriptor, point: ConePoint) -> str:
    if cone.family == "lorentz":
        return f"{point[0]};" + ",".join(map(str, point[1:]))
    return ",".join(map(str, point))


def in_cone(cone: ConeDescriptor, point: ConePoint) -> bool:
    """格子規約での所属判定（頂点を除く）"""
    if len(point) != cone.point_length:
        return False
    if cone.family == "orthant":
        return all(x >= 1 for x in point)
    if cone.family == "lorentz":
        t, z = point[0], point[1:]
        return t >= 1 and t * t >= sum(v * v for v in z)
    a, b, c = point
    return a >= 0 and c >= 0 and a * c - b * b >= 0 and (a, b, c) != (0, 0, 0)


def require_point(cone: ConeDescriptor, point: ConePoint) -> None:
    if not in_cone(cone, point):
        raise ConeError(f"{format_point(cone, point)} は {cone} の格子点ではありません")


def _difference_in_cone(cone: ConeDescriptor, delta: ConePoint) -> bool:
    """閉錐への所属（整数演算のみ）"""
    if cone.family == "orthant":
        return all(x >= 0 for x in delta)
    if cone.family == "lorentz":
        dt = delta[0]
        return dt >= 0 and dt * dt >= sum(v * v for v in delta[1:])
    da, db, dc = delta
    return da >= 0 and dc >= 0 and da * dc - db * db >= 0


def leq(cone: ConeDescriptor, a: ConePoint, b: ConePoint) -> bool:
    """a ⪯ b ⇔ b - a が閉錐に属する"""
    if len(a) != cone.point_length or len(b) != cone.point_length:
        raise ConeError(f"{cone} の点ではありません: {a}, {b}")
    return _difference_in_cone(cone, tuple(y - x for x, y in zip(a, b, strict=True)))


def lt(cone: ConeDescriptor, a: ConePoint, b: ConePoint) -> bool:
    return a != b and leq(cone, a, b)


def comparable(cone: ConeDescriptor, a: ConePoint, b: ConePoint) -> bool:
    return leq(cone, a, b) or leq(cone, b, a)


def _lorentz_rows(rho: ConePoint) -> list[tuple[int, ...]]:
    # |z| <= t かつ |Z - z| <= T - t。各座標は両方の箱に入る
    big_t, big_z = rho[0], rho[1:]
    points: list[tuple[int, ...]] = []
    for t in range(1, big_t + 1):
        gap = big_t - t
        ranges = [
            range(max(-t, zc - gap), min(t, zc + gap) + 1) for zc in big_z
        ]
        for z in product(*ranges):
            if sum(v * v for v in z) <= t * t and sum(
                (zc - v) ** 2 for zc, v in zip(big_z, z, strict=True)
            ) <= gap * gap:
                points.append((t, *z))
    return points


def _psd_b_range(rho: ConePoint, a: int, c: int) -> range:
    # b^2 <= ac かつ (B - b)^2 <= (A - a)(C - c)
    big_a, big_b, big_c = rho
    r1, r2 = isqrt(a * c), isqrt((big_a - a) * (big_c - c))
    return range(max(-r1, big_b - r2), min(r1, big_b + r2) + 1)


def interval_lattice(cone: ConeDescriptor, rho: ConePoint) -> list[ConePoint]:
    """[0, ρ]_I の格子点（辞書式順）"""
    require_point(cone, rho)
    return list(_interval(cone, rho))


@lru_cache(maxsize=4096)
def _interval(cone: ConeDescriptor, rho: ConePoint) -> tuple[ConePoint, ...]:
    if cone.family == "orthant":
        return tuple(product(*(range(1, r + 1) for r in rho)))
    if cone.family == "lorentz":
        return tuple(sorted(_lorentz_rows(rho)))
    points = [
        (a, b, c)
        for a in range(rho[0] + 1)
        for c in range(rho[2] + 1)
        for b in _psd_b_range(rho, a, c)
        if (a, b, c) != (0, 0, 0)
    ]
    return tuple(sorted(points))


@lru_cache(maxsize=65536)
def interval_count(cone: ConeDescriptor, rho: ConePoint) -> int:
    """|[0, ρ]_I|。行ごとの区間長の和で数える"""
    require_point(cone, rho)
    if cone.family == "orthant":
        return math.prod(rho)
    if cone.family == "psd":
        total = sum(
            max(0, len(_psd_b_range(rho, a, c)))
            for a in range(rho[0] + 1)
            for c in range(rho[2] + 1)
        )
        return total - 1  # 頂点
    big_t, big_z = rho[0], rho[1:]
    total = 0
    for t in range(1, big_t + 1):
        gap = big_t - t
        if cone.d == 1:
            zc = big_z[0]
            total += max(0, min(t, zc + gap) - max(-t, zc - gap) + 1)
            continue
        z1c, z2c = big_z
        for z1 in range(max(-t, z1c - gap), min(t, z1c + gap) + 1):
            r1 = t * t - z1 * z1
            r2 = gap * gap - (z1c - z1) ** 2
            if r1 < 0 or r2 < 0:
                continue
            s1, s2 = isqrt(r1), isqrt(r2)
            total += max(0, min(s1, z2c + s2) - max(-s1, z2c - s2) + 1)
    return total


def count_between(
    cone: ConeDescriptor, a: ConePoint, rho: ConePoint, strict: bool = False
) -> int:
    """a ⪯ ζ ⪯ ρ（strict なら a ≺ ζ）を満たす格子点 ζ の数

    a が格子点なら [a, ρ] を平行移動した [0, ρ - a] の点数で数える。
    """
    if not in_cone(cone, a):
        relation = lt if strict else leq
        return sum(1 for zeta in _interval(cone, rho) if relation(cone, a, zeta))
    if not leq(cone, a, rho):
        return 0
    delta = tuple(y - x for x, y in zip(a, rho, strict=True))
    if cone.family == "orthant":
        total = math.prod(x + 1 for x in delta)
    else:
        total = 1 + (interval_count(cone, delta) if any(delta) else 0)
    return total - 1 if strict else total


@dataclass(frozen=True)
class VolumeConstants:
    """区間体積の定数。psd は Symm₂ ≅ Λ₂ の線形同型（ヤコビアン 1/2）から β₂ = 2α₂"""

    alpha1: Fraction = Fraction(1, 2)
    alpha2: float = math.pi / 12
    beta2: float = math.pi / 6

    def for_cone(self, cone: ConeDescriptor) -> Fraction | float:
        if cone.family == "orthant":
            return Fraction(1)
        if cone.family == "lorentz":
            return self.alpha1 if cone.d == 1 else self.alpha2
        return self.beta2


VOLUME_CONSTANTS = VolumeConstants()


def euclid_volume(cone: ConeDescriptor, rho: ConePoint) -> Fraction | float:
    """連続区間 [0, ρ] の体積。orthant と lorentz:1 は厳密な有理数"""
    require_point(cone, rho)
    constant = VOLUME_CONSTANTS.for_cone(cone)
    if cone.family == "orthant":
        return Fraction(math.prod(rho))
    if cone.family == "lorentz":
        gap = rho[0] ** 2 - sum(v * v for v in rho[1:])
        if cone.d == 1:
            return constant * gap
        return float(constant) * gap**1.5
    a, b, c = rho
    return float(constant) * (a * c - b * b) ** 1.5


def gamma_closed(cone: ConeDescriptor, m: int) -> Fraction:
    """体積特性列 γ_m"""
    if m < 1:
        raise ValueError(f"m は 1 以上: {m}")
    if cone.family == "orthant":
        return Fraction(1, m**cone.d)
    if cone.family == "lorentz" and cone.d == 1:
        return Fraction(1, m * m)
    return Fraction(24, (3 * m - 1) * 3 * m * (3 * m + 1))


def gamma_estimate(cone: ConeDescriptor, m: int, rho: ConePoint) -> Fraction:
    """Σ_{η ∈ [0,ρ]} N(η)^{m-1} / N(ρ)^m（N は格子点数）"""
    if m < 1:
        raise ValueError(f"m は 1 以上: {m}")
    total = sum(interval_count(cone, eta) ** (m - 1) for eta in _interval(cone, rho))
    return Fraction(total, interval_count(cone, rho) ** m)


def rho_schedule(
    cone: ConeDescriptor, steps: int, start: int = 1, stride: int = 1
) -> list[ConePoint]:
    """ρ → ∞ を実現する増加列: (n,...,n) / (n;0) / n·I"""
    if steps < 1:
        raise ValueError(f"steps は 1 以上: {steps}")
    schedule: list[ConePoint] = []
    for k in range(steps):
        n = start + k * stride
        if cone.family == "orthant":
            schedule.append((n,) * cone.d)
        elif cone.family == "lorentz":
            schedule.append((n,) + (0,) * cone.d)
        else:
            schedule.append((n, 0, n))
    return schedule


def density_ratio(cone: ConeDescriptor, rho: ConePoint) -> float:
    """格子点数 / ユークリッド体積"""
    return interval_count(cone, rho) / float(euclid_volume(cone, rho))


def monte_carlo_volume(
    cone: ConeDescriptor, rho: ConePoint, samples: int = 200_000, seed: int = 0
) -> float:
    """外接箱からの一様サンプリングで [0, ρ] の体積を推定"""
    require_point(cone, rho)
    rng = np.random.default_rng(seed)
    if cone.family == "orthant":
        return float(math.prod(rho))
    if cone.family == "lorentz":
        big_t = rho[0]
        big_z = np.asarray(rho[1:], dtype=float)
        t = rng.uniform(0.0, big_t, samples)
        z = rng.uniform(-big_t, big_t, (samples, cone.d))
        inside = (np.sum(z**2, axis=1) <= t**2) & (
            np.sum((big_z - z) ** 2, axis=1) <= (big_t - t) ** 2
        )
        box = big_t * (2.0 * big_t) ** cone.d
    else:
        big_a, big_b, big_c = rho
        bound = math.sqrt(big_a * big_c)
        a = rng.uniform(0.0, big_a, samples)
        c = rng.uniform(0.0, big_c, samples)
        b = rng.uniform(-bound, bound, samples)
        inside = (b**2 <= a * c) & ((big_b - b) ** 2 <= (big_a - a) * (big_c - c))
        box = big_a * big_c * 2.0 * bound
    return float(box * np.mean(inside))


def beta2_by_quadrature() -> float:
    """単位行列区間の体積 ∫∫ 2√min(ac, (1-a)(1-c)) da dc"""
    value, _ = integrate.dblquad(
        lambda c, a: 2.0 * math.sqrt(max(0.0, min(a * c, (1 - a) * (1 - c)))),
        0.0,
        1.0,
        0.0,
        1.0,
    )
    return float(value)
