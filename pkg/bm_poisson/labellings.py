"""bm 順序ラベル付けの数え上げ"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Any, Literal

from .cones import (
    ConeDescriptor,
    ConePoint,
    count_between,
    euclid_volume,
    format_point,
    interval_lattice,
    leq,
    lt,
    rho_schedule,
)
from .errors import InfeasibleError
from .partitions import Partition, reduce, require_pair_inner_singleton, structure
from .polynomial import format_number

Mode = Literal["strict", "nonstrict"]

DEFAULT_MAX_SEQUENCES = 10_000_000

# 部分木の形: 子の形の（整列済み）タプル
Shape = tuple["Shape", ...]


def _forest_shapes(partition: Partition) -> list[Shape]:
    """ペアブロックの入れ子森を、根ごとの形に変換"""
    reduced = reduce(partition)
    report = structure(reduced)

    def shape(i: int) -> Shape:
        return tuple(sorted(shape(c) for c in report.children[i]))

    return [shape(r) for r in report.roots]


def count_labellings(
    partition: Partition,
    cone: ConeDescriptor,
    rho: ConePoint,
    mode: Mode = "strict",
) -> int:
    """入れ子のペアは内側ほど大きく、シングルトンは直前ブロックと同じラベル"""
    require_pair_inner_singleton(partition)
    points = interval_lattice(cone, rho)
    if mode not in ("strict", "nonstrict"):
        raise ValueError(f"mode は strict か nonstrict: {mode}")
    relation = lt if mode == "strict" else leq
    cache: dict[tuple[Shape, ConePoint], int] = {}

    def weight(node: Shape, label: ConePoint) -> int:
        key = (node, label)
        if key in cache:
            return cache[key]
        total = 1
        for child in node:
            if not child:
                total *= count_between(cone, label, rho, strict=mode == "strict")
            else:
                total *= sum(
                    weight(child, zeta)
                    for zeta in points
                    if relation(cone, label, zeta)
                )
            if total == 0:
                break
        cache[key] = total
        return total

    result = 1
    for root in _forest_shapes(partition):
        result *= sum(weight(root, xi) for xi in points)
    return result


def _nesting_pairs(partition: Partition) -> list[tuple[int, int]]:
    """(i, j): ブロック j がブロック i の内側"""
    return [
        (i, j)
        for i in range(partition.b)
        for j in range(partition.b)
        if partition.encloses(i, j)
    ]


def count_sequences_naive(
    partition: Partition,
    cone: ConeDescriptor,
    rho: ConePoint,
    mode: Mode = "nonstrict",
    max_sequences: int = DEFAULT_MAX_SEQUENCES,
) -> int:
    """長さ p の全列を走査し、π のブロック上で一定かつ bm 順序を満たすものを数える"""
    require_pair_inner_singleton(partition)
    points = interval_lattice(cone, rho)
    estimate = len(points) ** partition.p
    if estimate > max_sequences:
        raise InfeasibleError("列の総当たりが大きすぎます", estimate, max_sequences)
    relation = lt if mode == "strict" else leq
    blocks = partition.blocks
    nested = _nesting_pairs(partition)
    report = structure(partition)
    count = 0
    for seq in product(points, repeat=partition.p):
        labels = []
        for block in blocks:
            first = seq[block[0] - 1]
            if any(seq[x - 1] != first for x in block[1:]):
                break
            labels.append(first)
        else:
            ok = True
            for i, j in nested:
                if len(blocks[j]) == 2 and not relation(cone, labels[i], labels[j]):
                    ok = False
                    break
                if (
                    len(blocks[j]) == 1
                    and report.parent[j] == i
                    and labels[i] != labels[j]
                ):
                    ok = False
                    break
            if ok:
                count += 1
    return count


def _normalize(count: int, volume: Fraction | float, blocks: int) -> Fraction | float:
    if isinstance(volume, Fraction):
        return Fraction(count) / volume**blocks
    return count / volume**blocks


@dataclass
class CountRecord:
    """分割 × 錐 × ρ のラベル付け数"""

    partition: Partition
    cone: ConeDescriptor
    rho: ConePoint
    count_nonstrict: int
    count_strict: int
    volume: Fraction | float
    count_sequences: int | None = None
    normalized_ratio: Fraction | float = field(init=False)

    def __post_init__(self) -> None:
        self.normalized_ratio = _normalize(
            self.count_strict, self.volume, reduce(self.partition).b
        )

    def to_row(self) -> dict[str, Any]:
        return {
            "partition": str(self.partition),
            "cone": str(self.cone),
            "rho": format_point(self.cone, self.rho),
            "nonstrict": self.count_nonstrict,
            "strict": self.count_strict,
            "naive": "" if self.count_sequences is None else self.count_sequences,
            "volume": format_number(self.volume),
            "ratio": format_number(self.normalized_ratio),
        }


def count_record(
    partition: Partition,
    cone: ConeDescriptor,
    rho: ConePoint,
    naive: bool = False,
    max_sequences: int = DEFAULT_MAX_SEQUENCES,
) -> CountRecord:
    return CountRecord(
        partition=partition,
        cone=cone,
        rho=rho,
        count_nonstrict=count_labellings(partition, cone, rho, "nonstrict"),
        count_strict=count_labellings(partition, cone, rho, "strict"),
        volume=euclid_volume(cone, rho),
        count_sequences=(
            count_sequences_naive(partition, cone, rho, max_sequences=max_sequences)
            if naive
            else None
        ),
    )


def v_ratio(
    partition: Partition, cone: ConeDescriptor, rho: ConePoint
) -> Fraction | float:
    """|strict-BMO(π̃, ρ)| / v(ρ)^{b(π̃)}"""
    reduced = reduce(partition)
    count = count_labellings(reduced, cone, rho, "strict")
    return _normalize(count, euclid_volume(cone, rho), reduced.b)


def v_ratio_series(
    partition: Partition,
    cone: ConeDescriptor,
    steps: int,
    start: int = 1,
    stride: int = 1,
) -> list[tuple[ConePoint, Fraction | float]]:
    return [
        (rho, v_ratio(partition, cone, rho))
        for rho in rho_schedule(cone, steps, start, stride)
    ]
