"""ペア・シングルトンからなる非交差分割の列挙と構造解析

位置 1..p は左から右に番号付けし、位置 j は j 番目に作用する作用素に対応する。
ε 列も位置 1 を先頭に保持する。
"""

from __future__ import annotations

import re
from collections.abc import Callable, Hashable, Iterator, Sequence
from dataclasses import dataclass
from functools import cached_property, lru_cache

from .errors import PartitionError

Block = tuple[int, ...]

_BLOCK_RE = re.compile(r"\{([^{}]*)\}")


@dataclass(frozen=True)
class Partition:
    """[p] の集合分割。ブロックは最小元の昇順"""

    p: int
    blocks: tuple[Block, ...]

    def __post_init__(self) -> None:
        if self.p < 0:
            raise PartitionError(f"p は非負である必要があります: {self.p}")
        seen: list[int] = []
        for block in self.blocks:
            if not block:
                raise PartitionError("空のブロックは使えません")
            if any(a >= b for a, b in zip(block, block[1:], strict=False)):
                raise PartitionError(f"ブロックが狭義単調増加ではありません: {block}")
            seen.extend(block)
        if sorted(seen) != list(range(1, self.p + 1)):
            raise PartitionError(f"ブロックが [{self.p}] を分割していません: {self.blocks}")
        minima = [block[0] for block in self.blocks]
        if minima != sorted(minima):
            raise PartitionError("ブロックは最小元の昇順で並べてください")

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence[int]]) -> Partition:
        """任意順のブロック列から正規化して生成"""
        normalized = sorted(tuple(sorted(block)) for block in blocks)
        p = sum(len(block) for block in normalized)
        return cls(p, tuple(normalized))

    @classmethod
    def parse(cls, text: str) -> Partition:
        """ "{{1,4},{2},{3}}" 形式を解析"""
        body = text.strip()
        if not (body.startswith("{") and body.endswith("}")):
            raise PartitionError(f"分割の表記が不正です: {text!r}")
        inner = body[1:-1].strip()
        if not inner:
            return cls(0, ())
        blocks: list[list[int]] = []
        for match in _BLOCK_RE.finditer(inner):
            try:
                blocks.append([int(x) for x in match.group(1).split(",") if x.strip()])
            except ValueError as e:
                raise PartitionError(f"分割の表記が不正です: {text!r}") from e
        if _BLOCK_RE.sub("", inner).replace(",", "").strip():
            raise PartitionError(f"分割の表記が不正です: {text!r}")
        return cls.from_blocks(blocks)

    @classmethod
    def from_json(cls, data: Sequence[Sequence[int]]) -> Partition:
        return cls.from_blocks(data)

    def to_json(self) -> list[list[int]]:
        return [list(block) for block in self.blocks]

    def __str__(self) -> str:
        inner = ",".join("{" + ",".join(map(str, block)) + "}" for block in self.blocks)
        return "{" + inner + "}"

    @property
    def b(self) -> int:
        """ブロック数"""
        return len(self.blocks)

    @property
    def s(self) -> int:
        """シングルトン数"""
        return sum(1 for block in self.blocks if len(block) == 1)

    @property
    def is_pair_or_singleton(self) -> bool:
        return all(len(block) <= 2 for block in self.blocks)

    @cached_property
    def is_noncrossing(self) -> bool:
        owner = {x: i for i, block in enumerate(self.blocks) for x in block}
        for i in range(self.b):
            for j in range(i + 1, self.b):
                # 2 ブロックの元を位置順に並べ、連続する同じラベルを潰して ABAB を探す
                runs: list[int] = []
                for x in range(1, self.p + 1):
                    k = owner[x]
                    if k in (i, j) and (not runs or runs[-1] != k):
                        runs.append(k)
                if len(runs) >= 4:
                    return False
        return True

    def encloses(self, i: int, j: int) -> bool:
        """ブロック j がブロック i の内側にあるか (B_i ≺_π B_j)"""
        outer, inner = self.blocks[i], self.blocks[j]
        return i != j and outer[0] < inner[0] and inner[-1] < outer[-1]


@dataclass(frozen=True)
class NestingReport:
    """入れ子構造。インデックスは blocks の 0 始まり添字"""

    partition: Partition
    inner: tuple[bool, ...]
    parent: tuple[int | None, ...]
    children: tuple[tuple[int, ...], ...]

    @property
    def roots(self) -> tuple[int, ...]:
        return tuple(i for i, parent in enumerate(self.parent) if parent is None)

    def direct_predecessor(self, i: int) -> int | None:
        return self.parent[i]

    def direct_successors(self, i: int) -> tuple[int, ...]:
        return self.children[i]

    def subtree_size(self, i: int) -> int:
        return 1 + sum(self.subtree_size(c) for c in self.children[i])


def structure(partition: Partition) -> NestingReport:
    """各ブロックの内外判定と入れ子森（直前・直後のブロック）を求める"""
    if not partition.is_noncrossing:
        raise PartitionError(f"交差する分割です: {partition}")
    parents: list[int | None] = []
    for j in range(partition.b):
        enclosing = [i for i in range(partition.b) if partition.encloses(i, j)]
        # 非交差なので外側ブロックは入れ子の鎖をなし、最小元が最大のものが最内
        parents.append(
            max(enclosing, key=lambda i: partition.blocks[i][0]) if enclosing else None
        )
    children: list[list[int]] = [[] for _ in range(partition.b)]
    for j, parent in enumerate(parents):
        if parent is not None:
            children[parent].append(j)
    return NestingReport(
        partition=partition,
        inner=tuple(parent is not None for parent in parents),
        parent=tuple(parents),
        children=tuple(tuple(c) for c in children),
    )


def has_outer_singleton(partition: Partition) -> bool:
    report = structure(partition)
    return any(
        len(block) == 1 and not report.inner[i]
        for i, block in enumerate(partition.blocks)
    )


def is_pair_inner_singleton(partition: Partition) -> bool:
    """NC₂^{1,i}(p) に属するか"""
    return (
        partition.is_pair_or_singleton
        and partition.is_noncrossing
        and not has_outer_singleton(partition)
    )


def require_pair_inner_singleton(partition: Partition) -> None:
    if not partition.is_pair_or_singleton:
        raise PartitionError(f"ペアとシングルトン以外のブロックがあります: {partition}")
    if not partition.is_noncrossing:
        raise PartitionError(f"交差する分割です: {partition}")
    if has_outer_singleton(partition):
        raise PartitionError(f"外側のシングルトンがあります: {partition}")


def reduce(partition: Partition) -> Partition:
    """シングルトンを除き、残った元の相対順を保って 1..p-s に振り直す"""
    kept = sorted(x for block in partition.blocks if len(block) > 1 for x in block)
    relabel = {x: k for k, x in enumerate(kept, start=1)}
    return Partition(
        len(kept),
        tuple(
            tuple(relabel[x] for x in block)
            for block in partition.blocks
            if len(block) > 1
        ),
    )


@dataclass(frozen=True)
class EpsilonSequence:
    """{-1, 0, +1} の列。位置 1 が先頭"""

    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(e not in (-1, 0, 1) for e in self.entries):
            raise PartitionError(f"ε の値は -1, 0, +1 のみです: {self.entries}")

    @classmethod
    def parse(cls, text: str) -> EpsilonSequence:
        """ "+0-" 形式を解析"""
        table = {"+": 1, "-": -1, "0": 0}
        try:
            return cls(tuple(table[c] for c in text.strip()))
        except KeyError as e:
            raise PartitionError(f"ε 列の表記が不正です: {text!r}") from e

    def __str__(self) -> str:
        return "".join({1: "+", -1: "-", 0: "0"}[e] for e in self.entries)

    @property
    def p(self) -> int:
        return len(self.entries)

    def heights(self) -> list[int]:
        """位置 k までの部分和"""
        total, result = 0, []
        for e in self.entries:
            total += e
            result.append(total)
        return result

    def violations(self) -> list[str]:
        """許容条件 (D_p) のうち破れているものを列挙"""
        problems: list[str] = []
        if not self.entries:
            return ["空の列です"]
        if self.entries[0] != 1:
            problems.append("first: ε_1 = +1 ではありません")
        if self.entries[-1] != -1:
            problems.append("last: ε_p = -1 ではありません")
        heights = self.heights()
        if heights[-1] != 0:
            problems.append(f"balance: 総和が 0 ではありません ({heights[-1]})")
        negative = [k for k, h in enumerate(heights, start=1) if h < 0]
        if negative:
            problems.append(f"prefix: 位置 {negative[0]} で部分和が負になります")
        outer_zero = [
            k
            for k, (e, h) in enumerate(zip(self.entries, heights, strict=True), start=1)
            if e == 0 and h <= 0
        ]
        if outer_zero:
            problems.append(f"inner-zero: 位置 {outer_zero[0]} の 0 が外側にあります")
        return problems

    @property
    def is_admissible(self) -> bool:
        return not self.violations()


def partition_of_epsilon(epsilon: EpsilonSequence) -> Partition:
    """+1 の位置 k と T(k) を組にし、0 をシングルトンにする"""
    problems = epsilon.violations()
    if problems:
        raise PartitionError(f"許容されない ε 列 {epsilon}: " + "; ".join(problems))
    blocks: list[Block] = []
    open_positions: list[int] = []
    for k, e in enumerate(epsilon.entries, start=1):
        if e == 1:
            open_positions.append(k)
        elif e == -1:
            blocks.append((open_positions.pop(), k))
        else:
            blocks.append((k,))
    return Partition.from_blocks(blocks)


def epsilon_of_partition(partition: Partition) -> EpsilonSequence:
    require_pair_inner_singleton(partition)
    entries = [0] * partition.p
    for block in partition.blocks:
        if len(block) == 2:
            entries[block[0] - 1] = 1
            entries[block[1] - 1] = -1
    return EpsilonSequence(tuple(entries))


def _paths(
    p: int, allow_zero: bool, max_height: int | None
) -> Iterator[tuple[int, ...]]:
    """高さ 0 から 0 に戻る {+1,0,-1} 路。0 は高さ正のときのみ"""

    def walk(prefix: list[int], height: int) -> Iterator[tuple[int, ...]]:
        remaining = p - len(prefix)
        if remaining == 0:
            if height == 0:
                yield tuple(prefix)
            return
        if height + 2 <= remaining and (max_height is None or height < max_height):
            prefix.append(1)
            yield from walk(prefix, height + 1)
            prefix.pop()
        if allow_zero and height > 0 and height < remaining:
            prefix.append(0)
            yield from walk(prefix, height)
            prefix.pop()
        if height > 0:
            prefix.append(-1)
            yield from walk(prefix, height - 1)
            prefix.pop()

    if p == 0:
        return
    yield from walk([], 0)


@lru_cache(maxsize=64)
def _enumerate(
    p: int, allow_zero: bool, max_height: int | None
) -> tuple[Partition, ...]:
    partitions = [
        partition_of_epsilon(EpsilonSequence(path))
        for path in _paths(p, allow_zero, max_height)
    ]
    return tuple(sorted(partitions, key=lambda part: part.blocks))


def enumerate_admissible(p: int) -> list[EpsilonSequence]:
    """許容 ε 列（NC₂^{1,i}(p) と一対一）"""
    return [EpsilonSequence(path) for path in _paths(p, True, None)]


def enumerate_pair_inner_singleton(p: int) -> list[Partition]:
    """NC₂^{1,i}(p)"""
    if p < 1:
        raise PartitionError(f"p は 1 以上: {p}")
    return list(_enumerate(p, True, None))


def enumerate_outer_pair_inner_singleton(p: int) -> list[Partition]:
    """NC_{2,o}^{1,i}(p): ペアがすべて外側（高さ 1 以下の路）"""
    if p < 1:
        raise PartitionError(f"p は 1 以上: {p}")
    return list(_enumerate(p, True, 1))


def enumerate_pair(p: int) -> list[Partition]:
    """NC₂(p)。件数は Catalan(p/2)"""
    if p < 0 or p % 2:
        raise PartitionError(f"ペア分割には偶数の p が必要です: {p}")
    if p == 0:
        return [Partition(0, ())]
    return list(_enumerate(p, False, None))


def adapted_partition(
    seq: Sequence[Hashable],
) -> tuple[Partition, tuple[Hashable, ...]]:
    """等しい点ごとにブロックを作り、ブロック順のラベル列と共に返す"""
    if not seq:
        raise PartitionError("空の列には適合分割がありません")
    positions: dict[Hashable, list[int]] = {}
    for k, point in enumerate(seq, start=1):
        positions.setdefault(point, []).append(k)
    # dict は初出順 = ブロック最小元の昇順
    labels = tuple(positions)
    blocks = tuple(tuple(positions[label]) for label in labels)
    return Partition(len(seq), blocks), labels


def all_set_partitions(p: int) -> Iterator[Partition]:
    """[p] の全集合分割（制限成長列による）"""
    if p == 0:
        yield Partition(0, ())
        return

    def grow(prefix: list[int], top: int) -> Iterator[list[int]]:
        if len(prefix) == p:
            yield prefix
            return
        for label in range(top + 2):
            prefix.append(label)
            yield from grow(prefix, max(top, label))
            prefix.pop()

    for rgs in grow([0], 0):
        blocks: dict[int, list[int]] = {}
        for position, label in enumerate(rgs, start=1):
            blocks.setdefault(label, []).append(position)
        yield Partition(p, tuple(tuple(b) for b in blocks.values()))


def enumerate_by_filter(
    p: int, predicate: Callable[[Partition], bool]
) -> list[Partition]:
    """全集合分割を述語で絞り込む（列挙の照合用）"""
    return sorted(
        (part for part in all_set_partitions(p) if predicate(part)),
        key=lambda part: part.blocks,
    )
