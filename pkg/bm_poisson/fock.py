"""F₀ 上の離散 bm-Fock 空間シミュレータ

鎖 (ρ_n, ..., ρ₁) は先頭が最上位（最後に生成された点）で、前から後ろへ狭義減少。
空の鎖が真空 Ω。各点は単位ベクトル g_ξ だけを持つ。
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Literal, TypeAlias

from .cones import (
    ConeDescriptor,
    ConePoint,
    comparable,
    euclid_volume,
    format_point,
    interval_lattice,
    leq,
    lt,
    require_point,
)
from .errors import ConeError, InfeasibleError, PatternError
from .moments import normalize_counts
from .polynomial import RationalPolynomial

ChainVector: TypeAlias = tuple[ConePoint, ...]
Coefficient: TypeAlias = Fraction | float | RationalPolynomial
Operator = Literal["creation", "annihilation", "conservation"]

DEFAULT_MAX_STATES = 200_000

_ALIASES: dict[str, Operator] = {
    "+": "creation",
    "-": "annihilation",
    "o": "conservation",
    "creation": "creation",
    "annihilation": "annihilation",
    "conservation": "conservation",
}


def _is_zero(value: Coefficient) -> bool:
    if isinstance(value, RationalPolynomial):
        return value.is_zero()
    return value == 0


class FockState:
    """鎖 → 係数の有限和。ゼロ係数は保持せず、鎖の昇順で並べる"""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[ChainVector, Coefficient] | None = None):
        self._terms = {
            chain: value
            for chain, value in sorted((terms or {}).items())
            if not _is_zero(value)
        }

    @classmethod
    def vacuum(cls, coefficient: Coefficient = Fraction(1)) -> FockState:
        return cls({(): coefficient})

    @classmethod
    def basis(
        cls, chain: ChainVector, coefficient: Coefficient = Fraction(1)
    ) -> FockState:
        return cls({chain: coefficient})

    def items(self) -> Iterator[tuple[ChainVector, Coefficient]]:
        return iter(self._terms.items())

    @property
    def chains(self) -> tuple[ChainVector, ...]:
        return tuple(self._terms)

    def coefficient(self, chain: ChainVector) -> Coefficient:
        return self._terms.get(chain, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def scale(self, factor: Coefficient) -> FockState:
        return FockState(
            {chain: value * factor for chain, value in self._terms.items()}
        )

    def __add__(self, other: FockState) -> FockState:
        terms = dict(self._terms)
        for chain, value in other._terms.items():
            _accumulate(terms, chain, value)
        return FockState(terms)

    def __sub__(self, other: FockState) -> FockState:
        return self + other.scale(Fraction(-1))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FockState):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(tuple(self._terms.items()))

    def __repr__(self) -> str:
        return f"FockState({self._terms!r})"

    def inner(self, other: FockState) -> Coefficient:
        """⟨self, other⟩。異なる鎖は直交"""
        total: Coefficient = Fraction(0)
        for chain, value in self._terms.items():
            if chain in other._terms:
                total = total + value * other._terms[chain]
        return total


def _accumulate(
    terms: dict[ChainVector, Coefficient], chain: ChainVector, value: Coefficient
) -> None:
    if chain in terms:
        terms[chain] = terms[chain] + value
    else:
        terms[chain] = value


def is_chain(cone: ConeDescriptor, chain: ChainVector) -> bool:
    """隣接する点が狭義減少しているか"""
    return all(
        lt(cone, lower, upper)
        for upper, lower in zip(chain, chain[1:], strict=False)
    )


def format_chain(cone: ConeDescriptor, chain: ChainVector) -> str:
    if not chain:
        return "Ω"
    return "(" + " ≻ ".join(format_point(cone, point) for point in chain) + ")"


def apply(cone: ConeDescriptor, op: str, xi: ConePoint, state: FockState) -> FockState:
    """生成 (ξ ≻ 最上位)・消滅 (ξ = 最上位)・保存 (ξ = 最上位) を線形に作用"""
    if op not in _ALIASES:
        raise ValueError(f"未知の作用素です: {op}")
    kind = _ALIASES[op]
    require_point(cone, xi)
    out: dict[ChainVector, Coefficient] = {}
    for chain, value in state.items():
        if kind == "creation":
            if not chain or lt(cone, chain[0], xi):
                _accumulate(out, (xi, *chain), value)
        elif chain and chain[0] == xi:
            _accumulate(out, chain[1:] if kind == "annihilation" else chain, value)
    return FockState(out)


@lru_cache(maxsize=256)
def _above(
    cone: ConeDescriptor, rho: ConePoint
) -> dict[ConePoint, tuple[ConePoint, ...]]:
    points = interval_lattice(cone, rho)
    return {
        eta: tuple(xi for xi in points if lt(cone, eta, xi)) for eta in points
    }


def _step(
    cone: ConeDescriptor,
    rho: ConePoint,
    state: FockState,
    plus_minus: Coefficient,
    conservation: Coefficient,
    max_length: int | None = None,
) -> FockState:
    """S の 1 回作用。max_length を超える鎖は捨てる"""
    above = _above(cone, rho)
    points = tuple(above)
    out: dict[ChainVector, Coefficient] = {}
    for chain, value in state.items():
        if chain and chain[0] not in above:
            raise ConeError(
                f"鎖 {format_chain(cone, chain)} の最上位点が "
                f"[0, {format_point(cone, rho)}] の外です"
            )
        if max_length is None or len(chain) + 1 <= max_length:
            scaled = value * plus_minus
            for xi in above[chain[0]] if chain else points:
                _accumulate(out, (xi, *chain), scaled)
        if chain:
            if max_length is None or len(chain) - 1 <= max_length:
                _accumulate(out, chain[1:], value * plus_minus)
            if max_length is None or len(chain) <= max_length:
                _accumulate(out, chain, value * conservation)
    return FockState(out)


def apply_S(  # noqa: N802
    cone: ConeDescriptor,
    rho: ConePoint,
    lam: float,
    state: FockState,
    symbolic: bool = False,
) -> FockState:
    """S_ρ(λ) = v(ρ)^{-1/2} Σ (A⁺_ξ + A⁻_ξ) + λ Σ A°_ξ

    symbolic のときは正規化を後回しにし、保存作用素の重みを単項式 λ として係数に積む。
    """
    if symbolic:
        return _step(cone, rho, state, Fraction(1), RationalPolynomial.lam())
    return _step(cone, rho, state, 1 / math.sqrt(float(euclid_volume(cone, rho))), lam)


def estimate_states(cone: ConeDescriptor, rho: ConePoint, p: int) -> int:
    """真空に戻り得る鎖の数の上界 Σ_{k ≤ p/2} C(|I|, k)"""
    size = len(interval_lattice(cone, rho))
    return sum(comb(size, k) for k in range(p // 2 + 1))


def _guard(cone: ConeDescriptor, rho: ConePoint, p: int, max_states: int) -> None:
    estimate = estimate_states(cone, rho, p)
    if estimate > max_states:
        raise InfeasibleError("Fock 状態数が大きすぎます", estimate, max_states)


def vacuum_moment(
    cone: ConeDescriptor,
    rho: ConePoint,
    lam: float,
    p: int,
    max_states: int = DEFAULT_MAX_STATES,
) -> float:
    """⟨S_ρ(λ)^p Ω, Ω⟩（実数モード）"""
    if p < 1:
        raise ValueError(f"p は 1 以上: {p}")
    _guard(cone, rho, p, max_states)
    scale = 1 / math.sqrt(float(euclid_volume(cone, rho)))
    state = FockState.vacuum(1.0)
    for t in range(p):
        state = _step(cone, rho, state, scale, lam, max_length=p - t - 1)
    return float(state.coefficient(()))


def vacuum_moment_poly(
    cone: ConeDescriptor,
    rho: ConePoint,
    p: int,
    max_states: int = DEFAULT_MAX_STATES,
) -> RationalPolynomial:
    """λ の多項式としての ⟨S_ρ(λ)^p Ω, Ω⟩。λ^k の係数は v(ρ)^{-(p-k)/2} で正規化"""
    if p < 1:
        raise ValueError(f"p は 1 以上: {p}")
    _guard(cone, rho, p, max_states)
    state = FockState.vacuum(RationalPolynomial.constant(1))
    for t in range(p):
        state = _step(
            cone,
            rho,
            state,
            Fraction(1),
            RationalPolynomial.lam(),
            max_length=p - t - 1,
        )
    raw = state.coefficient(())
    counts = raw.coefficients if isinstance(raw, RationalPolynomial) else {}
    totals = {k: int(v) for k, v in counts.items()}
    return normalize_counts(totals, p, euclid_volume(cone, rho))


def single_site_moment_poly(
    cone: ConeDescriptor, xi: ConePoint, p: int
) -> RationalPolynomial:
    """A⁺_ξ + A⁻_ξ + λA°_ξ の真空モーメント"""
    if p < 0:
        raise ValueError(f"p は 0 以上: {p}")
    state = FockState.vacuum(RationalPolynomial.constant(1))
    for _ in range(p):
        state = (
            apply(cone, "+", xi, state)
            + apply(cone, "-", xi, state)
            + apply(cone, "o", xi, state).scale(RationalPolynomial.lam())
        )
    raw = state.coefficient(())
    return raw if isinstance(raw, RationalPolynomial) else RationalPolynomial()


def basis_chains(
    cone: ConeDescriptor, rho: ConePoint, max_length: int
) -> list[ChainVector]:
    """[0, ρ] 内の長さ max_length 以下の鎖（真空を含む）"""
    above = _above(cone, rho)
    chains: list[ChainVector] = [()]
    frontier: list[ChainVector] = [()]
    for _ in range(max_length):
        grown = [
            (xi, *chain)
            for chain in frontier
            for xi in (above[chain[0]] if chain else tuple(above))
        ]
        chains.extend(grown)
        frontier = grown
    return chains


# 作用素恒等式


@dataclass
class RelationReport:
    """恒等式ごとの検査数と違反"""

    cone: ConeDescriptor
    rho: ConePoint
    checked: dict[str, int] = field(default_factory=dict)
    violations: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def record(self, name: str, ok: bool, witness: Callable[[], str]) -> None:
        """witness は違反時だけ評価する"""
        self.checked[name] = self.checked.get(name, 0) + 1
        if not ok:
            self.violations.append(f"{name}: {witness()}")


def _compose(
    cone: ConeDescriptor, ops: Sequence[tuple[str, ConePoint]], u: FockState
) -> FockState:
    """ops は左から右に書いた積。右端から作用させる"""
    state = u
    for op, point in reversed(ops):
        state = apply(cone, op, point, state)
        if state.is_zero():
            break
    return state


def _witness(
    cone: ConeDescriptor, chain: ChainVector, *labelled: tuple[str, ConePoint]
) -> Callable[[], str]:
    def render() -> str:
        parts = [f"{name}={format_point(cone, point)}" for name, point in labelled]
        return ", ".join(parts) + f" on {format_chain(cone, chain)}"

    return render


def check_relations(
    cone: ConeDescriptor, rho: ConePoint, max_length: int = 4
) -> RelationReport:
    """生成・消滅の零関係、A° = A⁺A⁻、(A⁺)* = A⁻ を基底鎖の上で検査"""
    points = interval_lattice(cone, rho)
    chains = basis_chains(cone, rho, max_length)
    basis = [FockState.basis(chain) for chain in chains]
    report = RelationReport(cone, rho)

    for chain, u in zip(chains, basis, strict=True):
        for xi in points:
            eqsub = _compose(cone, [("+", xi), ("-", xi)], u)
            report.record(
                "A°=A⁺A⁻",
                eqsub == apply(cone, "o", xi, u),
                _witness(cone, chain, ("ξ", xi)),
            )
            for eta in points:
                witness = _witness(cone, chain, ("ξ", xi), ("η", eta))
                if leq(cone, eta, xi):
                    report.record(
                        "A⁺_ηA⁺_ξ=0",
                        _compose(cone, [("+", eta), ("+", xi)], u).is_zero(),
                        witness,
                    )
                    report.record(
                        "A⁻_ξA⁻_η=0",
                        _compose(cone, [("-", xi), ("-", eta)], u).is_zero(),
                        witness,
                    )
                if eta != xi:
                    for left, right in (("-", "o"), ("o", "+"), ("-", "+"), ("o", "o")):
                        report.record(
                            f"A{left}_ξA{right}_η=0",
                            _compose(cone, [(left, xi), (right, eta)], u).is_zero(),
                            witness,
                        )

    annihilated = {
        (xi, j): apply(cone, "-", xi, w) for xi in points for j, w in enumerate(basis)
    }
    for u, u_chain in zip(basis, chains, strict=True):
        for xi in points:
            created = apply(cone, "+", xi, u)
            for j, w in enumerate(basis):
                report.record(
                    "(A⁺)*=A⁻",
                    created.inner(w) == u.inner(annihilated[(xi, j)]),
                    _pair_witness(cone, u_chain, chains[j]),
                )
    return report


def check_self_adjoint(
    cone: ConeDescriptor,
    rho: ConePoint,
    lam: float,
    max_length: int = 3,
    tolerance: float = 1e-12,
) -> RelationReport:
    """⟨S u, w⟩ = ⟨u, S w⟩ を基底鎖の全組で検査"""
    chains = basis_chains(cone, rho, max_length)
    basis = [FockState.basis(chain, 1.0) for chain in chains]
    images = [apply_S(cone, rho, lam, u) for u in basis]
    report = RelationReport(cone, rho)
    for i, u in enumerate(basis):
        for j, w in enumerate(basis):
            lhs = float(images[i].inner(w))
            rhs = float(u.inner(images[j]))
            report.record(
                "S*=S",
                math.isclose(lhs, rhs, rel_tol=tolerance, abs_tol=tolerance),
                _pair_witness(cone, chains[i], chains[j]),
            )
    return report


def _pair_witness(
    cone: ConeDescriptor, u: ChainVector, w: ChainVector
) -> Callable[[], str]:
    return lambda: f"u={format_chain(cone, u)}, w={format_chain(cone, w)}"


# bm 独立性


@dataclass(frozen=True)
class Element:
    """1 点の作用素環の元。単項式の和、centered なら a - φ(a)·1"""

    notation: str
    monomials: tuple[str, ...]
    centered: bool = False

    @classmethod
    def parse(cls, notation: str) -> Element:
        """ "-+"（右端から作用）、"+|-|o"（和）、"~o|-+"（中心化）"""
        text = notation.strip()
        centered = text.startswith("~")
        body = text[1:] if centered else text
        monomials = tuple(part.strip() for part in body.split("|"))
        if not body or any(not m or set(m) - {"+", "-", "o"} for m in monomials):
            raise PatternError(f"元の表記が不正です: {notation!r}")
        return cls(text, monomials, centered)

    def act(self, cone: ConeDescriptor, point: ConePoint, u: FockState) -> FockState:
        total = FockState()
        for monomial in self.monomials:
            total = total + _compose(cone, [(op, point) for op in monomial], u)
        if self.centered:
            total = total - u.scale(self.state_value(cone, point))
        return total

    def state_value(self, cone: ConeDescriptor, point: ConePoint) -> Coefficient:
        """φ(a) = ⟨aΩ, Ω⟩（中心化前）"""
        total: Coefficient = Fraction(0)
        for monomial in self.monomials:
            image = _compose(cone, [(op, point) for op in monomial], FockState.vacuum())
            total = total + image.coefficient(())
        return total

    def phi(self, cone: ConeDescriptor, point: ConePoint) -> Coefficient:
        if self.centered:
            return Fraction(0)
        return self.state_value(cone, point)


def _bm1_pattern(cone: ConeDescriptor, points: Sequence[ConePoint]) -> str | None:
    xi, rho, eta = points
    if lt(cone, eta, rho) and lt(cone, xi, rho):
        return "ξ≺ρ≻η"
    if lt(cone, eta, rho) and not comparable(cone, xi, rho):
        return "ξ≁ρ≻η"
    if lt(cone, xi, rho) and not comparable(cone, rho, eta):
        return "ξ≺ρ≁η"
    return None


def _bm2_pattern(
    cone: ConeDescriptor, points: Sequence[ConePoint]
) -> tuple[int, int] | None:
    """ξ₁≻…≻ξ_m ≁…≁ ξ_k ≺…≺ ξ_n となる (m, k)（1 始まり）"""
    n = len(points)
    for m in range(1, n + 1):
        if not all(lt(cone, points[i + 1], points[i]) for i in range(m - 1)):
            break
        for k in range(m, n + 1):
            middle = points[m - 1 : k]
            if any(
                comparable(cone, a, b)
                for i, a in enumerate(middle)
                for b in middle[i + 1 :]
            ):
                break
            if all(lt(cone, points[i], points[i + 1]) for i in range(k - 1, n - 1)):
                return m, k
    return None


@dataclass
class IndependenceReport:
    cone: ConeDescriptor
    kind: str
    pattern: str
    points: tuple[ConePoint, ...]
    words: tuple[str, ...]
    checked: int = 0
    violations: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def check_bm_independence(
    cone: ConeDescriptor,
    rho: ConePoint,
    kind: Literal["BM1", "BM2"],
    points: Sequence[ConePoint],
    words: Sequence[str],
    max_length: int = 4,
) -> IndependenceReport:
    """BM1: a₁a₂a₃ = φ(a₂)a₁a₃ を基底鎖上で、BM2: φ(a₁⋯a_n) = ∏φ(a_j) を検査"""
    if len(points) != len(words):
        raise PatternError(f"点と元の個数が違います: {len(points)} != {len(words)}")
    interval = set(interval_lattice(cone, rho))
    for point in points:
        if point not in interval:
            raise PatternError(f"{format_point(cone, point)} は [0, ρ] の外です")
    elements = [Element.parse(word) for word in words]
    labels = ", ".join(format_point(cone, point) for point in points)

    if kind == "BM1":
        if len(points) != 3:
            raise PatternError("BM1 には 3 点が必要です")
        pattern = _bm1_pattern(cone, points)
        if pattern is None:
            raise PatternError(f"BM1 の配置になっていません: {labels}")
        if elements[0].centered or elements[2].centered:
            raise PatternError("中心化は BM1 の中央の元にだけ使えます")
        report = IndependenceReport(cone, kind, pattern, tuple(points), tuple(words))
        phi_middle = elements[1].phi(cone, points[1])
        for chain in basis_chains(cone, rho, max_length):
            u = FockState.basis(chain)
            right = elements[2].act(cone, points[2], u)
            inner_state = elements[1].act(cone, points[1], right)
            lhs = elements[0].act(cone, points[0], inner_state)
            rhs = elements[0].act(cone, points[0], right).scale(phi_middle)
            report.checked += 1
            if lhs != rhs:
                report.violations.append(f"{format_chain(cone, chain)}: {lhs} != {rhs}")
        return report

    if kind != "BM2":
        raise PatternError(f"未知の検査です: {kind}")
    if any(element.centered for element in elements):
        raise PatternError("中心化は BM1 の中央の元にだけ使えます")
    located = _bm2_pattern(cone, points)
    if located is None:
        raise PatternError(f"BM2 の配置になっていません: {labels}")
    m, k = located
    report = IndependenceReport(
        cone, kind, f"m={m}, k={k}", tuple(points), tuple(words)
    )
    state = FockState.vacuum()
    for element, point in zip(reversed(elements), reversed(points), strict=True):
        state = element.act(cone, point, state)
    lhs = state.coefficient(())
    rhs: Coefficient = Fraction(1)
    for element, point in zip(elements, points, strict=True):
        rhs = rhs * element.phi(cone, point)
    report.checked = 1
    if lhs != rhs:
        report.violations.append(f"φ(a₁⋯a_n) = {lhs} != ∏φ(a_j) = {rhs}")
    return report


BM1_WORDS: tuple[tuple[str, str, str], ...] = (
    ("+|-|o", "+|-|o", "+|-|o"),
    ("-", "-+", "+"),
    ("+|-", "~o|-+", "-|o"),
    ("o", "~+-+|-", "+"),
)

BM2_WORDS: tuple[str, ...] = ("+|-|o", "-+", "-o+", "+-|o")


def bm_presets(
    cone: ConeDescriptor, rho: ConePoint
) -> list[tuple[Literal["BM1", "BM2"], tuple[ConePoint, ...]]]:
    """区間内から各配置の最初の例を探す"""
    points = interval_lattice(cone, rho)
    presets: list[tuple[Literal["BM1", "BM2"], tuple[ConePoint, ...]]] = []
    found: set[str] = set()
    for middle in points:
        for xi in points:
            for eta in points:
                triple = (xi, middle, eta)
                pattern = _bm1_pattern(cone, triple)
                if pattern is not None and pattern not in found:
                    found.add(pattern)
                    presets.append(("BM1", triple))
    for a in points:
        for b in points:
            if lt(cone, b, a) and "dec" not in found:
                found.add("dec")
                presets.append(("BM2", (a, b)))
                for c in points:
                    if lt(cone, b, c) and c != a:
                        presets.append(("BM2", (a, b, c)))
                        break
            if lt(cone, a, b) and "inc" not in found:
                found.add("inc")
                presets.append(("BM2", (a, b)))
            if a < b and not comparable(cone, a, b) and "anti" not in found:
                found.add("anti")
                presets.append(("BM2", (a, b)))
    return presets


def run_bm_presets(
    cone: ConeDescriptor, rho: ConePoint, max_length: int = 4
) -> list[IndependenceReport]:
    reports: list[IndependenceReport] = []
    for kind, points in bm_presets(cone, rho):
        if kind == "BM1":
            for words in BM1_WORDS:
                reports.append(
                    check_bm_independence(cone, rho, kind, points, words, max_length)
                )
        else:
            for word in BM2_WORDS:
                words = tuple(word for _ in points)
                reports.append(
                    check_bm_independence(cone, rho, kind, points, words, max_length)
                )
            mixed = tuple(BM2_WORDS[i % len(BM2_WORDS)] for i in range(len(points)))
            reports.append(
                check_bm_independence(cone, rho, kind, points, mixed, max_length)
            )
    return reports
