"""λ の有理係数多項式"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping
from fractions import Fraction
from typing import TypeAlias

Number: TypeAlias = int | Fraction | float


def format_number(value: Number) -> str:
    """有理数は "num/den"、実数は 12 桁で表記"""
    if isinstance(value, float):
        return f"{value:.12g}"
    frac = Fraction(value)
    if frac.denominator == 1:
        return str(frac.numerator)
    return f"{frac.numerator}/{frac.denominator}"


def parse_number(text: str) -> Fraction | float:
    """format_number の逆変換"""
    text = text.strip()
    try:
        return Fraction(text)
    except ValueError:
        return float(text)


def _normalize(value: Number) -> Fraction | float:
    if isinstance(value, float):
        return value
    return Fraction(value)


class RationalPolynomial:
    """係数を指数→値の辞書で保持する多項式。ゼロ係数は保持しない"""

    __slots__ = ("_coefficients",)

    def __init__(self, coefficients: Mapping[int, Number] | None = None):
        terms: dict[int, Fraction | float] = {}
        for exponent, value in (coefficients or {}).items():
            if exponent < 0:
                raise ValueError(f"負の指数は扱えません: {exponent}")
            if value != 0:
                terms[int(exponent)] = _normalize(value)
        self._coefficients = dict(sorted(terms.items()))

    @classmethod
    def constant(cls, value: Number) -> RationalPolynomial:
        return cls({0: value})

    @classmethod
    def lam(cls, exponent: int = 1) -> RationalPolynomial:
        """単項式 λ^exponent"""
        return cls({exponent: 1})

    @classmethod
    def sum(cls, polynomials: Iterable[RationalPolynomial]) -> RationalPolynomial:
        total = cls()
        for poly in polynomials:
            total = total + poly
        return total

    @property
    def coefficients(self) -> dict[int, Fraction | float]:
        return dict(self._coefficients)

    @property
    def degree(self) -> int:
        """ゼロ多項式は -1"""
        return max(self._coefficients, default=-1)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(v, Fraction) for v in self._coefficients.values())

    def coefficient(self, exponent: int) -> Fraction | float:
        return self._coefficients.get(exponent, Fraction(0))

    def is_zero(self) -> bool:
        return not self._coefficients

    def evaluate(self, x: Number | complex) -> Fraction | float | complex:
        """Horner 法で評価"""
        result: Fraction | float | complex = Fraction(0)
        for exponent in range(self.degree, -1, -1):
            result = result * x + self.coefficient(exponent)
        return result

    def map_coefficients(
        self, func: Callable[[int, Fraction | float], Number]
    ) -> RationalPolynomial:
        return RationalPolynomial(
            {k: func(k, v) for k, v in self._coefficients.items()}
        )

    def __add__(self, other: RationalPolynomial | Number) -> RationalPolynomial:
        if not isinstance(other, RationalPolynomial):
            other = RationalPolynomial.constant(other)
        terms: dict[int, Number] = dict(self._coefficients)
        for exponent, value in other._coefficients.items():
            terms[exponent] = terms.get(exponent, 0) + value
        return RationalPolynomial(terms)

    __radd__ = __add__

    def __neg__(self) -> RationalPolynomial:
        return RationalPolynomial({k: -v for k, v in self._coefficients.items()})

    def __sub__(self, other: RationalPolynomial | Number) -> RationalPolynomial:
        if not isinstance(other, RationalPolynomial):
            other = RationalPolynomial.constant(other)
        return self + (-other)

    def __mul__(self, other: RationalPolynomial | Number) -> RationalPolynomial:
        if not isinstance(other, RationalPolynomial):
            return RationalPolynomial(
                {k: v * other for k, v in self._coefficients.items()}
            )
        terms: dict[int, Number] = {}
        for e1, v1 in self._coefficients.items():
            for e2, v2 in other._coefficients.items():
                terms[e1 + e2] = terms.get(e1 + e2, 0) + v1 * v2
        return RationalPolynomial(terms)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction, float)):
            other = RationalPolynomial.constant(other)
        if not isinstance(other, RationalPolynomial):
            return NotImplemented
        return self._coefficients == other._coefficients

    def __hash__(self) -> int:
        return hash(tuple(self._coefficients.items()))

    def __repr__(self) -> str:
        return f"RationalPolynomial({self.to_json()!r})"

    def __str__(self) -> str:
        """例: "λ^4 + 129/35·λ^2 + 443/350" """
        if not self._coefficients:
            return "0"
        parts: list[str] = []
        for exponent in sorted(self._coefficients, reverse=True):
            value = self._coefficients[exponent]
            negative = value < 0
            magnitude = -value if negative else value
            if exponent == 0:
                body = format_number(magnitude)
            else:
                power = "λ" if exponent == 1 else f"λ^{exponent}"
                body = (
                    power if magnitude == 1 else f"{format_number(magnitude)}·{power}"
                )
            if not parts:
                parts.append(f"-{body}" if negative else body)
            else:
                parts.append(f"- {body}" if negative else f"+ {body}")
        return " ".join(parts)

    def to_json(self) -> dict[str, str]:
        """{"0": "443/350", "2": "129/35", "4": "1"}"""
        return {str(k): format_number(v) for k, v in self._coefficients.items()}

    @classmethod
    def from_json(
        cls, data: Mapping[str | int, str | int | float]
    ) -> RationalPolynomial:
        terms: dict[int, Number] = {}
        for key, value in data.items():
            terms[int(key)] = (
                parse_number(value) if isinstance(value, str) else _normalize(value)
            )
        return cls(terms)
