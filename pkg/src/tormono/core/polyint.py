"""Monic integer polynomials: evaluation, the cubic trichotomy, deflation, companions."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import List, Sequence, Tuple

from sympy import Poly, symbols

from .errors import DomainError
from .exactmat import IMat

_t = symbols("t")

# Largest degree handled by the library
MAX_DEGREE = 6


@dataclass(frozen=True)
class MonicIntPoly:
    """Monic polynomial t^n + c_{n-1} t^{n-1} + ... + c_0.

    ``coeffs`` holds c_0 .. c_{n-1}; the leading 1 is implicit.
    """

    coeffs: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) < 1:
            raise DomainError("Monic polynomial must have degree >= 1")
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @classmethod
    def from_coefficients(cls, coeffs: Sequence[int]) -> "MonicIntPoly":
        """Build from the full list c_0, ..., c_{n-1}, 1 (lowest degree first)."""
        coeffs = list(coeffs)
        if len(coeffs) < 2 or coeffs[-1] != 1:
            raise DomainError(f"Not a monic polynomial of degree >= 1: {coeffs}")
        return cls(tuple(coeffs[:-1]))

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    @property
    def all_coeffs(self) -> Tuple[int, ...]:
        """c_0, ..., c_{n-1}, 1."""
        return self.coeffs + (1,)

    def eval(self, x: int) -> int:
        """Exact value f(x) by Horner's rule."""
        acc = 0
        for c in reversed(self.all_coeffs):
            acc = acc * x + c
        return acc

    def to_sympy(self) -> Poly:
        return Poly(list(reversed(self.all_coeffs)), _t)

    def pretty(self) -> str:
        """Human form such as ``t^3 - t - 1``."""
        return str(self.to_sympy().as_expr()).replace("**", "^")

    def __str__(self) -> str:
        return ",".join(str(c) for c in self.all_coeffs)


class CubicCase(str, Enum):
    IRREDUCIBLE = "Irreducible"
    ROOT_MINUS_ONE_ONLY = "RootMinusOneOnly"
    ROOT_ONE = "RootOne"


def cubic_case(f: MonicIntPoly) -> CubicCase:
    """Classify the characteristic polynomial of an SL(3, Z) element.

    A monic cubic with constant term -1 is reducible over Z iff it has a root
    in {1, -1}. When both are roots the RootOne tag wins.

    Raises:
        DomainError: If f is not a cubic with f(0) = -1
    """
    if f.degree != 3 or f.coeffs[0] != -1:
        raise DomainError(f"Expected a monic cubic with constant term -1, got {f.pretty()}")
    if f.eval(1) == 0:
        return CubicCase.ROOT_ONE
    if f.eval(-1) == 0:
        return CubicCase.ROOT_MINUS_ONE_ONLY
    return CubicCase.IRREDUCIBLE


def deflate(f: MonicIntPoly, r: int) -> MonicIntPoly:
    """Exact quotient f(t) / (t - r).

    Raises:
        DomainError: If r is not a root of f, or f is linear
    """
    if f.eval(r) != 0:
        raise DomainError(f"{r} is not a root of {f.pretty()}")
    if f.degree == 1:
        raise DomainError("Deflating a linear polynomial leaves a constant")
    quotient, remainder = f.to_sympy().div(Poly([1, -r], _t))
    if not remainder.is_zero:
        raise DomainError(f"Inexact division of {f.pretty()} by t - {r}")
    coeffs: List[int] = [int(c) for c in quotient.all_coeffs()]
    return MonicIntPoly(tuple(reversed(coeffs[1:])))


def multiply(f: MonicIntPoly, g: MonicIntPoly) -> MonicIntPoly:
    """Product f*g, e.g. the charpoly of a block sum from the block charpolys."""
    product = f.to_sympy() * g.to_sympy()
    coeffs = [int(c) for c in product.all_coeffs()]
    return MonicIntPoly(tuple(reversed(coeffs[1:])))


def companion(f: MonicIntPoly) -> IMat:
    """Companion matrix with ones on the subdiagonal and -c_i in the last column.

    Raises:
        DomainError: If f(0) != (-1)^n, i.e. the companion would not have det 1
    """
    n = f.degree
    if n > MAX_DEGREE:
        raise DomainError(f"Degree {n} exceeds {MAX_DEGREE}")
    if f.coeffs[0] != (-1) ** n:
        raise DomainError(
            f"Constant term of {f.pretty()} must be {(-1) ** n} for a determinant-1 companion"
        )
    rows = [[0] * n for _ in range(n)]
    for i in range(1, n):
        rows[i][i - 1] = 1
    for i in range(n):
        rows[i][n - 1] = -f.coeffs[i]
    return IMat.from_rows(rows)
