"""Torus bundles over S^1 and T^m, modelled by their monodromy matrices."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .budget import DEFAULT_BOUND
from .errors import CertificateError, DimensionError, DomainError, MatrixFormatError
from .exactmat import (
    IMat,
    charpoly,
    conjugate,
    det,
    direct_sum,
    format_matrix,
    parse_matrix,
    require_sl,
    unimodular_inverse,
)
from .monodromy3 import ReducedForm, ao_conjugator, newman_reduce
from .oracle import MAX_ORACLE_DIM, brute_similarity, similarity_invariants
from .polyint import CubicCase, cubic_case
from .sl2z import conjugate_gl2, conjugate_sl2

logger = logging.getLogger(__name__)

BASE_SEPARATOR = "@"


@dataclass(frozen=True)
class TorusBundle:
    """T^n-bundle over S^1, given by its monodromy in SL(n, Z)."""

    monodromy: IMat

    def __post_init__(self) -> None:
        require_sl(self.monodromy, "Monodromy")

    @property
    def fiber_dim(self) -> int:
        return self.monodromy.n

    @classmethod
    def from_literal(cls, text: str) -> "TorusBundle":
        return cls(parse_matrix(text))

    def __str__(self) -> str:
        return format_matrix(self.monodromy)


@dataclass(frozen=True)
class ThickenedBundle:
    """Product of ``core`` with the trivial identity bundle over T^(m-1), a bundle over T^m."""

    base_dim: int
    core: TorusBundle

    def __post_init__(self) -> None:
        if self.base_dim < 1:
            raise DomainError(f"Base dimension must be >= 1, got {self.base_dim}")

    @property
    def fiber_dim(self) -> int:
        return self.core.fiber_dim

    def __str__(self) -> str:
        return f"{self.core}{BASE_SEPARATOR}{self.base_dim}"


def parse_bundle(text: str) -> ThickenedBundle:
    """Parse ``"<matrix literal>[@m]"``; without a suffix the base is S^1.

    Raises:
        MatrixFormatError: If the literal or the base dimension does not parse
        DomainError: If the monodromy does not have determinant 1
    """
    literal, sep, base = text.partition(BASE_SEPARATOR)
    base_dim = 1
    if sep:
        try:
            base_dim = int(base.strip())
        except ValueError:
            raise MatrixFormatError(f"Invalid base dimension in {text!r}") from None
    return ThickenedBundle(base_dim, TorusBundle(parse_matrix(literal)))


def fiber_product(E1: TorusBundle, E2: TorusBundle) -> TorusBundle:
    """Fiber product over S^1: the monodromy is M1 (+) M2."""
    return TorusBundle(direct_sum(E1.monodromy, E2.monodromy))


def thicken(E: TorusBundle, base_dim: int) -> ThickenedBundle:
    return ThickenedBundle(base_dim, E)


class IsoStatus(str, Enum):
    ISO = "Iso"
    NOT_ISO = "NotIso"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class IsoResult:
    """Isomorphism outcome; with Iso, P^-1 M1 P = M2 and det P = 1."""

    status: IsoStatus
    P: Optional[IMat] = None
    invariant: Optional[str] = None
    note: str = ""


def _simple_eigenvalue_iso(A: IMat, B: IMat, ra: ReducedForm, rb: ReducedForm) -> IsoResult:
    # a conjugator fixes the eigenline, so it induces a GL(2, Z) map on the quotient blocks
    quotient = conjugate_gl2(ra.A2, rb.A2)
    if not quotient.conjugate:
        return IsoResult(IsoStatus.NOT_ISO, invariant=f"quotient blocks differ ({quotient.invariant})")

    P2 = quotient.P
    d = det(P2)
    D = direct_sum(IMat.identity(1).scale(d), P2)
    moved = tuple(d * x for x in (IMat.row_vector(ra.a) @ P2).row(0))
    Q = ao_conjugator(moved, rb.a, rb.A2)
    if Q is None:
        return IsoResult(IsoStatus.NOT_ISO, invariant="no centralizer unit carries one extension row to the other")

    P = unimodular_inverse(ra.R) @ D @ Q @ rb.R
    if det(P) != 1 or conjugate(A, P) != B:
        raise CertificateError(f"Isomorphism certificate {P} does not verify")
    return IsoResult(IsoStatus.ISO, P)


def isomorphic(E1: TorusBundle, E2: TorusBundle, bound: int = DEFAULT_BOUND) -> IsoResult:
    """Decide whether two bundles are isomorphic, i.e. their monodromies are SL(n, Z)-conjugate.

    n = 2 is decided by reduction theory. n = 3 with a simple eigenvalue 1 is
    decided through Newman forms and the block conjugator. Everything else
    goes through the cheap invariants and then the bounded lattice search,
    which may end in Unknown.

    Raises:
        DimensionError: If the fiber dimensions differ
    """
    A, B = E1.monodromy, E2.monodromy
    if E1.fiber_dim != E2.fiber_dim:
        raise DimensionError(f"Fiber dimensions differ: {E1.fiber_dim} vs {E2.fiber_dim}")
    n = E1.fiber_dim

    if A == B:
        return IsoResult(IsoStatus.ISO, IMat.identity(n))
    fa, fb = charpoly(A), charpoly(B)
    if fa != fb:
        return IsoResult(IsoStatus.NOT_ISO, invariant=f"charpoly {fa.pretty()} vs {fb.pretty()}")

    if n == 2:
        r = conjugate_sl2(A, B)
        if r.conjugate:
            return IsoResult(IsoStatus.ISO, r.P)
        return IsoResult(IsoStatus.NOT_ISO, invariant=r.invariant)

    if n == 3 and cubic_case(fa) is CubicCase.ROOT_ONE:
        ra, rb = newman_reduce(A, 1), newman_reduce(B, 1)
        if ra.A2.trace() != 2:
            return _simple_eigenvalue_iso(A, B, ra, rb)

    if n > MAX_ORACLE_DIM:
        return IsoResult(IsoStatus.UNKNOWN, note=f"no search beyond {MAX_ORACLE_DIM}x{MAX_ORACLE_DIM}")
    ia, ib = similarity_invariants(A), similarity_invariants(B)
    if ia != ib:
        return IsoResult(IsoStatus.NOT_ISO, invariant=f"Smith forms of M - I, M + I: {ia[1:]} vs {ib[1:]}")

    report = brute_similarity(A, B, bound)
    if report.found:
        return IsoResult(IsoStatus.ISO, report.P)
    logger.debug("isomorphism of %s and %s undecided within bound %d", A, B, bound)
    return IsoResult(IsoStatus.UNKNOWN, note=report.note or f"none within bound {bound}")
