"""SL(2, Z) machinery.

Trace classes, the integral centralizer Z[N] of a non-scalar 2x2 matrix and its
unit group, reductions of that unit group modulo m, and a conjugacy decision
with verified certificates:

* parabolic: the upper-triangular normal form [[s, k], [0, s]],
* elliptic: exhaustive search in the rank-2 intertwiner lattice,
* hyperbolic: cyclic classes of positive words in R = [[1,1],[0,1]] and
  L = [[1,0],[1,1]] (reduction theory).
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Tuple

from .budget import FUNDAMENTAL_UNIT_CAP
from .errors import CertificateError, DimensionError, DomainError, SearchBudgetExceeded
from .exactmat import (
    IMat,
    complete_primitive,
    conjugate,
    content,
    det,
    intertwiner_basis,
    kernel_basis,
    normalize_sign,
    primitive_part,
    require_sl,
    unimodular_inverse,
)

logger = logging.getLogger(__name__)

I2 = IMat.identity(2)
R_GEN = IMat.from_rows([[1, 1], [0, 1]])
L_GEN = IMat.from_rows([[1, 0], [1, 1]])
S_GEN = IMat.from_rows([[0, -1], [1, 0]])
J_FLIP = IMat.from_rows([[1, 0], [0, -1]])


class TraceClass(str, Enum):
    ELLIPTIC = "Elliptic"
    PARABOLIC = "Parabolic"
    HYPERBOLIC = "Hyperbolic"


def _require_2x2(A: IMat) -> None:
    if A.rows != 2 or A.cols != 2:
        raise DimensionError(f"Expected a 2x2 matrix, got {A.rows}x{A.cols}")


def trace_class(A: IMat) -> TraceClass:
    t = abs(A.trace())
    if t < 2:
        return TraceClass.ELLIPTIC
    if t == 2:
        return TraceClass.PARABOLIC
    return TraceClass.HYPERBOLIC


def is_scalar(A: IMat) -> bool:
    return A[0, 1] == 0 and A[1, 0] == 0 and A[0, 0] == A[1, 1]


def centralizer_base(A: IMat) -> IMat:
    """Generator N of the integral centralizer {X : XA = AX} = Z[N].

    N is A itself when gcd(a12, a21, a22 - a11) = 1, otherwise (A - a11 I) / g.

    Raises:
        DomainError: If A is scalar (its centralizer is all of M2(Z))
    """
    _require_2x2(A)
    a, b, c, d = A.entries
    g = content((b, c, d - a))
    if g == 0:
        raise DomainError(f"Scalar matrix {A} has no rank-2 centralizer")
    if g == 1:
        return A
    return IMat.from_rows([[0, b // g], [c // g, (d - a) // g]])


def commutant_coordinates(X: IMat, base: IMat) -> Tuple[int, int]:
    """Coordinates (p, q) with X = p I + q base.

    Raises:
        DomainError: If X is not in Z[base]
    """
    if base[0, 1]:
        q, r = divmod(X[0, 1], base[0, 1])
    elif base[1, 0]:
        q, r = divmod(X[1, 0], base[1, 0])
    else:
        q, r = divmod(X[1, 1] - X[0, 0], base[1, 1] - base[0, 0])
    p = X[0, 0] - q * base[0, 0]
    if r or I2.scale(p) + base.scale(q) != X:
        raise DomainError(f"{X} does not lie in Z[{base}]")
    return p, q


@dataclass(frozen=True)
class CommutantElement:
    """The element p I + q base of the order Z[base]."""

    p: int
    q: int
    base: IMat

    @property
    def matrix(self) -> IMat:
        return I2.scale(self.p) + self.base.scale(self.q)

    @property
    def det(self) -> int:
        t = self.base.trace()
        return self.p * self.p + self.p * self.q * t + self.q * self.q * det(self.base)

    @property
    def is_unit(self) -> bool:
        return self.det in (1, -1)

    def __mul__(self, other: "CommutantElement") -> "CommutantElement":
        if other.base != self.base:
            raise DomainError("Commutant elements over different bases")
        t = self.base.trace()
        d = det(self.base)
        # base^2 = t base - d I
        return CommutantElement(
            self.p * other.p - self.q * other.q * d,
            self.p * other.q + self.q * other.p + self.q * other.q * t,
            self.base,
        )

    def inverse(self) -> "CommutantElement":
        """Inverse of a unit: det * adj, with adj(p I + q N) = (p + q tr N) I - q N."""
        if not self.is_unit:
            raise DomainError(f"{self.matrix} is not a unit")
        t = self.base.trace()
        u = self.det
        return CommutantElement(u * (self.p + self.q * t), -u * self.q, self.base)

    def residue(self, m: int) -> Tuple[int, int]:
        return self.p % m, self.q % m


def _int_roots(a: int, b: int, c: int) -> List[int]:
    """Integer roots of a x^2 + b x + c with a != 0."""
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    r = math.isqrt(disc)
    if r * r != disc:
        return []
    roots = set()
    for num in (-b + r, -b - r):
        if num % (2 * a) == 0:
            roots.add(num // (2 * a))
    return sorted(roots)


def _finite_units(base: IMat) -> List[CommutantElement]:
    # positive definite norm form: |q| <= 1 and |2p + tq| <= 2
    t = base.trace()
    units = []
    for q in (0, 1, -1):
        for p in range(-(2 + abs(t)), 3 + abs(t)):
            e = CommutantElement(p, q, base)
            if e.det == 1:
                units.append(e)
    return units


def _unipotent_generator(A: IMat, base: IMat) -> CommutantElement:
    s = 1 if A.trace() > 0 else -1
    M = A - I2.scale(s)
    c = content(M.entries)
    U0 = I2 + IMat(2, 2, tuple(x // c for x in M.entries))
    return CommutantElement(*commutant_coordinates(U0, base), base)


def fundamental_unit(A: IMat, cap: int = FUNDAMENTAL_UNIT_CAP) -> CommutantElement:
    """A fundamental unit of Z[N] for hyperbolic (indefinite) A.

    Iterative deepening on |q|, solving p^2 + t q p + d q^2 = +-1 exactly at
    each level. Among the smallest-|q| solutions the one of least |trace|
    generates the unit group modulo -I. A itself is a unit, which bounds the
    search by its own q-coordinate.

    Raises:
        SearchBudgetExceeded: If that bound exceeds ``cap``
        DomainError: If the norm form of A is not indefinite
    """
    base = centralizer_base(A)
    t, d = base.trace(), det(base)
    if t * t - 4 * d <= 0:
        raise DomainError(f"{A} has no infinite unit group")
    _, own_q = commutant_coordinates(A, base)
    if abs(own_q) > cap:
        raise SearchBudgetExceeded(f"Unit search for {A} needs |q| up to {abs(own_q)} > {cap}")

    candidates: List[Tuple[int, int]] = []
    for q in range(1, abs(own_q) + 1):
        for norm in (1, -1):
            for p in _int_roots(1, t * q, d * q * q - norm):
                candidates.extend([(p, q), (-p, -q)])
        if candidates:
            logger.debug("unit search for %s stopped at |q| = %d", A, q)
            break

    p, q = min(
        candidates,
        key=lambda pq: (abs(2 * pq[0] + pq[1] * t), max(abs(pq[0]), abs(pq[1])), -pq[0], -pq[1]),
    )
    eps = CommutantElement(p, q, base)
    if not _generates(eps, A, abs(own_q)):
        raise CertificateError(f"Unit {eps.matrix} does not generate {A} up to sign")
    return eps


def _generates(eps: CommutantElement, A: IMat, q_bound: int) -> bool:
    targets = (A, -A)
    power = eps
    inv = eps.inverse()
    inv_power = inv
    while abs(power.q) <= q_bound:
        if power.matrix in targets or inv_power.matrix in targets:
            return True
        power = power * eps
        inv_power = inv_power * inv
    return False


def unit_generators(A2: IMat, cap: int = FUNDAMENTAL_UNIT_CAP) -> List[CommutantElement]:
    """Generators of {X in Z[N] : det X = +-1} for non-scalar A2.

    Always -I and A2 itself; the elliptic case lists every unit, the parabolic
    case adds the primitive unipotent I + M / content(M), the hyperbolic case a
    fundamental unit.

    Raises:
        DomainError: If A2 is scalar
    """
    _require_2x2(A2)
    if det(A2) not in (1, -1):
        raise DomainError(f"{A2} is not unimodular")
    base = centralizer_base(A2)
    gens = [CommutantElement(-1, 0, base), CommutantElement(*commutant_coordinates(A2, base), base)]

    t, d = base.trace(), det(base)
    disc = t * t - 4 * d
    if disc < 0:
        extra = _finite_units(base)
    elif disc == 0:
        extra = [_unipotent_generator(A2, base)]
    else:
        extra = [fundamental_unit(A2, cap)]

    for e in extra:
        if e not in gens:
            gens.append(e)
    return gens


def _unit_closure(A2: IMat, m: int) -> Dict[Tuple[int, int, int], CommutantElement]:
    if m == 0:
        raise DomainError("Modulus 0: compare exact units instead")
    M = abs(m)
    gens = unit_generators(A2)
    base = gens[0].base
    start = CommutantElement(1, 0, base)

    def key(e: CommutantElement) -> Tuple[int, int, int]:
        p, q = e.residue(M)
        return p, q, e.det

    seen: Dict[Tuple[int, int, int], CommutantElement] = {key(start): start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = x * g
            k = key(y)
            if k not in seen:
                seen[k] = y
                queue.append(y)
    logger.debug("unit group of %s mod %d has %d residue classes", A2, M, len(seen))
    return seen


def units_mod(A2: IMat, m: int, det_one: bool = False) -> FrozenSet[Tuple[int, int]]:
    """Reductions mod |m| of the unit group of Z[N], as (p, q) residue pairs.

    Args:
        A2: Non-scalar 2x2 unimodular matrix
        m: Nonzero modulus
        det_one: Keep only residues of determinant-1 units

    Raises:
        DomainError: If m = 0 or A2 is scalar
    """
    closure = _unit_closure(A2, m)
    return frozenset((p, q) for (p, q, d) in closure if d == 1 or not det_one)


def unit_representatives(A2: IMat, m: int) -> Dict[Tuple[int, int, int], CommutantElement]:
    """One actual unit per (p mod |m|, q mod |m|, det) class of the unit group."""
    return dict(_unit_closure(A2, m))


# --- conjugacy -------------------------------------------------------------


@dataclass(frozen=True)
class ConjugacyResult:
    """Outcome of a conjugacy test; P satisfies P^-1 A P = B when conjugate."""

    conjugate: bool
    P: Optional[IMat] = None
    invariant: Optional[str] = None


@dataclass(frozen=True)
class CanonicalForm:
    """Class representative with conjugator^-1 A conjugator = matrix."""

    kind: TraceClass
    matrix: IMat
    conjugator: IMat
    invariant: str


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


def _sign_sqrt_diff(z: int, w: int, D: int) -> int:
    # sign of z - w*sqrt(D) for non-square D > 0
    if w == 0:
        return _sign(z)
    if z >= 0 and w < 0:
        return 1
    if z <= 0 and w > 0:
        return -1
    diff = _sign(z * z - w * w * D)
    return diff if z > 0 else -diff


def _cmp_quad(u: int, v: int, P: int, e: int, Q: int, D: int) -> int:
    """Sign of u/v - (P + e sqrt(D)) / Q, for v > 0 and Q != 0."""
    return _sign_sqrt_diff(u * Q - v * P, v * e, D) * _sign(Q)


def _floor_quad(P: int, e: int, Q: int, D: int) -> int:
    n = (P + e * math.isqrt(D)) // Q
    while _cmp_quad(n, 1, P, e, Q, D) > 0:
        n -= 1
    while _cmp_quad(n + 1, 1, P, e, Q, D) < 0:
        n += 1
    return n


def _separating_conjugator(B: IMat) -> IMat:
    """P in SL(2, Z) with P(0) between the fixed points of B and P(oo) outside.

    Then P^-1 B P has its two fixed points on opposite sides of 0, i.e. its
    off-diagonal entries share a sign.
    """
    a, b, c, d = B.entries
    D = (a + d) ** 2 - 4
    P0, Q0 = a - d, 2 * c
    lo_e, hi_e = (-1, 1) if Q0 > 0 else (1, -1)

    def below_lo(num: int, den: int) -> bool:
        return _cmp_quad(num, den, P0, lo_e, Q0, D) < 0

    def above_hi(num: int, den: int) -> bool:
        return _cmp_quad(num, den, P0, hi_e, Q0, D) > 0

    n = _floor_quad(P0, lo_e, Q0, D) + 1
    if not above_hi(n, 1):
        return IMat.from_rows([[1, n], [0, 1]])

    # Stern-Brocot descent between n-1 and n with galloping runs
    ln, ld, rn, rd = n - 1, 1, n, 1
    while True:
        mn, md = ln + rn, ld + rd
        if below_lo(mn, md):
            k = _gallop(lambda j: below_lo(ln + j * rn, ld + j * rd))
            ln, ld = ln + k * rn, ld + k * rd
        elif above_hi(mn, md):
            k = _gallop(lambda j: above_hi(rn + j * ln, rd + j * ld))
            rn, rd = rn + k * ln, rd + k * ld
        else:
            return IMat.from_rows([[rn, mn], [rd, md]])


def _gallop(holds) -> int:
    """Largest k >= 1 with holds(k), given holds(1) and eventual failure."""
    hi = 2
    while holds(hi):
        hi *= 2
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if holds(mid):
            lo = mid
        else:
            hi = mid
    return lo


def _rl_word(X: IMat) -> str:
    """Factor a nonnegative SL(2, Z) matrix as a word in R and L."""
    letters: List[str] = []
    a, b, c, d = X.entries
    while (a, b, c, d) != (1, 0, 0, 1):
        if c == 0:
            letters.append("R" * b)
            break
        if b == 0:
            letters.append("L" * c)
            break
        if a >= c and b >= d:
            k = min(a // c, b // d)
            letters.append("R" * k)
            a, b = a - k * c, b - k * d
        else:
            k = min(c // a, d // b)
            letters.append("L" * k)
            c, d = c - k * a, d - k * b
    return "".join(letters)


def word_matrix(word: str) -> IMat:
    M = I2
    for letter in word:
        M = M @ (R_GEN if letter == "R" else L_GEN)
    return M


def _min_rotation_index(word: str) -> int:
    best = 0
    for j in range(1, len(word)):
        if word[j:] + word[:j] < word[best:] + word[:best]:
            best = j
    return best


def _hyperbolic_canonical(A: IMat) -> CanonicalForm:
    s = 1 if A.trace() > 0 else -1
    B = A.scale(s)
    P = I2 if B[0, 1] * B[1, 0] > 0 else _separating_conjugator(B)
    X = conjugate(B, P)
    if X[0, 1] < 0:
        P = P @ S_GEN
        X = conjugate(B, P)
    if min(X.entries) < 0:
        raise CertificateError(f"Reduction of {A} did not reach a nonnegative matrix: {X}")

    word = _rl_word(X)
    j = _min_rotation_index(word)
    conj = P @ word_matrix(word[:j])
    canon = word[j:] + word[:j]
    C = word_matrix(canon).scale(s)
    return CanonicalForm(TraceClass.HYPERBOLIC, C, conj, f"{'+' if s > 0 else '-'}{canon}")


def _parabolic_canonical(A: IMat) -> CanonicalForm:
    s = A.trace() // 2
    v = normalize_sign(primitive_part(kernel_basis(A - I2.scale(s))[0]))
    R = complete_primitive(v)
    P = unimodular_inverse(R)
    C = R @ A @ P
    if C[1, 0] != 0 or C[0, 0] != s or C[1, 1] != s:
        raise CertificateError(f"Parabolic reduction of {A} failed: {C}")
    return CanonicalForm(TraceClass.PARABOLIC, C, P, f"parabolic s={s} k={C[0, 1]}")


def _det_one_in_lattice(basis: List[IMat]) -> Optional[IMat]:
    # det(x1 P1 + x2 P2) = al x1^2 + be x1 x2 + ga x2^2, definite for elliptic classes
    if len(basis) != 2:
        return None
    P1, P2 = basis
    al, ga = det(P1), det(P2)
    be = det(P1 + P2) - al - ga
    delta = 4 * al * ga - be * be
    if delta <= 0 or al <= 0:
        return None
    x2_max = math.isqrt(4 * al // delta) + 1
    for x2 in range(-x2_max, x2_max + 1):
        for x1 in _int_roots(al, be * x2, ga * x2 * x2 - 1):
            P = P1.scale(x1) + P2.scale(x2)
            if det(P) == 1:
                return P
    return None


def _elliptic_canonical(A: IMat) -> CanonicalForm:
    t = A.trace()
    X = IMat.from_rows([[0, -1], [1, t]])
    for target, tag in ((X, "+"), (unimodular_inverse(X), "-")):
        P = _det_one_in_lattice(intertwiner_basis(A, target))
        if P is not None:
            return CanonicalForm(TraceClass.ELLIPTIC, target, P, f"elliptic t={t} {tag}")
    raise CertificateError(f"Elliptic {A} matched no class representative")


def canonical_form(A: IMat) -> CanonicalForm:
    """Reduction-theory normal form of A in SL(2, Z) with its conjugator."""
    _require_2x2(A)
    require_sl(A, "SL(2, Z) element")
    if is_scalar(A):
        return CanonicalForm(TraceClass.PARABOLIC, A, I2, f"scalar {A[0, 0]}")
    kind = trace_class(A)
    if kind is TraceClass.ELLIPTIC:
        cf = _elliptic_canonical(A)
    elif kind is TraceClass.PARABOLIC:
        cf = _parabolic_canonical(A)
    else:
        cf = _hyperbolic_canonical(A)
    if conjugate(A, cf.conjugator) != cf.matrix or det(cf.conjugator) != 1:
        raise CertificateError(f"Canonical conjugator for {A} does not verify")
    return cf


def conjugate_sl2(A: IMat, B: IMat) -> ConjugacyResult:
    """Decide SL(2, Z)-conjugacy of A and B.

    Returns:
        ConjugacyResult with P (P^-1 A P = B, det P = 1) or the invariant that
        tells the classes apart

    Examples:
        >>> r = conjugate_sl2(IMat.from_rows([[2, 1], [1, 1]]), IMat.from_rows([[1, 1], [1, 2]]))
        >>> r.P.tolist()
        [[1, 1], [0, 1]]
    """
    _require_2x2(A)
    _require_2x2(B)
    require_sl(A, "SL(2, Z) element")
    require_sl(B, "SL(2, Z) element")
    if A == B:
        return ConjugacyResult(True, I2)
    if A.trace() != B.trace():
        return ConjugacyResult(False, invariant=f"trace {A.trace()} != {B.trace()}")
    if is_scalar(A) or is_scalar(B):
        return ConjugacyResult(False, invariant="scalar class")

    ca, cb = canonical_form(A), canonical_form(B)
    if ca.matrix != cb.matrix:
        return ConjugacyResult(False, invariant=f"{ca.invariant} vs {cb.invariant}")

    P = ca.conjugator @ unimodular_inverse(cb.conjugator)
    if det(P) != 1 or conjugate(A, P) != B:
        raise CertificateError(f"Conjugator {P} for {A} ~ {B} does not verify")
    return ConjugacyResult(True, P)


def conjugate_gl2(A: IMat, B: IMat) -> ConjugacyResult:
    """GL(2, Z)-conjugacy of determinant-1 matrices, via B and J B J with J = diag(1, -1)."""
    direct = conjugate_sl2(A, B)
    if direct.conjugate:
        return direct
    flipped = conjugate_sl2(A, J_FLIP @ B @ J_FLIP)
    if flipped.conjugate:
        return ConjugacyResult(True, flipped.P @ J_FLIP)
    return ConjugacyResult(False, invariant=f"GL(2, Z): {direct.invariant}")
