"""SL(3, Z) monodromies with an eigenvalue +-1.

Newman reduction puts A in the shape [[lam, a], [0, A2]]. The rest of the
module works on that shape: the congruence test on the row a, explicit
block-splitting conjugators, and the stabilized 4x4 splitting of (1) (+) A.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .budget import DEFAULT_BOUND, STABLE_BLOCK_BOUND, STABLE_LATTICE_BOUND, STABLE_SEARCH_POINTS
from .errors import CertificateError, DomainError, RegimeError
from .exactmat import (
    IMat,
    IVec,
    charpoly,
    complete_primitive,
    conjugate,
    det,
    direct_sum,
    kernel_basis,
    normalize_sign,
    primitive_part,
    rank,
    rational_inverse,
    require_sl,
    unimodular_inverse,
    xgcd,
)
from .oracle import brute_similarity, sl2_representatives
from .sl2z import (
    I2,
    CommutantElement,
    centralizer_base,
    conjugate_gl2,
    is_scalar,
    unit_generators,
    unit_representatives,
    units_mod,
)

logger = logging.getLogger(__name__)

UNPROVEN_REGIME = "UnprovenRegime"
SINGULAR_BLOCK = "SingularBlock"

# Lifts of GL(2, F_2); for A2 = -I the congruences live mod 2
_GL2_F2_LIFTS = tuple(
    IMat.from_rows(rows)
    for rows in (
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[1, 1], [0, 1]],
        [[1, 0], [1, 1]],
        [[0, 1], [1, 1]],
        [[1, 1], [1, 0]],
    )
)


@dataclass(frozen=True)
class ReducedForm:
    """Newman form data: R A R^-1 = [[lam, a], [0, A2]]."""

    lam: int
    a: IVec
    A2: IMat
    R: IMat

    @property
    def matrix(self) -> IMat:
        """The reduced matrix [[lam, a], [0, A2]]."""
        return IMat.from_rows(
            [
                [self.lam, self.a[0], self.a[1]],
                [0, self.A2[0, 0], self.A2[0, 1]],
                [0, self.A2[1, 0], self.A2[1, 1]],
            ]
        )


def newman_reduce(A: IMat, lam: int) -> ReducedForm:
    """Conjugate A into the shape [[lam, a], [0, A2]].

    R completes the sign-normalized primitive eigenvector of A for ``lam``.
    The shape and det A2 = lam are checked before returning.

    Raises:
        DomainError: If lam is not an eigenvalue of A
        CertificateError: If the reduced matrix does not have the expected shape

    Examples:
        >>> rf = newman_reduce(IMat.from_rows([[1, 0, 1], [0, 2, 1], [0, 1, 1]]), 1)
        >>> rf.a, rf.A2.tolist()
        ((0, 1), [[2, 1], [1, 1]])
    """
    require_sl(A, "SL(3, Z) element")
    if A.n != 3:
        raise DomainError(f"Newman reduction needs a 3x3 matrix, got {A.n}x{A.n}")
    if lam not in (1, -1) or charpoly(A).eval(lam) != 0:
        raise DomainError(f"{lam} is not an eigenvalue of {A}")

    kernel = kernel_basis(A - IMat.identity(3).scale(lam))
    if not kernel:
        raise CertificateError(f"Eigenvalue {lam} of {A} has no integer eigenvector")
    v = normalize_sign(primitive_part(kernel[0]))
    R = complete_primitive(v)
    C = R @ A @ unimodular_inverse(R)

    if (C[0, 0], C[1, 0], C[2, 0]) != (lam, 0, 0):
        raise CertificateError(f"Reduction of {A} gave {C}")
    A2 = C.block(1, 3, 1, 3)
    if det(A2) != lam:
        raise CertificateError(f"Reduced block {A2} has determinant {det(A2)}, expected {lam}")
    return ReducedForm(lam, (C[0, 1], C[0, 2]), A2, R)


class Convention(str, Enum):
    """Sign of tau in the congruence lemma.

    NEGATED_TRACE takes tau = -Tr(A2) (the coefficient of t in g). TRACE takes
    tau = Tr(A2), the sign under which the lemma holds exactly.
    """

    NEGATED_TRACE = "negated-trace"
    TRACE = "trace"


@dataclass(frozen=True)
class AOContext:
    A2: IMat
    tau: int
    m: int
    A0: IMat
    convention: Convention = Convention.NEGATED_TRACE

    @classmethod
    def from_block(cls, A2: IMat, convention: Convention = Convention.NEGATED_TRACE) -> "AOContext":
        tr = A2.trace()
        tau = -tr if convention is Convention.NEGATED_TRACE else tr
        return cls(A2, tau, tau - 2, A2 - I2.scale(tau - 1), convention)

    @property
    def no_integer_roots(self) -> bool:
        """g = t^2 - Tr(A2) t + 1 has no root in {1, -1}."""
        return self.A2.trace() not in (2, -2)

    @property
    def admissible(self) -> bool:
        if self.convention is Convention.TRACE:
            return self.A2.trace() != 2
        return self.no_integer_roots


@dataclass(frozen=True)
class CongruenceReport:
    holds: bool
    values: IVec
    modulus: int
    regime: Optional[str] = None
    convention: Convention = Convention.NEGATED_TRACE


def _reduces_to_zero(values: IVec, modulus: int) -> bool:
    if modulus == 0:
        return all(v == 0 for v in values)
    return all(v % modulus == 0 for v in values)


def ao_congruence(a: IVec, A2: IMat, convention: Convention = Convention.NEGATED_TRACE) -> CongruenceReport:
    """Evaluate the splitting congruence on the row a.

    With NEGATED_TRACE the values are a (A2 + I) modulo Tr(A2) + 2; with TRACE
    they are a (A2 - I) modulo Tr(A2) - 2. Modulus 0 means exact equality.

    Examples:
        >>> report = ao_congruence((0, 1), IMat.from_rows([[2, 1], [1, 1]]))
        >>> report.holds, report.values, report.modulus
        (False, (1, 2), 5)
    """
    tr = A2.trace()
    if convention is Convention.NEGATED_TRACE:
        values = IMat.row_vector(a) @ (A2 + I2)
        modulus = tr + 2
    else:
        values = IMat.row_vector(a) @ (A2 - I2)
        modulus = tr - 2
    row = values.row(0)
    context = AOContext.from_block(A2, convention)
    regime = None if context.no_integer_roots else UNPROVEN_REGIME
    return CongruenceReport(_reduces_to_zero(row, modulus), row, modulus, regime, convention)


def _residue_units(A2: IMat, m: int, det_one: bool) -> List[IMat]:
    """Unit matrices of the centralizer of A2, one per residue class mod m."""
    if is_scalar(A2):
        lifts = [U for U in _GL2_F2_LIFTS if det(U) == 1 or not det_one]
        return lifts + [-U for U in lifts]
    reps = unit_representatives(A2, m)
    return [e.matrix for (_, _, d), e in reps.items() if d == 1 or not det_one]


def ao_similar(
    a: IVec,
    b: IVec,
    A2: IMat,
    convention: Convention = Convention.NEGATED_TRACE,
    det_one: bool = False,
) -> bool:
    """Whether [[1, a], [0, A2]] and [[1, b], [0, A2]] pass the similarity congruence.

    True iff b A0 R2 = u a A0 mod m for some unit R2 of the centralizer of A2
    and u = +-1. ``det_one`` restricts R2 to determinant 1.

    Raises:
        RegimeError: If A2 is outside the lemma's regime for the convention
    """
    ctx = AOContext.from_block(A2, convention)
    if not ctx.admissible:
        raise RegimeError(f"Tr(A2) = {A2.trace()} is outside the congruence lemma regime", UNPROVEN_REGIME)
    if tuple(a) == tuple(b):
        return True
    m = abs(ctx.m)
    if m == 1:
        return True

    row_a = (IMat.row_vector(a) @ ctx.A0).row(0)
    row_b = IMat.row_vector(b) @ ctx.A0
    targets = {
        tuple(x % m for x in row_a),
        tuple(-x % m for x in row_a),
    }
    if is_scalar(A2):
        candidates = _residue_units(A2, m, det_one)
    else:
        base = centralizer_base(A2)
        candidates = [CommutantElement(p, q, base).matrix for p, q in units_mod(A2, m, det_one)]
    for R2 in candidates:
        if tuple(x % m for x in (row_b @ R2).row(0)) in targets:
            return True
    return False


def split_residue(a: IVec, A2: IMat) -> IVec:
    """a adj(A2 - I) reduced modulo |det(A2 - I)|; zero iff a (A2 - I)^-1 is integral.

    Raises:
        RegimeError: If A2 - I is singular
    """
    adj, d = _shifted_inverse(A2)
    return tuple(x % abs(d) for x in (IMat.row_vector(a) @ adj).row(0))


def _shifted_inverse(A2: IMat) -> Tuple[IMat, int]:
    d = det(A2 - I2)
    if d == 0:
        raise RegimeError(f"A2 - I is singular for A2 = {A2}", SINGULAR_BLOCK)
    return rational_inverse(A2 - I2)


def _block_conjugator(u: int, x: IVec, R2: IMat) -> IMat:
    return IMat.from_rows(
        [
            [u, x[0], x[1]],
            [0, R2[0, 0], R2[0, 1]],
            [0, R2[1, 0], R2[1, 1]],
        ]
    )


def ao_conjugator(a: IVec, b: IVec, A2: IMat) -> Optional[IMat]:
    """P in SL(3, Z) with P^-1 [[1, a], [0, A2]] P = [[1, b], [0, A2]], or None.

    Exact for Tr(A2) != 2: any such P fixes the eigenline, so it has the form
    [[u, x], [0, R2]]^-1 with R2 a centralizer unit and x (A2 - I) = b R2 - u a.

    Raises:
        RegimeError: If A2 - I is singular
    """
    adj, d = _shifted_inverse(A2)
    m = abs(d)
    CA = ReducedForm(1, tuple(a), A2, IMat.identity(3)).matrix
    CB = ReducedForm(1, tuple(b), A2, IMat.identity(3)).matrix
    for R2 in _residue_units(A2, m, det_one=False):
        for u in (1, -1):
            w = IMat.row_vector([bb - u * aa for aa, bb in zip(a, (IMat.row_vector(b) @ R2).row(0))])
            num = (w @ adj).row(0)
            if any(x % m for x in num):
                continue
            R = _block_conjugator(u, tuple(x // d for x in num), R2)
            if det(R) == -1:
                R = -R
            if R @ CA != CB @ R:
                raise CertificateError(f"Block conjugator {R} does not intertwine")
            return unimodular_inverse(R)
    return None


@dataclass(frozen=True)
class SearchResult:
    found: bool
    certificate: Optional[IMat] = None
    note: str = ""


def _commutant_units(A2: IMat, bound: int) -> List[IMat]:
    """Centralizer units reachable in at most ``bound`` generator steps, identity first."""
    if is_scalar(A2):
        return [I2, -I2]
    gens = unit_generators(A2)
    steps: List[CommutantElement] = []
    for g in gens:
        steps.extend([g, g.inverse()])
    start = CommutantElement(1, 0, gens[0].base)
    seen: Dict[IMat, CommutantElement] = {start.matrix: start}
    frontier = [start]
    for _ in range(bound):
        nxt = []
        for x in frontier:
            for g in steps:
                y = x * g
                if y.matrix not in seen:
                    seen[y.matrix] = y
                    nxt.append(y)
        if not nxt:
            break
        frontier = nxt
    return list(seen)


def split_conjugator_3x3(rf: ReducedForm, bound: int = DEFAULT_BOUND) -> SearchResult:
    """Search for R = [[u, x], [0, R2]] with R^-1 [[1, a], [0, A2]] R = (1) (+) A2.

    R2 runs over centralizer units of A2 within ``bound`` generator steps,
    x = a R2 (A2 - I)^-1 must be integral and u = det R2.

    Raises:
        DomainError: If rf.lam != 1
        RegimeError: If A2 - I is singular
    """
    if rf.lam != 1:
        raise DomainError("Block splitting needs the eigenvalue +1 form")
    adj, d = _shifted_inverse(rf.A2)
    C = rf.matrix
    target = direct_sum(IMat.identity(1), rf.A2)
    for R2 in _commutant_units(rf.A2, bound):
        num = (IMat.row_vector(rf.a) @ R2 @ adj).row(0)
        if any(x % d for x in num):
            continue
        R = _block_conjugator(det(R2), tuple(x // d for x in num), R2)
        if det(R) != 1 or conjugate(C, R) != target:
            raise CertificateError(f"Split conjugator {R} for {C} does not verify")
        return SearchResult(True, R)
    return SearchResult(False, note=f"no centralizer unit within {bound} steps gives an integral x")


@dataclass(frozen=True)
class ExtReport:
    integral: bool
    X: Tuple[Tuple[Fraction, ...], ...]

    def as_matrix(self) -> Optional[IMat]:
        if not self.integral:
            return None
        return IMat.from_rows([[int(x) for x in row] for row in self.X])


def ext_split_test(a: IVec, A2: IMat) -> ExtReport:
    """X = D (A2 - I)^-1 with D = [[0, 0], a].

    Integral X is exactly the condition for (1) (+) [[1, a], [0, A2]] to split
    by a block upper triangular conjugator.

    Raises:
        RegimeError: If A2 - I is singular
    """
    adj, d = _shifted_inverse(A2)
    D = IMat.from_rows([[0, 0], list(a)])
    num = D @ adj
    X = tuple(tuple(Fraction(num[i, j], d) for j in range(2)) for i in range(2))
    return ExtReport(all(x.denominator == 1 for row in X for x in row), X)


class StableSplitStatus(str, Enum):
    SPLIT_CERTIFICATE = "SplitCertificate"
    NO_UPPER_TRIANGULAR_SPLIT = "NoUpperTriangularSplit"


@dataclass(frozen=True)
class StableSplitOutcome:
    """Outcome of splitting V = (1) (+) [[1, a], [0, A2]].

    With SplitCertificate, P^-1 V P = I2 (+) block.
    """

    status: StableSplitStatus
    P: Optional[IMat] = None
    block: Optional[IMat] = None
    X: Tuple[Tuple[Fraction, ...], ...] = ()
    note: str = ""

    @property
    def found(self) -> bool:
        return self.status is StableSplitStatus.SPLIT_CERTIFICATE


def stabilized_matrix(rf: ReducedForm) -> IMat:
    """V = (1) (+) [[1, a], [0, A2]], trivial factor first."""
    return direct_sum(IMat.identity(1), rf.matrix)


def _gl2_class_candidates(A2: IMat, block_bound: int) -> List[IMat]:
    return [C for C in sl2_representatives(A2.trace(), block_bound) if conjugate_gl2(A2, C).conjugate]


def stable_split(
    rf: ReducedForm,
    bound: int = STABLE_LATTICE_BOUND,
    block_bound: int = STABLE_BLOCK_BOUND,
    max_points: int = STABLE_SEARCH_POINTS,
) -> StableSplitOutcome:
    """Split V = (1) (+) [[1, a], [0, A2]] as I2 (+) C.

    When ext_split_test is integral the certificate is P = [[I2, X], [0, I2]].
    Otherwise a budgeted lattice search runs against I2 (+) C for C in the
    GL(2, Z) class of A2 with entries up to ``block_bound``.

    Raises:
        DomainError: If rf.lam != 1
        RegimeError: If A2 - I is singular
    """
    if rf.lam != 1:
        raise DomainError("Stable splitting needs the eigenvalue +1 form")
    ext = ext_split_test(rf.a, rf.A2)
    V = stabilized_matrix(rf)

    if ext.integral:
        X = ext.as_matrix()
        P = IMat.from_rows(
            [
                [1, 0, X[0, 0], X[0, 1]],
                [0, 1, X[1, 0], X[1, 1]],
                [0, 0, 1, 0],
                [0, 0, 0, 1],
            ]
        )
        block = rf.A2
        if conjugate(V, P) != direct_sum(I2, block):
            raise CertificateError(f"Stable certificate {P} does not verify")
        return StableSplitOutcome(StableSplitStatus.SPLIT_CERTIFICATE, P, block, ext.X)

    notes = []
    for C in _gl2_class_candidates(rf.A2, block_bound):
        report = brute_similarity(V, direct_sum(I2, C), bound, max_points)
        if report.found:
            logger.warning("stable split of %s found beyond the upper triangular form", rf.matrix)
            return StableSplitOutcome(StableSplitStatus.SPLIT_CERTIFICATE, report.P, C, ext.X, "lattice search")
        if report.note:
            notes.append(report.note)
    note = "budget" if "budget" in notes else f"none within bound {bound}"
    return StableSplitOutcome(StableSplitStatus.NO_UPPER_TRIANGULAR_SPLIT, None, None, ext.X, note)


def unipotent_split(A: IMat) -> Optional[IMat]:
    """Splitting certificate for A in SL(3, Z) with charpoly (t - 1)^3.

    Such A is decomposable iff rank(A - I) <= 1. For rank 1, A - I = c u v^T
    and P = [p1 | u | p3] with p1, u a basis of v-perp and v.p3 = 1 gives
    P^-1 A P = (1) (+) [[1, c], [0, 1]]. Returns None when rank(A - I) = 2.

    Raises:
        DomainError: If charpoly(A) != (t - 1)^3
    """
    require_sl(A, "SL(3, Z) element")
    if str(charpoly(A)) != "-1,3,-3,1":
        raise DomainError(f"{A} is not unipotent")
    I3 = IMat.identity(3)
    N = A - I3
    r = rank(N)
    if r == 0:
        return I3
    if r >= 2:
        return None

    j = next(j for j in range(3) if any(N.col(j)))
    i = next(i for i in range(3) if N[i, j])
    u = primitive_part(N.col(j))
    v = primitive_part(N.row(i))
    c = N[i, j] // (u[i] * v[j])

    K = kernel_basis(IMat.row_vector(v))
    k1, k2 = K[0], K[1]
    # u = alpha k1 + beta k2; solve on a pair of rows with nonzero minor
    alpha = beta = None
    for r0 in range(3):
        for r1 in range(r0 + 1, 3):
            minor = k1[r0] * k2[r1] - k1[r1] * k2[r0]
            if minor:
                alpha = (u[r0] * k2[r1] - u[r1] * k2[r0]) // minor
                beta = (k1[r0] * u[r1] - k1[r1] * u[r0]) // minor
                break
        if alpha is not None:
            break
    _, x, y = xgcd(alpha, beta)
    p1 = tuple(-y * s + x * t for s, t in zip(k1, k2))
    p3 = complete_primitive(v).row(0)

    P = IMat.from_rows([[p1[k], u[k], p3[k]] for k in range(3)])
    if det(P) == -1:
        P = IMat.from_rows([[-p1[k], u[k], p3[k]] for k in range(3)])
    target = IMat.from_rows([[1, 0, 0], [0, 1, c], [0, 0, 1]])
    if det(P) != 1 or conjugate(A, P) != target:
        raise CertificateError(f"Unipotent split {P} for {A} does not verify")
    return P
