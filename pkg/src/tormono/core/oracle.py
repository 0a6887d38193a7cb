"""Desk-scale ground truth.

Similarity searches run over the integer solution lattice {X : A X = X B}
instead of raw matrix entries, which keeps SL(3, Z) and SL(4, Z) searches
feasible. Nothing found here is a proof of non-existence.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Iterator, List, Optional, Sequence, Tuple

from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_form
from sympy.polys.domains import ZZ

from .budget import DEFAULT_BOUND, MAX_LATTICE_POINTS
from .errors import CertificateError, DimensionError
from .exactmat import IMat, charpoly, combine, det, direct_sum, intertwiner_basis
from .polyint import MonicIntPoly, companion, deflate, multiply
from .sl2z import canonical_form

logger = logging.getLogger(__name__)

# Non-goal: searches beyond 6x6
MAX_ORACLE_DIM = 6


@dataclass(frozen=True)
class SimilaritySearchReport:
    """Result of a bounded search for P with P^-1 A P = B."""

    found: bool
    P: Optional[IMat]
    bound: int
    lattice_rank: int
    points: int = 0
    note: str = ""
    target: Optional[IMat] = None
    sizes: Tuple[int, ...] = ()

    @property
    def outcome(self) -> str:
        return "Found" if self.found else "NoneWithinBound"


def _shell(rank: int, h: int) -> Iterator[Tuple[int, ...]]:
    """Integer vectors of the given rank with max |coordinate| exactly h."""
    if h == 0:
        yield (0,) * rank
        return
    inner = range(-(h - 1), h)
    outer = range(-h, h + 1)
    for i in range(rank):
        for head in itertools.product(inner, repeat=i):
            for lead in (h, -h):
                for tail in itertools.product(outer, repeat=rank - i - 1):
                    yield head + (lead,) + tail


def brute_similarity(
    A: IMat,
    B: IMat,
    bound: int = DEFAULT_BOUND,
    max_points: int = MAX_LATTICE_POINTS,
) -> SimilaritySearchReport:
    """Search the lattice {X : A X = X B} for an element of determinant 1.

    Coefficient vectors are enumerated in shells of increasing max-norm up to
    ``bound``. In odd dimension a determinant -1 solution is negated.

    Raises:
        DimensionError: If A and B are not square of the same size, or too large
    """
    if not (A.is_square and B.is_square) or A.n != B.n:
        raise DimensionError(f"Cannot compare {A.rows}x{A.cols} with {B.rows}x{B.cols}")
    n = A.n
    if n > MAX_ORACLE_DIM:
        raise DimensionError(f"Oracle searches stop at {MAX_ORACLE_DIM}x{MAX_ORACLE_DIM}")

    basis = intertwiner_basis(A, B)
    r = len(basis)
    if A == B:
        return SimilaritySearchReport(True, IMat.identity(n), bound, r)
    if r == 0:
        return SimilaritySearchReport(False, None, bound, 0, note="empty lattice")

    points = 0
    for h in range(1, bound + 1):
        for coeffs in _shell(r, h):
            points += 1
            if points > max_points:
                logger.debug("similarity search budget hit at shell %d (%d points)", h, max_points)
                return SimilaritySearchReport(False, None, bound, r, max_points, note="budget")
            X = combine(basis, coeffs)
            d = det(X)
            if d == -1 and n % 2 == 1:
                X, d = -X, 1
            if d == 1:
                if A @ X != X @ B:
                    raise CertificateError(f"Lattice element {X} does not intertwine")
                return SimilaritySearchReport(True, X, bound, r, points)
    return SimilaritySearchReport(False, None, bound, r, points)


@lru_cache(maxsize=256)
def sl2_representatives(trace: int, bound: int) -> Tuple[IMat, ...]:
    """One SL(2, Z) matrix per conjugacy class of the given trace among entries in [-bound, bound]."""
    reps = {}
    for a in range(-bound, bound + 1):
        d = trace - a
        if abs(d) > bound:
            continue
        bc = a * d - 1
        if bc == 0:
            pairs = [(0, c) for c in range(-bound, bound + 1)] + [(b, 0) for b in range(-bound, bound + 1)]
        else:
            pairs = [
                (b, bc // b)
                for b in range(-bound, bound + 1)
                if b and bc % b == 0 and abs(bc // b) <= bound
            ]
        for b, c in pairs:
            C = IMat.from_rows([[a, b], [c, d]])
            key = canonical_form(C).matrix
            if key not in reps:
                reps[key] = C
    return tuple(reps.values())


def _smith_diagonal(M: IMat) -> Tuple[int, ...]:
    S = smith_normal_form(Matrix(M.tolist()), domain=ZZ)
    return tuple(sorted(abs(int(S[i, i])) for i in range(min(S.shape))))


def similarity_invariants(M: IMat) -> Tuple[str, Tuple[int, ...], Tuple[int, ...]]:
    """Cheap conjugacy invariants: charpoly and Smith forms of M - I and M + I."""
    I = IMat.identity(M.n)
    return str(charpoly(M)), _smith_diagonal(M - I), _smith_diagonal(M + I)


def _quadratic_factors(f: MonicIntPoly) -> List[MonicIntPoly]:
    """Monic degree-2 divisors of f with constant term 1."""
    _, factors = f.to_sympy().factor_list()
    pieces: List[MonicIntPoly] = []
    for poly, mult in factors:
        coeffs = [int(c) for c in poly.all_coeffs()]
        pieces.extend([MonicIntPoly(tuple(reversed(coeffs[1:])))] * mult)
    found = []
    for piece in pieces:
        if piece.degree == 2 and piece.coeffs[0] == 1 and piece not in found:
            found.append(piece)
    linear = [p for p in pieces if p.degree == 1]
    for x, y in itertools.combinations(range(len(linear)), 2):
        r, s = -linear[x].coeffs[0], -linear[y].coeffs[0]
        q = MonicIntPoly((r * s, -(r + s)))
        if q.coeffs[0] == 1 and q not in found:
            found.append(q)
    return found


def _candidate_blocks(k: int, f: MonicIntPoly, bound: int) -> List[IMat]:
    if k == 1:
        return [IMat.identity(1)] if f.eval(1) == 0 else []
    if k == 2:
        blocks: List[IMat] = []
        for q in _quadratic_factors(f):
            blocks.extend(sl2_representatives(-q.coeffs[1], bound))
        return blocks
    if k == 3 and f.degree == 4 and f.eval(1) == 0:
        # the complementary 1-block is (1), so the cubic block carries f / (t - 1)
        cubic = deflate(f, 1)
        blocks = []
        if cubic.coeffs[0] == -1:
            blocks.append(companion(cubic))
            if cubic.eval(1) == 0:
                for C2 in _candidate_blocks(2, deflate(cubic, 1), bound):
                    for e1, e2 in itertools.product((-1, 0, 1), repeat=2):
                        blocks.append(
                            IMat.from_rows([[1, e1, e2], [0, C2[0, 0], C2[0, 1]], [0, C2[1, 0], C2[1, 1]]])
                        )
        return blocks
    return []


def brute_block_split(
    A: IMat,
    bound: int = DEFAULT_BOUND,
    max_points: int = MAX_LATTICE_POINTS,
    block_bound: Optional[int] = None,
) -> SimilaritySearchReport:
    """Search for P with P^-1 A P = C1 (+) C2 over every split shape.

    Targets are SL blocks with entries bounded by ``block_bound`` (default
    ``bound``), charpoly product equal to charpoly(A) and matching Smith
    invariants of A - I and A + I. Found means A is certifiably decomposable.

    Raises:
        DimensionError: If A is not 3x3 or 4x4
    """
    n = A.n
    if n not in (3, 4):
        raise DimensionError(f"Block split search supports 3x3 and 4x4, got {n}x{n}")
    block_bound = bound if block_bound is None else block_bound
    f = charpoly(A)
    invariants = similarity_invariants(A)

    targets: List[Tuple[IMat, Tuple[int, int]]] = []
    for k in range(1, n):
        for C1 in _candidate_blocks(k, f, block_bound):
            for C2 in _candidate_blocks(n - k, f, block_bound):
                T = direct_sum(C1, C2)
                if any(T == seen for seen, _ in targets):
                    continue
                if similarity_invariants(T) == invariants:
                    targets.append((T, (k, n - k)))
    logger.debug("block split search for %s: %d targets", A, len(targets))

    last_rank, points, note = 0, 0, ""
    for T, sizes in targets:
        report = brute_similarity(A, T, bound, max_points)
        if report.found:
            return replace(report, target=T, sizes=sizes)
        last_rank = report.lattice_rank
        points += report.points
        note = report.note or note
    return SimilaritySearchReport(False, None, bound, last_rank, points, note=note or f"{len(targets)} targets")


def random_slnz(n: int, steps: int, seed: int) -> IMat:
    """Product of ``steps`` random elementary transvections E_ij(+-1), seeded."""
    rng = random.Random(seed)
    M = IMat.identity(n).tolist()
    if n < 2:
        return IMat.from_rows(M)
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        s = rng.choice((1, -1))
        # right multiplication by E_ij(s) adds s * column i to column j
        for row in M:
            row[j] += s * row[i]
    return IMat.from_rows(M)


@dataclass(frozen=True)
class ExplorationRecord:
    stabilizer: IMat
    report: SimilaritySearchReport


def _small_stabilizers(k: int, entry_bound: int) -> List[IMat]:
    if k == 1:
        return [IMat.identity(1)]
    if k == 2:
        seen = {}
        for entries in itertools.product(range(-entry_bound, entry_bound + 1), repeat=4):
            B = IMat(2, 2, entries)
            if det(B) != 1 or B == IMat.identity(2):
                continue
            key = canonical_form(B).matrix
            seen.setdefault(key, B)
        return list(seen.values())
    if k == 3:
        return [
            companion(MonicIntPoly((-1, c1, c2)))
            for c1 in range(-entry_bound, entry_bound + 1)
            for c2 in range(-entry_bound, entry_bound + 1)
        ]
    return []


def _two_block_targets(g: MonicIntPoly, bound: int) -> List[IMat]:
    """All (C1 (+) C2 [(+) C3]) with SL(2) blocks whose charpolys multiply to g."""
    if g.degree == 2:
        return list(sl2_representatives(-g.coeffs[1], bound)) if g.coeffs[0] == 1 else []
    targets: List[IMat] = []
    for q in _quadratic_factors(g):
        rest = _divide(g, q)
        if rest is None:
            continue
        for C1 in sl2_representatives(-q.coeffs[1], bound):
            for tail in _two_block_targets(rest, bound):
                targets.append(direct_sum(C1, tail))
    return targets


def _divide(f: MonicIntPoly, q: MonicIntPoly) -> Optional[MonicIntPoly]:
    quotient, remainder = f.to_sympy().div(q.to_sympy())
    if not remainder.is_zero:
        return None
    coeffs = [int(c) for c in quotient.all_coeffs()]
    return MonicIntPoly(tuple(reversed(coeffs[1:])))


def stabilized_exploration(
    A: IMat,
    stabilizer_dims: Sequence[int] = (2,),
    bound: int = 3,
    entry_bound: int = 1,
    max_points: int = 5_000,
) -> List[ExplorationRecord]:
    """Try A (+) B for small stabilizers B, looking for a split into blocks of size <= 2.

    Research harness only: its findings never feed verdicts.
    """
    records: List[ExplorationRecord] = []
    fa = charpoly(A)
    for k in stabilizer_dims:
        for B in _small_stabilizers(k, entry_bound):
            V = direct_sum(A, B)
            f = multiply(fa, charpoly(B))
            invariants = similarity_invariants(V)
            targets: List[IMat] = []
            if V.n % 2 == 1:
                if f.eval(1) == 0:
                    targets = [direct_sum(T, IMat.identity(1)) for T in _two_block_targets(deflate(f, 1), entry_bound + 1)]
            else:
                targets = _two_block_targets(f, entry_bound + 1)
            report = SimilaritySearchReport(False, None, bound, 0, note="no admissible targets")
            for T in targets:
                if similarity_invariants(T) != invariants:
                    continue
                report = brute_similarity(V, T, bound, max_points)
                if report.found:
                    report = replace(report, target=T)
                    break
            logger.info("stabilizer %s: %s", B, report.outcome)
            records.append(ExplorationRecord(B, report))
    return records
