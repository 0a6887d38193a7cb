"""Exact integer linear algebra: matrices, HNF, kernels and unimodular completion."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import TYPE_CHECKING, List, Sequence, Tuple

from sympy.core.intfunc import igcdex
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix

from .errors import DimensionError, DomainError, MatrixFormatError, SingularMatrixError

if TYPE_CHECKING:
    from .polyint import MonicIntPoly


# Integer row/column vectors are plain tuples
IVec = Tuple[int, ...]

ROW_SEPARATOR = ";"
ENTRY_SEPARATOR = ","


@dataclass(frozen=True)
class IMat:
    """Immutable integer matrix stored row-major.

    Unimodular matrices are IMat values whose determinant is checked where it
    matters (``is_sl``/``require_sl``); there is no separate runtime type.
    """

    rows: int
    cols: int
    entries: Tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise DimensionError(f"Negative shape {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError(
                f"Expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )
        object.__setattr__(self, "entries", tuple(int(x) for x in self.entries))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IMat":
        """Build a matrix from a list of rows.

        Examples:
            >>> IMat.from_rows([[1, 1], [0, 1]]).entries
            (1, 1, 0, 1)
        """
        rows = [list(r) for r in rows]
        if not rows:
            return cls(0, 0, ())
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise DimensionError("Rows have different lengths")
        return cls(len(rows), width, tuple(x for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "IMat":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IMat":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def row_vector(cls, v: Sequence[int]) -> "IMat":
        return cls(1, len(v), tuple(v))

    @classmethod
    def column_vector(cls, v: Sequence[int]) -> "IMat":
        return cls(len(v), 1, tuple(v))

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def n(self) -> int:
        """Dimension of a square matrix."""
        if not self.is_square:
            raise DimensionError(f"Matrix is {self.rows}x{self.cols}, not square")
        return self.rows

    def __getitem__(self, index: Tuple[int, int]) -> int:
        i, j = index
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> IVec:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> IVec:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def tolist(self) -> List[List[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def __matmul__(self, other: "IMat") -> "IMat":
        if self.cols != other.rows:
            raise DimensionError(
                f"Cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        cols = [other.col(j) for j in range(other.cols)]
        return IMat(
            self.rows,
            other.cols,
            tuple(
                sum(x * y for x, y in zip(self.row(i), c))
                for i in range(self.rows)
                for c in cols
            ),
        )

    def _check_same_shape(self, other: "IMat") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError(
                f"Shape mismatch {self.rows}x{self.cols} vs {other.rows}x{other.cols}"
            )

    def __add__(self, other: "IMat") -> "IMat":
        self._check_same_shape(other)
        return IMat(self.rows, self.cols, tuple(x + y for x, y in zip(self.entries, other.entries)))

    def __sub__(self, other: "IMat") -> "IMat":
        self._check_same_shape(other)
        return IMat(self.rows, self.cols, tuple(x - y for x, y in zip(self.entries, other.entries)))

    def __neg__(self) -> "IMat":
        return IMat(self.rows, self.cols, tuple(-x for x in self.entries))

    def scale(self, k: int) -> "IMat":
        return IMat(self.rows, self.cols, tuple(k * x for x in self.entries))

    def transpose(self) -> "IMat":
        return IMat(self.cols, self.rows, tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def trace(self) -> int:
        return sum(self[i, i] for i in range(self.n))

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "IMat":
        """Submatrix of rows r0..r1-1 and columns c0..c1-1."""
        return IMat(r1 - r0, c1 - c0, tuple(self[i, j] for i in range(r0, r1) for j in range(c0, c1)))

    def vec_mul(self, v: Sequence[int]) -> IVec:
        """Row vector times matrix, v·M."""
        if len(v) != self.rows:
            raise DimensionError(f"Vector of length {len(v)} against {self.rows} rows")
        return tuple(sum(v[i] * self[i, j] for i in range(self.rows)) for j in range(self.cols))

    def apply(self, v: Sequence[int]) -> IVec:
        """Matrix times column vector, M·v."""
        if len(v) != self.cols:
            raise DimensionError(f"Vector of length {len(v)} against {self.cols} columns")
        return tuple(sum(x * y for x, y in zip(self.row(i), v)) for i in range(self.rows))

    def __str__(self) -> str:
        return format_matrix(self)


def parse_matrix(text: str) -> IMat:
    """Parse a matrix literal such as ``"1,0,1;0,2,1;0,1,1"``.

    Args:
        text: Rows separated by ';', entries by ','; whitespace is ignored

    Returns:
        The parsed IMat

    Raises:
        MatrixFormatError: If the literal is empty, non-integer or ragged
    """
    if text is None or not text.strip():
        raise MatrixFormatError("Empty matrix literal")

    rows: List[List[int]] = []
    for chunk in text.strip().split(ROW_SEPARATOR):
        chunk = chunk.strip()
        if not chunk:
            raise MatrixFormatError(f"Empty row in matrix literal: {text!r}")
        try:
            rows.append([int(x.strip()) for x in chunk.split(ENTRY_SEPARATOR)])
        except ValueError:
            raise MatrixFormatError(f"Non-integer entry in matrix literal: {text!r}") from None

    if any(len(r) != len(rows[0]) for r in rows):
        raise MatrixFormatError(f"Ragged matrix literal: {text!r}")

    return IMat.from_rows(rows)


def format_matrix(M: IMat) -> str:
    """Inverse of parse_matrix."""
    return ROW_SEPARATOR.join(ENTRY_SEPARATOR.join(str(x) for x in M.row(i)) for i in range(M.rows))


def direct_sum(*blocks: IMat) -> IMat:
    """Block-diagonal matrix with the given square blocks in order."""
    n = sum(b.n for b in blocks)
    out = [[0] * n for _ in range(n)]
    offset = 0
    for b in blocks:
        for i in range(b.n):
            for j in range(b.n):
                out[offset + i][offset + j] = b[i, j]
        offset += b.n
    return IMat.from_rows(out) if n else IMat(0, 0, ())


def is_block_diagonal(M: IMat, sizes: Sequence[int]) -> bool:
    """Check that M has zero entries outside the diagonal blocks of the given sizes."""
    if sum(sizes) != M.n:
        return False
    owner: List[int] = []
    for k, s in enumerate(sizes):
        owner.extend([k] * s)
    return all(
        M[i, j] == 0
        for i in range(M.n)
        for j in range(M.n)
        if owner[i] != owner[j]
    )


def diagonal_blocks(M: IMat, sizes: Sequence[int]) -> List[IMat]:
    blocks: List[IMat] = []
    offset = 0
    for s in sizes:
        blocks.append(M.block(offset, offset + s, offset, offset + s))
        offset += s
    return blocks


def _to_domain(M: IMat) -> DomainMatrix:
    return DomainMatrix.from_list(M.tolist(), ZZ)


def det(M: IMat) -> int:
    """Exact determinant.

    Cofactor expansion up to 3x3, sympy's fraction-free (Bareiss) elimination
    beyond.

    Raises:
        DimensionError: If M is not square
    """
    n = M.n
    if n == 0:
        return 1
    if n == 1:
        return M[0, 0]
    if n == 2:
        return M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    if n == 3:
        return (
            M[0, 0] * (M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1])
            - M[0, 1] * (M[1, 0] * M[2, 2] - M[1, 2] * M[2, 0])
            + M[0, 2] * (M[1, 0] * M[2, 1] - M[1, 1] * M[2, 0])
        )
    return int(_to_domain(M).det())


def charpoly(M: IMat) -> "MonicIntPoly":
    """Characteristic polynomial det(tI - M).

    Examples:
        >>> str(charpoly(IMat.from_rows([[1, 1], [0, 1]])))
        '1,-2,1'
    """
    from .polyint import MonicIntPoly

    n = M.n
    if n == 0:
        raise DimensionError("Characteristic polynomial of an empty matrix")
    coeffs = [int(c) for c in _to_domain(M).charpoly()]
    # sympy lists the leading coefficient first
    return MonicIntPoly(tuple(reversed(coeffs[1:])))


def rank(M: IMat) -> int:
    H, _ = hnf(M)
    return sum(1 for i in range(H.rows) if any(H.row(i)))


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Extended gcd: returns (g, x, y) with a*x + b*y = g >= 0."""
    x, y, g = igcdex(a, b)
    return int(g), int(x), int(y)


def hnf(M: IMat) -> Tuple[IMat, IMat]:
    """Row-style Hermite normal form with transform.

    H is upper triangular (echelon), pivots are positive and the entries above
    each pivot lie in [0, pivot). Zero rows sit at the bottom.

    Args:
        M: Any integer matrix

    Returns:
        Tuple (H, U) with U @ M == H and det U = +-1

    Examples:
        >>> H, U = hnf(IMat.from_rows([[2, 4], [0, 2]]))
        >>> H.tolist()
        [[2, 0], [0, 2]]
    """
    m = M.rows
    H = M.tolist()
    U = IMat.identity(m).tolist()

    def mix(i: int, j: int, x: int, y: int, z: int, w: int) -> None:
        # row_i, row_j <- x*row_i + y*row_j, z*row_i + w*row_j
        for rows in (H, U):
            ri, rj = rows[i], rows[j]
            rows[i] = [x * u + y * v for u, v in zip(ri, rj)]
            rows[j] = [z * u + w * v for u, v in zip(ri, rj)]

    pivot_row = 0
    for col in range(M.cols):
        if pivot_row == m:
            break
        for r in range(pivot_row + 1, m):
            b = H[r][col]
            if b == 0:
                continue
            a = H[pivot_row][col]
            g, x, y = xgcd(a, b)
            mix(pivot_row, r, x, y, -(b // g), a // g)

        p = H[pivot_row][col]
        if p == 0:
            continue
        if p < 0:
            H[pivot_row] = [-v for v in H[pivot_row]]
            U[pivot_row] = [-v for v in U[pivot_row]]
            p = -p
        for r in range(pivot_row):
            q = H[r][col] // p
            if q:
                H[r] = [u - q * v for u, v in zip(H[r], H[pivot_row])]
                U[r] = [u - q * v for u, v in zip(U[r], U[pivot_row])]
        pivot_row += 1

    return IMat.from_rows(H) if m else IMat(0, M.cols, ()), IMat.from_rows(U) if m else IMat(0, 0, ())


def kernel_basis(M: IMat) -> List[IVec]:
    """Basis of the saturated lattice {v : M v = 0}.

    Rows of the HNF transform of M^T beyond the rank span every integer
    solution, because the transform is unimodular.
    """
    H, U = hnf(M.transpose())
    r = sum(1 for i in range(H.rows) if any(H.row(i)))
    return [U.row(i) for i in range(r, U.rows)]


def content(v: Sequence[int]) -> int:
    """gcd of the entries (0 for the zero vector)."""
    return reduce(math.gcd, (abs(x) for x in v), 0)


def primitive_part(v: Sequence[int]) -> IVec:
    """Divide v by the gcd of its entries, keeping the sign of every entry.

    Raises:
        DomainError: If v is the zero vector
    """
    g = content(v)
    if g == 0:
        raise DomainError("Zero vector has no primitive part")
    return tuple(x // g for x in v)


def normalize_sign(v: Sequence[int]) -> IVec:
    """Flip v so its first nonzero entry is positive."""
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


def complete_primitive(v: Sequence[int]) -> IMat:
    """Unimodular R with det R = 1 and R v = e1.

    Args:
        v: Primitive integer vector

    Returns:
        R in SL(n, Z)

    Raises:
        DomainError: If v is not primitive (or is (-1) in dimension one)
    """
    if content(v) != 1:
        raise DomainError(f"Vector {tuple(v)} is not primitive")
    _, U = hnf(IMat.column_vector(v))
    if det(U) == -1:
        if U.rows == 1:
            raise DomainError("(-1) cannot be sent to e1 inside SL(1, Z)")
        rows = U.tolist()
        rows[-1] = [-x for x in rows[-1]]
        U = IMat.from_rows(rows)
    return U


def adjugate(M: IMat) -> IMat:
    n = M.n
    if n == 1:
        return IMat.identity(1)
    cof = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = IMat.from_rows(
                [[M[r, c] for c in range(n) if c != j] for r in range(n) if r != i]
            )
            cof[j][i] = (-1) ** (i + j) * det(minor)
    return IMat.from_rows(cof)


def rational_inverse(M: IMat) -> Tuple[IMat, int]:
    """Adjugate and determinant, so that M^-1 = adjugate / det exactly.

    Raises:
        SingularMatrixError: If det M = 0
    """
    d = det(M)
    if d == 0:
        raise SingularMatrixError(f"Matrix {M} is singular")
    return adjugate(M), d


def unimodular_inverse(M: IMat) -> IMat:
    """Integer inverse of a matrix with determinant +-1."""
    adj, d = rational_inverse(M)
    if d not in (1, -1):
        raise DomainError(f"Matrix {M} has determinant {d}, not +-1")
    return adj.scale(d)


def is_sl(M: IMat) -> bool:
    return M.is_square and det(M) == 1


def require_sl(M: IMat, what: str = "matrix") -> None:
    """Raise unless M is square with determinant 1."""
    if not M.is_square:
        raise DimensionError(f"{what} {M} is not square")
    d = det(M)
    if d != 1:
        raise DomainError(f"{what} {M} has determinant {d}, expected 1")


def conjugate(A: IMat, P: IMat) -> IMat:
    """P^-1 A P for unimodular P."""
    return unimodular_inverse(P) @ A @ P


def intertwiner_basis(A: IMat, B: IMat) -> List[IMat]:
    """Integer basis of the lattice {X : A X = X B}.

    A is n x n, B is k x k, X is n x k. The map X -> AX - XB is written as an
    nk x nk integer matrix on row-major vec(X) and its kernel is saturated.
    """
    n, k = A.n, B.n
    size = n * k
    L = [[0] * size for _ in range(size)]
    for i in range(n):
        for j in range(k):
            r = i * k + j
            for l in range(n):
                L[r][l * k + j] += A[i, l]
            for l in range(k):
                L[r][i * k + l] -= B[l, j]
    if size == 0:
        return []
    return [IMat(n, k, v) for v in kernel_basis(IMat.from_rows(L))]


def combine(basis: Sequence[IMat], coeffs: Sequence[int]) -> IMat:
    """Integer linear combination of same-shape matrices."""
    first = basis[0]
    acc = [0] * len(first.entries)
    for c, X in zip(coeffs, basis):
        if c:
            for idx, x in enumerate(X.entries):
                acc[idx] += c * x
    return IMat(first.rows, first.cols, tuple(acc))
