"""Tests for exact integer matrix algebra."""

import itertools
import math
import random

import pytest

from tormono.core.errors import DimensionError, DomainError, MatrixFormatError, SingularMatrixError
from tormono.core.exactmat import (
    IMat,
    charpoly,
    complete_primitive,
    content,
    conjugate,
    det,
    diagonal_blocks,
    direct_sum,
    format_matrix,
    hnf,
    intertwiner_basis,
    is_block_diagonal,
    is_sl,
    kernel_basis,
    parse_matrix,
    rank,
    rational_inverse,
    require_sl,
    unimodular_inverse,
    xgcd,
)

from conftest import M


def maximal_minor_gcd(vectors):
    """gcd of the r x r minors of the r vectors; 1 iff they span a saturated lattice."""
    r, n = len(vectors), len(vectors[0])
    g = 0
    for cols in itertools.combinations(range(n), r):
        g = math.gcd(g, det(IMat.from_rows([[v[c] for c in cols] for v in vectors])))
    return g


class TestParse:
    def test_rows_and_entries(self):
        A = parse_matrix("1,0,1;0,2,1;0,1,1")
        assert A.rows == 3 and A.cols == 3
        assert A.tolist() == [[1, 0, 1], [0, 2, 1], [0, 1, 1]]

    def test_whitespace_is_ignored(self):
        assert parse_matrix(" 1, 1 ; 0 ,1 ") == M([1, 1], [0, 1])

    def test_negative_entries(self):
        assert parse_matrix("-1,0;0,-1") == M([-1, 0], [0, -1])

    @pytest.mark.parametrize("text", ["", "   ", "1,a", "1,2;3", "1,2;;3,4", "1.5,0;0,1"])
    def test_malformed_literals(self, text):
        with pytest.raises(MatrixFormatError):
            parse_matrix(text)

    def test_format_is_inverse_of_parse(self):
        literal = "1,1,0;0,3,1;0,2,1"
        assert format_matrix(parse_matrix(literal)) == literal
        assert str(parse_matrix(literal)) == literal


class TestArithmetic:
    def test_ragged_rows_rejected(self):
        with pytest.raises(DimensionError):
            IMat.from_rows([[1, 2], [3]])

    def test_matmul_and_identity(self):
        A = M([2, 1], [1, 1])
        assert A @ IMat.identity(2) == A
        assert A @ A == M([5, 3], [3, 2])

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            M([1, 0], [0, 1]) @ IMat.identity(3)

    def test_block_and_trace(self):
        A = M([1, 0, 1], [0, 2, 1], [0, 1, 1])
        assert A.trace() == 4
        assert A.block(1, 3, 1, 3) == M([2, 1], [1, 1])
        assert A.block(0, 1, 1, 3) == M([0, 1])

    def test_vector_products(self):
        A = M([2, 1], [1, 1])
        assert A.apply((1, 0)) == (2, 1)
        assert A.vec_mul((1, 0)) == (2, 1)
        assert A.vec_mul((0, 1)) == (1, 1)


class TestDeterminant:
    def test_small(self):
        assert det(M([1, 0, 1], [0, 2, 1], [0, 1, 1])) == 1
        assert det(M([2, 0], [0, 1])) == 2
        assert det(M([7])) == 7

    def test_beyond_cofactor_size(self):
        A = direct_sum(M([1]), M([1, 0, 1], [0, 2, 1], [0, 1, 1]))
        assert A.n == 4
        assert det(A) == 1
        assert det(direct_sum(M([2, 1], [1, 1]), M([0, -1], [1, 0]), M([3]))) == 3

    def test_is_sl(self):
        assert is_sl(M([1, 1], [0, 1]))
        assert not is_sl(M([0, 1], [1, 0]))
        with pytest.raises(DomainError):
            require_sl(M([2, 0], [0, 1]))
        with pytest.raises(DimensionError):
            require_sl(M([1, 0, 0]))


class TestCharpoly:
    def test_unipotent(self):
        assert str(charpoly(M([1, 1], [0, 1]))) == "1,-2,1"

    def test_worked_instance(self):
        # (t - 1)(t^2 - 3t + 1)
        assert str(charpoly(M([1, 0, 1], [0, 2, 1], [0, 1, 1]))) == "-1,4,-4,1"

    def test_four_by_four(self):
        A = direct_sum(M([1, 1], [0, 1]), M([2, 1], [1, 1]))
        # (t - 1)^2 (t^2 - 3t + 1)
        assert str(charpoly(A)) == "1,-5,8,-5,1"


class TestHermite:
    def test_transform_relation(self):
        A = M([2, 4], [0, 2])
        H, U = hnf(A)
        assert U @ A == H
        assert det(U) in (1, -1)
        assert H == M([2, 0], [0, 2])

    def test_rank(self):
        assert rank(M([1, 2], [2, 4])) == 1
        assert rank(IMat.zeros(3, 3)) == 0
        assert rank(M([1, 0, 1], [0, 2, 1], [0, 1, 1])) == 3

    def test_kernel_basis(self):
        N = M([1, 2, 3])
        kernel = kernel_basis(N)
        assert len(kernel) == 2
        for v in kernel:
            assert N.apply(v) == (0,)

    def test_kernel_of_stabilized_gap_instance(self):
        V = direct_sum(M([1]), M([1, 1, 0], [0, 3, 1], [0, 2, 1]))
        kernel = kernel_basis(V - IMat.identity(4))
        assert len(kernel) == 2
        assert all(v[2] == v[3] == 0 for v in kernel)
        # spans all of {(x1, x2, 0, 0)}
        assert abs(kernel[0][0] * kernel[1][1] - kernel[0][1] * kernel[1][0]) == 1

    def test_kernel_is_saturated(self):
        rng = random.Random(17)
        for _ in range(100):
            rows, cols = rng.randint(1, 3), rng.randint(2, 5)
            N = IMat(rows, cols, tuple(rng.randint(-4, 4) * rng.choice((1, 2, 3)) for _ in range(rows * cols)))
            kernel = kernel_basis(N)
            assert len(kernel) == cols - rank(N)
            for v in kernel:
                assert not any(N.apply(v))
            if kernel:
                assert maximal_minor_gcd(kernel) == 1, N

    def test_xgcd(self):
        g, x, y = xgcd(240, 46)
        assert g == 2
        assert 240 * x + 46 * y == 2
        g, x, y = xgcd(-3, 0)
        assert g == 3 and -3 * x == 3


class TestCompletion:
    @pytest.mark.parametrize("v", [(3, 5), (0, 1), (-1, 0), (2, 3, 5), (0, 0, 1), (6, 10, 15)])
    def test_sends_vector_to_e1(self, v):
        R = complete_primitive(v)
        assert det(R) == 1
        assert R.apply(v) == (1,) + (0,) * (len(v) - 1)

    def test_imprimitive(self):
        with pytest.raises(DomainError):
            complete_primitive((2, 4))

    def test_random_primitive_vectors(self):
        rng = random.Random(3)
        checked = 0
        while checked < 1000:
            v = tuple(rng.randint(-60, 60) for _ in range(rng.randint(2, 4)))
            if content(v) != 1:
                continue
            R = complete_primitive(v)
            assert det(R) == 1
            assert R.apply(v) == (1,) + (0,) * (len(v) - 1)
            checked += 1


class TestInverse:
    def test_unimodular(self):
        A = M([2, 1], [1, 1])
        assert unimodular_inverse(A) @ A == IMat.identity(2)

    def test_rational(self):
        adj, d = rational_inverse(M([3, 1], [2, 1]) - IMat.identity(2))
        assert d == -2
        assert adj == M([0, -1], [-2, 2])

    def test_singular(self):
        with pytest.raises(SingularMatrixError):
            rational_inverse(M([1, 2], [2, 4]))

    def test_conjugate(self):
        R = M([1, 1], [0, 1])
        L = M([1, 0], [1, 1])
        assert conjugate(R @ L, R) == L @ R


class TestBlocks:
    def test_direct_sum(self):
        A = direct_sum(M([1]), M([2, 1], [1, 1]))
        assert A == M([1, 0, 0], [0, 2, 1], [0, 1, 1])
        assert is_block_diagonal(A, (1, 2))
        assert not is_block_diagonal(M([1, 0, 1], [0, 2, 1], [0, 1, 1]), (1, 2))
        assert diagonal_blocks(A, (1, 2)) == [M([1]), M([2, 1], [1, 1])]


class TestIntertwiners:
    def test_commutant_of_hyperbolic(self):
        A = M([2, 1], [1, 1])
        basis = intertwiner_basis(A, A)
        assert len(basis) == 2
        for X in basis:
            assert A @ X == X @ A

    def test_commutant_of_identity(self):
        assert len(intertwiner_basis(IMat.identity(2), IMat.identity(2))) == 4

    def test_rectangular(self):
        A = M([1, 0, 1], [0, 2, 1], [0, 1, 1])
        B = M([1])
        basis = intertwiner_basis(A, B)
        assert len(basis) == 1
        assert A @ basis[0] == basis[0] @ B
