"""Tests for torus bundles, fiber products and the isomorphism decision."""

import pytest

from tormono.core.bundles import (
    IsoStatus,
    ThickenedBundle,
    TorusBundle,
    fiber_product,
    isomorphic,
    parse_bundle,
    thicken,
)
from tormono.core.errors import DimensionError, DomainError, MatrixFormatError
from tormono.core.exactmat import IMat, conjugate, det
from tormono.core.oracle import random_slnz

from conftest import M, conjugated


def bundle(*rows):
    return TorusBundle(M(*rows))


class TestConstruction:
    def test_requires_determinant_one(self):
        with pytest.raises(DomainError):
            bundle([2, 0], [0, 1])
        with pytest.raises(DomainError):
            bundle([0, 1], [1, 0])

    def test_from_literal(self):
        E = TorusBundle.from_literal("1,1;0,1")
        assert E.fiber_dim == 2
        assert str(E) == "1,1;0,1"

    def test_fiber_product(self):
        E = fiber_product(bundle([1, 1], [0, 1]), bundle([1]))
        assert E.monodromy == M([1, 1, 0], [0, 1, 0], [0, 0, 1])
        assert fiber_product(bundle([1]), bundle([1])).monodromy == IMat.identity(2)

    def test_fiber_product_is_associative(self):
        a, b, c = bundle([1]), bundle([2, 1], [1, 1]), bundle([0, -1], [1, 0])
        assert fiber_product(fiber_product(a, b), c) == fiber_product(a, fiber_product(b, c))

    def test_thicken(self):
        T = thicken(bundle([1, 1], [0, 1]), 3)
        assert T.base_dim == 3
        assert T.fiber_dim == 2
        assert str(T) == "1,1;0,1@3"
        with pytest.raises(DomainError):
            thicken(bundle([1]), 0)


class TestParseBundle:
    def test_plain_literal(self):
        T = parse_bundle("1,1;0,1")
        assert T == ThickenedBundle(1, bundle([1, 1], [0, 1]))

    def test_base_suffix(self):
        assert parse_bundle("1,1;0,1@3").base_dim == 3

    @pytest.mark.parametrize("text", ["1,1;0,1@x", "1,1;0,1@", "1,a;0,1"])
    def test_malformed(self, text):
        with pytest.raises(MatrixFormatError):
            parse_bundle(text)

    def test_semantic_errors(self):
        with pytest.raises(DomainError):
            parse_bundle("2,0;0,1")
        with pytest.raises(DomainError):
            parse_bundle("1,1;0,1@0")


class TestIsomorphic:
    def test_identical(self):
        E = bundle([2, 1], [1, 1])
        result = isomorphic(E, E)
        assert result.status is IsoStatus.ISO
        assert result.P == IMat.identity(2)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            isomorphic(bundle([1]), bundle([1, 0], [0, 1]))

    def test_different_charpolys(self, irreducible_instance):
        result = isomorphic(TorusBundle(irreducible_instance), TorusBundle(IMat.identity(3)))
        assert result.status is IsoStatus.NOT_ISO
        assert "charpoly" in result.invariant

    def test_two_torus_r_and_l(self):
        result = isomorphic(bundle([1, 1], [0, 1]), bundle([1, 0], [1, 1]))
        assert result.status is IsoStatus.NOT_ISO

    def test_parabolic_is_not_trivial(self):
        assert isomorphic(bundle([1, 1], [0, 1]), bundle([1, 0], [0, 1])).status is IsoStatus.NOT_ISO

    def test_two_torus_conjugates(self):
        for seed in range(30):
            A = random_slnz(2, 6, seed)
            B = conjugated(A, 500 + seed)
            result = isomorphic(TorusBundle(A), TorusBundle(B))
            assert result.status is IsoStatus.ISO
            assert conjugate(A, result.P) == B

    def test_symmetry(self):
        for seed in range(500):
            A = random_slnz(2, 5, seed)
            B = conjugated(A, 2_000 + seed) if seed % 2 == 0 else random_slnz(2, 5, 1_000 + seed)
            forward = isomorphic(TorusBundle(A), TorusBundle(B))
            backward = isomorphic(TorusBundle(B), TorusBundle(A))
            assert forward.status is backward.status, (A, B)
            if forward.status is IsoStatus.ISO:
                assert conjugate(A, forward.P) == B
                assert conjugate(B, backward.P) == A

    def test_symmetry_simple_eigenvalue(self, worked_instance, gap_instance):
        split = M([1, 0, 0], [0, 3, 1], [0, 2, 1])
        for seed in range(20):
            for A, B in ((worked_instance, conjugated(worked_instance, seed)), (split, conjugated(gap_instance, seed))):
                forward = isomorphic(TorusBundle(A), TorusBundle(B)).status
                backward = isomorphic(TorusBundle(B), TorusBundle(A)).status
                assert forward is backward

    def test_simple_eigenvalue_conjugates(self, worked_instance, gap_instance):
        for A in (worked_instance, gap_instance):
            for seed in range(10):
                B = conjugated(A, seed)
                result = isomorphic(TorusBundle(A), TorusBundle(B))
                assert result.status is IsoStatus.ISO
                assert det(result.P) == 1
                assert conjugate(A, result.P) == B

    def test_split_versus_non_split_extension(self, gap_instance):
        split = M([1, 0, 0], [0, 3, 1], [0, 2, 1])
        result = isomorphic(TorusBundle(split), TorusBundle(gap_instance))
        assert result.status is IsoStatus.NOT_ISO

    def test_worked_instance_is_its_split(self, worked_instance):
        split = M([1, 0, 0], [0, 2, 1], [0, 1, 1])
        result = isomorphic(TorusBundle(worked_instance), TorusBundle(split))
        assert result.status is IsoStatus.ISO
        assert conjugate(worked_instance, result.P) == split

    def test_irreducible_never_wrongly_rejected(self, irreducible_instance):
        B = conjugate(irreducible_instance, M([1, 1, 0], [0, 1, 0], [0, 0, 1]))
        result = isomorphic(TorusBundle(irreducible_instance), TorusBundle(B))
        assert result.status is not IsoStatus.NOT_ISO
        if result.status is IsoStatus.ISO:
            assert conjugate(irreducible_instance, result.P) == B

    def test_minus_one_conjugates(self, minus_one_instance):
        B = conjugated(minus_one_instance, 3)
        result = isomorphic(TorusBundle(minus_one_instance), TorusBundle(B))
        assert result.status is not IsoStatus.NOT_ISO
