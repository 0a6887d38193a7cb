"""Tests for SL(2, Z) conjugacy, canonical forms and centralizer units."""

import pytest

from tormono.core.errors import DomainError
from tormono.core.exactmat import conjugate, det
from tormono.core.oracle import random_slnz
from tormono.core.sl2z import (
    I2,
    L_GEN,
    R_GEN,
    S_GEN,
    CommutantElement,
    TraceClass,
    canonical_form,
    centralizer_base,
    commutant_coordinates,
    conjugate_gl2,
    conjugate_sl2,
    fundamental_unit,
    trace_class,
    unit_generators,
    unit_representatives,
    units_mod,
)

from conftest import M, conjugated

GOLDEN = M([2, 1], [1, 1])


def assert_conjugator(A, B, P):
    assert det(P) == 1
    assert conjugate(A, P) == B


class TestTraceClass:
    @pytest.mark.parametrize(
        "A, expected",
        [
            (S_GEN, TraceClass.ELLIPTIC),
            (M([0, -1], [1, 1]), TraceClass.ELLIPTIC),
            (R_GEN, TraceClass.PARABOLIC),
            (M([-1, 3], [0, -1]), TraceClass.PARABOLIC),
            (GOLDEN, TraceClass.HYPERBOLIC),
            (M([-3, -1], [-2, -1]), TraceClass.HYPERBOLIC),
        ],
    )
    def test_classes(self, A, expected):
        assert trace_class(A) == expected


class TestConjugacy:
    def test_r_and_l_are_not_conjugate(self):
        result = conjugate_sl2(R_GEN, L_GEN)
        assert not result.conjugate
        assert result.invariant

    def test_rl_and_lr(self):
        result = conjugate_sl2(R_GEN @ L_GEN, L_GEN @ R_GEN)
        assert result.conjugate
        assert_conjugator(R_GEN @ L_GEN, L_GEN @ R_GEN, result.P)

    def test_golden_and_transpose(self):
        B = M([1, 1], [1, 2])
        result = conjugate_sl2(GOLDEN, B)
        assert result.conjugate
        assert_conjugator(GOLDEN, B, result.P)

    def test_identical_inputs(self):
        assert conjugate_sl2(GOLDEN, GOLDEN).P == I2

    def test_different_traces(self):
        result = conjugate_sl2(GOLDEN, R_GEN)
        assert not result.conjugate
        assert "trace" in result.invariant

    def test_scalar_classes(self):
        assert not conjugate_sl2(I2, R_GEN).conjugate
        assert not conjugate_sl2(-I2, M([-1, 1], [0, -1])).conjugate

    def test_elliptic_orientation(self):
        S_inv = M([0, 1], [-1, 0])
        assert not conjugate_sl2(S_GEN, S_inv).conjugate
        B = conjugated(S_GEN, seed=5)
        result = conjugate_sl2(S_GEN, B)
        assert result.conjugate
        assert_conjugator(S_GEN, B, result.P)

    def test_order_six_elements(self):
        X = M([0, -1], [1, 1])
        B = conjugated(X, seed=11, steps=8)
        assert conjugate_sl2(X, B).conjugate
        assert not conjugate_sl2(X, M([1, 1], [-1, 0])).conjugate

    def test_parabolic_invariant(self):
        A = M([1, 3], [0, 1])
        assert conjugate_sl2(A, conjugated(A, seed=2)).conjugate
        assert not conjugate_sl2(A, M([1, 2], [0, 1])).conjugate
        assert not conjugate_sl2(A, M([1, -3], [0, 1])).conjugate

    def test_not_sl2(self):
        with pytest.raises(DomainError):
            conjugate_sl2(M([2, 0], [0, 1]), I2)

    def test_seeded_conjugates(self):
        for seed in range(200):
            A = random_slnz(2, 7, seed)
            B = conjugate(A, random_slnz(2, 5, 10_000 + seed))
            result = conjugate_sl2(A, B)
            assert result.conjugate, (A, B)
            assert_conjugator(A, B, result.P)

    def test_symmetric_answers(self):
        for seed in range(500):
            A = random_slnz(2, 6, 20_000 + seed)
            if seed % 2:
                B = random_slnz(2, 6, 30_000 + seed)
            else:
                B = conjugate(A, random_slnz(2, 4, 40_000 + seed))
            forward, backward = conjugate_sl2(A, B), conjugate_sl2(B, A)
            assert forward.conjugate == backward.conjugate, (A, B)
            if forward.conjugate:
                assert_conjugator(A, B, forward.P)
                assert_conjugator(B, A, backward.P)


class TestGL2:
    def test_flip_conjugates_elliptic_pair(self):
        S_inv = M([0, 1], [-1, 0])
        result = conjugate_gl2(S_GEN, S_inv)
        assert result.conjugate
        assert conjugate(S_GEN, result.P) == S_inv

    def test_parabolic_sign_of_k(self):
        result = conjugate_gl2(R_GEN, M([1, -1], [0, 1]))
        assert result.conjugate
        assert conjugate(R_GEN, result.P) == M([1, -1], [0, 1])


class TestCanonicalForm:
    def test_hyperbolic_is_class_invariant(self):
        base = canonical_form(GOLDEN)
        assert base.kind is TraceClass.HYPERBOLIC
        assert min(base.matrix.entries) >= 0
        for seed in range(20):
            assert canonical_form(conjugated(GOLDEN, seed)).matrix == base.matrix

    def test_negative_trace(self):
        A = M([-3, -1], [-2, -1])
        cf = canonical_form(A)
        assert cf.invariant.startswith("-")
        assert conjugate(A, cf.conjugator) == cf.matrix

    def test_scalar(self):
        assert canonical_form(-I2).matrix == -I2


class TestCentralizer:
    def test_primitive_base(self):
        assert centralizer_base(GOLDEN) == GOLDEN

    def test_imprimitive_base(self):
        assert centralizer_base(M([3, 2], [4, 3])) == M([0, 1], [2, 0])

    def test_scalar_has_no_base(self):
        with pytest.raises(DomainError):
            centralizer_base(I2)

    def test_coordinates(self):
        base = M([0, 1], [2, 0])
        assert commutant_coordinates(M([3, 2], [4, 3]), base) == (3, 2)
        with pytest.raises(DomainError):
            commutant_coordinates(M([1, 1], [0, 1]), base)

    def test_multiplication_matches_matrices(self):
        x = CommutantElement(1, 2, GOLDEN)
        y = CommutantElement(-1, 3, GOLDEN)
        assert (x * y).matrix == x.matrix @ y.matrix

    def test_unit_inverse(self):
        e = CommutantElement(1, -1, GOLDEN)
        assert e.is_unit
        assert e.inverse().matrix @ e.matrix == I2


class TestUnits:
    def test_fundamental_unit_of_golden(self):
        eps = fundamental_unit(GOLDEN)
        assert abs(eps.det) == 1
        assert eps.matrix @ eps.matrix in (GOLDEN, -GOLDEN)

    def test_generators(self):
        gens = unit_generators(GOLDEN)
        assert gens[0].matrix == -I2
        assert gens[1].matrix == GOLDEN
        assert all(g.is_unit for g in gens)

    def test_elliptic_generators_are_finite(self):
        gens = unit_generators(S_GEN)
        assert all(g.det == 1 for g in gens)
        assert any(g.matrix == S_GEN for g in gens)

    def test_units_mod(self):
        residues = units_mod(M([3, 1], [2, 1]), 2)
        assert (1, 0) in residues
        assert all(0 <= p < 2 and 0 <= q < 2 for p, q in residues)
        assert units_mod(M([3, 1], [2, 1]), 2, det_one=True) <= residues

    def test_representatives_are_units(self):
        reps = unit_representatives(GOLDEN, 5)
        for (p, q, d), e in reps.items():
            assert e.residue(5) == (p, q)
            assert e.det == d

    def test_zero_modulus(self):
        with pytest.raises(DomainError):
            units_mod(GOLDEN, 0)
