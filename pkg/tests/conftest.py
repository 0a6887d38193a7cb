"""Shared fixtures: worked monodromies and seeded conjugation helpers."""

from __future__ import annotations

import pytest

from tormono.core.exactmat import IMat, conjugate
from tormono.core.oracle import random_slnz


def M(*rows):
    """Shorthand: M([1, 1], [0, 1])."""
    return IMat.from_rows([list(r) for r in rows])


def conjugated(A: IMat, seed: int, steps: int = 6) -> IMat:
    """Q^-1 A Q for a seeded random Q in SL(n, Z)."""
    return conjugate(A, random_slnz(A.n, steps, seed))


@pytest.fixture
def worked_instance():
    """Newman form with a = (0, 1), A2 = [[2, 1], [1, 1]]."""
    return M([1, 0, 1], [0, 2, 1], [0, 1, 1])


@pytest.fixture
def gap_instance():
    """Newman form with a = (1, 0), A2 = [[3, 1], [2, 1]]."""
    return M([1, 1, 0], [0, 3, 1], [0, 2, 1])


@pytest.fixture
def minus_one_instance():
    return M([-1, 0, 0], [0, 0, 1], [0, 1, 1])


@pytest.fixture
def irreducible_instance():
    """Companion matrix of t^3 - t - 1."""
    return M([0, 0, 1], [1, 0, 1], [0, 1, 0])
