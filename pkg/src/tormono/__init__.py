"""Torus bundle monodromy classifier."""

__version__ = "0.1.0"

from tormono.core.exactmat import IMat, parse_matrix, format_matrix
from tormono.core.polyint import MonicIntPoly, cubic_case
from tormono.core.sl2z import conjugate_sl2, canonical_form
from tormono.core.bundles import TorusBundle, ThickenedBundle, fiber_product, isomorphic, thicken
from tormono.core.classify import classify_decomposable, classify_stable, verify_certificate

__all__ = [
    "IMat",
    "parse_matrix",
    "format_matrix",
    "MonicIntPoly",
    "cubic_case",
    "conjugate_sl2",
    "canonical_form",
    "TorusBundle",
    "ThickenedBundle",
    "fiber_product",
    "isomorphic",
    "thicken",
    "classify_decomposable",
    "classify_stable",
    "verify_certificate",
]
