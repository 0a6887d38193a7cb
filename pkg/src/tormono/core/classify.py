"""S^1-decomposability and stable S^1-decomposability of torus bundles.

Every Decomposable verdict carries a certificate that is re-verified by
exact multiplication before it leaves this module.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Tuple, Union

from .budget import DEFAULT_BOUND
from .bundles import ThickenedBundle, TorusBundle
from .errors import CertificateError, DimensionError, RegimeError, TormonoError
from .exactmat import (
    IMat,
    IVec,
    charpoly,
    conjugate,
    det,
    diagonal_blocks,
    direct_sum,
    is_block_diagonal,
    unimodular_inverse,
)
from .monodromy3 import (
    UNPROVEN_REGIME,
    Convention,
    StableSplitOutcome,
    ao_congruence,
    newman_reduce,
    split_conjugator_3x3,
    stable_split,
    unipotent_split,
)
from .polyint import CubicCase, cubic_case

logger = logging.getLogger(__name__)

CRITERION_CONTRADICTED = "CongruenceCriterionContradicted"
CERTIFICATE_MISSING = "CertificateMissing"

VERIFIED = "Verified"
NOT_FOUND_WITHIN_BOUND = "NotFoundWithinBound"


class Case(str, Enum):
    IRREDUCIBLE_CHAR_POLY = "IrreducibleCharPoly"
    MINUS_ONE_ROOT = "MinusOneRoot"
    CONGRUENCE_OBSTRUCTION = "CongruenceObstruction"
    FIBER_DIMENSION_ONE = "FiberDimensionOne"
    NON_IDENTITY_TWO_TORUS = "NonIdentityTwoTorus"


class StableWitness(str, Enum):
    """How a StablyDecomposable verdict is backed. TheoremAsserted carries no verified certificate."""
    ALREADY_DECOMPOSABLE = "AlreadyDecomposable"
    TRIVIAL_STABILIZER = "TrivialStabilizer"
    THEOREM_ASSERTED = "TheoremAsserted"


@dataclass(frozen=True)
class BlockCertificate:
    """P^-1 A P is block diagonal with SL blocks of the given sizes."""

    P: IMat
    sizes: Tuple[int, ...]


@dataclass(frozen=True)
class StabilizerCertificate:
    """P^-1 ((1) (+) A) P = I2 (+) block."""

    P: IMat
    block: IMat


Certificate = Union[BlockCertificate, StabilizerCertificate]


@dataclass(frozen=True)
class Verdict:
    """Outcome of classify_decomposable.

    ``values``/``modulus`` hold the congruence a (A2 + I) mod (Tr A2 + 2);
    ``exact_values``/``exact_modulus`` the one that decides, a (A2 - I) mod
    (Tr A2 - 2).
    """

    input: IMat
    decomposable: bool
    case: Optional[Case] = None
    certificate: Optional[BlockCertificate] = None
    certificate_status: Optional[str] = None
    flags: Tuple[str, ...] = ()
    values: Optional[IVec] = None
    modulus: Optional[int] = None
    exact_values: Optional[IVec] = None
    exact_modulus: Optional[int] = None
    base_dim: int = 1

    @property
    def fiber_dim(self) -> int:
        return self.input.n

    @property
    def tag(self) -> str:
        return "Decomposable" if self.decomposable else "Indecomposable"


@dataclass(frozen=True)
class StableVerdict:
    input: IMat
    stably_decomposable: bool
    case: Optional[Case] = None
    witness: Optional[StableWitness] = None
    certificate: Optional[Certificate] = None
    certificate_status: Optional[str] = None
    flags: Tuple[str, ...] = ()
    outcome: Optional[StableSplitOutcome] = None
    base_dim: int = 1

    @property
    def fiber_dim(self) -> int:
        return self.input.n

    @property
    def tag(self) -> str:
        return "StablyDecomposable" if self.stably_decomposable else "StablyIndecomposable"


def verify_certificate(A: IMat, cert: Certificate) -> bool:
    """Recompute a certificate exactly; False on any mismatch."""
    try:
        if det(cert.P) != 1:
            return False
        if isinstance(cert, BlockCertificate):
            C = conjugate(A, cert.P)
            if not is_block_diagonal(C, cert.sizes):
                return False
            return all(det(b) == 1 for b in diagonal_blocks(C, cert.sizes))
        if isinstance(cert, StabilizerCertificate):
            V = direct_sum(IMat.identity(1), A)
            return det(cert.block) == 1 and conjugate(V, cert.P) == direct_sum(IMat.identity(2), cert.block)
    except TormonoError:
        return False
    return False


def _checked(A: IMat, cert: Certificate) -> Certificate:
    if not verify_certificate(A, cert):
        raise CertificateError(f"Certificate {cert.P} for {A} does not verify")
    return cert


def _require_supported(E: TorusBundle) -> IMat:
    if E.fiber_dim > 3:
        raise DimensionError(f"Classification supports fiber dimension <= 3, got {E.fiber_dim}")
    return E.monodromy


def _classify_root_one(A: IMat, bound: int) -> Verdict:
    rf = newman_reduce(A, 1)
    reported = ao_congruence(rf.a, rf.A2)
    exact = ao_congruence(rf.a, rf.A2, Convention.TRACE)
    flags = [UNPROVEN_REGIME] if reported.regime else []

    certificate = None
    status = None
    if rf.A2.trace() == 2:
        # charpoly (t - 1)^3: decomposable iff rank(A - I) <= 1
        P = unipotent_split(A)
        decomposable = P is not None
        if P is not None:
            certificate = _checked(A, BlockCertificate(P, (1, 2)))
            status = VERIFIED
    else:
        decomposable = exact.holds
        if decomposable:
            search = split_conjugator_3x3(rf, bound)
            if search.found:
                P = unimodular_inverse(rf.R) @ search.certificate
                certificate = _checked(A, BlockCertificate(P, (1, 2)))
                status = VERIFIED
            else:
                status = NOT_FOUND_WITHIN_BOUND
                flags.append(CERTIFICATE_MISSING)
                logger.warning("%s is decomposable but no certificate was found within bound %d", A, bound)

    if reported.holds != decomposable:
        flags.append(CRITERION_CONTRADICTED)
        logger.warning(
            "%s: congruence %s mod %d predicts %s, exact decision is %s",
            A,
            reported.values,
            reported.modulus,
            "Decomposable" if reported.holds else "Indecomposable",
            "Decomposable" if decomposable else "Indecomposable",
        )

    return Verdict(
        input=A,
        decomposable=decomposable,
        case=None if decomposable else Case.CONGRUENCE_OBSTRUCTION,
        certificate=certificate,
        certificate_status=status,
        flags=tuple(flags),
        values=reported.values,
        modulus=reported.modulus,
        exact_values=exact.values,
        exact_modulus=exact.modulus,
    )


def classify_decomposable(E: TorusBundle, bound: int = DEFAULT_BOUND) -> Verdict:
    """Decide whether E splits as a fiber product of smaller torus bundles.

    Args:
        E: Bundle with fiber dimension 1, 2 or 3
        bound: Search depth for the splitting certificate

    Returns:
        Verdict with a verified certificate when Decomposable

    Raises:
        DimensionError: If the fiber dimension exceeds 3

    Examples:
        >>> classify_decomposable(TorusBundle.from_literal("1,1;0,1")).tag
        'Indecomposable'
    """
    A = _require_supported(E)
    n = E.fiber_dim
    if n == 1:
        return Verdict(A, False, Case.FIBER_DIMENSION_ONE)
    if n == 2:
        if A == IMat.identity(2):
            cert = _checked(A, BlockCertificate(IMat.identity(2), (1, 1)))
            return Verdict(A, True, certificate=cert, certificate_status=VERIFIED)
        return Verdict(A, False, Case.NON_IDENTITY_TWO_TORUS)

    case = cubic_case(charpoly(A))
    if case is CubicCase.IRREDUCIBLE:
        verdict = Verdict(A, False, Case.IRREDUCIBLE_CHAR_POLY)
    elif case is CubicCase.ROOT_MINUS_ONE_ONLY:
        verdict = Verdict(A, False, Case.MINUS_ONE_ROOT)
    else:
        verdict = _classify_root_one(A, bound)
    logger.info("%s: %s%s", A, verdict.tag, f" ({verdict.case.value})" if verdict.case else "")
    return verdict


def classify_stable(E: TorusBundle, bound: int = DEFAULT_BOUND) -> StableVerdict:
    """Decide whether E becomes decomposable after a fiber product with another bundle.

    Raises:
        DimensionError: If the fiber dimension exceeds 3
    """
    A = _require_supported(E)
    verdict = classify_decomposable(E, bound)
    if verdict.decomposable:
        return StableVerdict(
            A,
            True,
            witness=StableWitness.ALREADY_DECOMPOSABLE,
            certificate=verdict.certificate,
            certificate_status=verdict.certificate_status,
            flags=verdict.flags,
        )
    if verdict.case is not Case.CONGRUENCE_OBSTRUCTION:
        return StableVerdict(A, False, verdict.case, flags=verdict.flags)

    rf = newman_reduce(A, 1)
    try:
        outcome = stable_split(rf)
    except RegimeError as exc:
        logger.warning("%s: stable splitting unavailable (%s)", A, exc)
        return StableVerdict(
            A,
            True,
            witness=StableWitness.THEOREM_ASSERTED,
            certificate_status=exc.regime,
            flags=verdict.flags,
        )

    if outcome.found:
        lift = direct_sum(IMat.identity(1), unimodular_inverse(rf.R))
        cert = _checked(A, StabilizerCertificate(lift @ outcome.P, outcome.block))
        return StableVerdict(
            A,
            True,
            witness=StableWitness.TRIVIAL_STABILIZER,
            certificate=cert,
            certificate_status=VERIFIED,
            flags=verdict.flags,
            outcome=outcome,
        )
    return StableVerdict(
        A,
        True,
        witness=StableWitness.THEOREM_ASSERTED,
        certificate_status=outcome.status.value,
        flags=verdict.flags,
        outcome=outcome,
    )


def classify_thickened(
    T: ThickenedBundle, bound: int = DEFAULT_BOUND, stable: bool = False
) -> Union[Verdict, StableVerdict]:
    """Verdicts for a bundle over T^m; both lift unchanged from its core."""
    verdict = classify_stable(T.core, bound) if stable else classify_decomposable(T.core, bound)
    return replace(verdict, base_dim=T.base_dim)
