"""JSON report writer.

Every report is a plain dict with a fixed key set, so output is stable
across runs and can be parsed back with ``json.loads``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Dict, Optional, Sequence, Tuple, Union

from ..core.bundles import IsoResult
from ..core.classify import BlockCertificate, StabilizerCertificate, StableVerdict, Verdict
from ..core.exactmat import IMat, format_matrix
from ..core.monodromy3 import StableSplitOutcome
from ..core.oracle import SimilaritySearchReport


def _matrix(M: Optional[IMat]) -> Optional[str]:
    return format_matrix(M) if M is not None else None


def _fractions(X: Sequence[Sequence[Fraction]]) -> Optional[list]:
    if not X:
        return None
    return [[str(x) for x in row] for row in X]


def _certificate(cert: Union[BlockCertificate, StabilizerCertificate, None]) -> Optional[Dict[str, Any]]:
    if cert is None:
        return None
    if isinstance(cert, BlockCertificate):
        return {"kind": "block", "P": format_matrix(cert.P), "sizes": list(cert.sizes)}
    return {"kind": "stabilizer", "P": format_matrix(cert.P), "block": format_matrix(cert.block)}


def _ivec(v: Optional[Tuple[int, ...]]) -> Optional[list]:
    return list(v) if v is not None else None


def verdict_to_dict(v: Verdict) -> Dict[str, Any]:
    return {
        "input": format_matrix(v.input),
        "fiber_dim": v.fiber_dim,
        "verdict": v.tag,
        "case": v.case.value if v.case else None,
        "flags": list(v.flags),
        "certificate": _certificate(v.certificate),
        "certificate_status": v.certificate_status,
        "modulus": v.modulus,
        "values": _ivec(v.values),
        "exact_modulus": v.exact_modulus,
        "exact_values": _ivec(v.exact_values),
        "base_dim": v.base_dim,
    }


def outcome_to_dict(outcome: Optional[StableSplitOutcome]) -> Optional[Dict[str, Any]]:
    if outcome is None:
        return None
    return {
        "status": outcome.status.value,
        "P": _matrix(outcome.P),
        "block": _matrix(outcome.block),
        "X": _fractions(outcome.X),
        "note": outcome.note,
    }


def stable_verdict_to_dict(v: StableVerdict) -> Dict[str, Any]:
    return {
        "input": format_matrix(v.input),
        "fiber_dim": v.fiber_dim,
        "verdict": v.tag,
        "case": v.case.value if v.case else None,
        "witness": v.witness.value if v.witness else None,
        "flags": list(v.flags),
        "certificate": _certificate(v.certificate),
        "certificate_status": v.certificate_status,
        "stable_split": outcome_to_dict(v.outcome),
        "base_dim": v.base_dim,
    }


def iso_to_dict(result: IsoResult) -> Dict[str, Any]:
    return {
        "status": result.status.value,
        "P": _matrix(result.P),
        "invariant": result.invariant,
        "note": result.note,
    }


def search_to_dict(report: SimilaritySearchReport) -> Dict[str, Any]:
    return {
        "outcome": report.outcome,
        "P": _matrix(report.P),
        "target": _matrix(report.target),
        "sizes": list(report.sizes),
        "bound": report.bound,
        "lattice_rank": report.lattice_rank,
        "points": report.points,
        "note": report.note,
    }


def dumps(report: Any) -> str:
    """Serialize a report dict with a fixed layout."""
    return json.dumps(report, indent=2, ensure_ascii=False)
