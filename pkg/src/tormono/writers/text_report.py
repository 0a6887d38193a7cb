"""Human-readable report writer."""

from __future__ import annotations

from typing import List

from ..core.bundles import IsoResult
from ..core.classify import BlockCertificate, StableVerdict, Verdict
from ..core.exactmat import format_matrix
from ..core.monodromy3 import StableSplitOutcome
from ..core.oracle import SimilaritySearchReport


def _base(base_dim: int) -> str:
    return "S^1" if base_dim == 1 else f"T^{base_dim}"


def format_verdict(v: Verdict) -> str:
    lines: List[str] = [
        f"Monodromy:   {format_matrix(v.input)}  (fiber T^{v.fiber_dim}, base {_base(v.base_dim)})",
        f"Verdict:     {v.tag}" + (f" ({v.case.value})" if v.case else ""),
    ]
    if v.values is not None:
        lines.append(f"Congruence:  a(A2+I) = {v.values} mod {v.modulus}")
    if v.exact_values is not None:
        lines.append(f"Exact test:  a(A2-I) = {v.exact_values} mod {v.exact_modulus}")
    if v.certificate is not None:
        lines.append(f"Certificate: P = {format_matrix(v.certificate.P)}  blocks {v.certificate.sizes}")
    if v.certificate_status:
        lines.append(f"Status:      {v.certificate_status}")
    if v.flags:
        lines.append(f"Flags:       {', '.join(v.flags)}")
    return "\n".join(lines)


def format_outcome(outcome: StableSplitOutcome) -> str:
    X = "; ".join(", ".join(str(x) for x in row) for row in outcome.X)
    lines = [f"Stable split: {outcome.status.value}", f"  X = [{X}]"]
    if outcome.P is not None:
        lines.append(f"  P = {format_matrix(outcome.P)}  block {format_matrix(outcome.block)}")
    if outcome.note:
        lines.append(f"  note: {outcome.note}")
    return "\n".join(lines)


def format_stable_verdict(v: StableVerdict) -> str:
    lines: List[str] = [
        f"Monodromy:   {format_matrix(v.input)}  (fiber T^{v.fiber_dim}, base {_base(v.base_dim)})",
        f"Verdict:     {v.tag}" + (f" ({v.case.value})" if v.case else ""),
    ]
    if v.witness is not None:
        lines.append(f"Witness:     {v.witness.value}")
    if v.certificate is not None:
        extra = (
            f"blocks {v.certificate.sizes}"
            if isinstance(v.certificate, BlockCertificate)
            else f"block {format_matrix(v.certificate.block)}"
        )
        lines.append(f"Certificate: P = {format_matrix(v.certificate.P)}  {extra}")
    if v.certificate_status:
        lines.append(f"Status:      {v.certificate_status}")
    if v.flags:
        lines.append(f"Flags:       {', '.join(v.flags)}")
    if v.outcome is not None and not v.outcome.found:
        lines.append(format_outcome(v.outcome))
    return "\n".join(lines)


def format_iso(result: IsoResult) -> str:
    line = result.status.value
    if result.P is not None:
        line += f"  P = {format_matrix(result.P)}"
    if result.invariant:
        line += f"  ({result.invariant})"
    if result.note:
        line += f"  [{result.note}]"
    return line


def format_search(report: SimilaritySearchReport) -> str:
    line = f"{report.outcome}  bound={report.bound} lattice_rank={report.lattice_rank} points={report.points}"
    if report.P is not None:
        line += f"\n  P = {format_matrix(report.P)}"
    if report.target is not None:
        line += f"\n  target = {format_matrix(report.target)}  blocks {report.sizes}"
    if report.note:
        line += f"\n  note: {report.note}"
    return line
