"""JSON Lines corpus parsing."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple

from .errors import CorpusFormatError, TormonoError
from .exactmat import IMat, parse_matrix, require_sl

# Verdict tags accepted in the optional "expected" field
EXPECTED_TAGS = {
    "Decomposable",
    "Indecomposable",
    "StablyDecomposable",
    "StablyIndecomposable",
    "IrreducibleCharPoly",
    "MinusOneRoot",
    "CongruenceObstruction",
    "FiberDimensionOne",
    "NonIdentityTwoTorus",
}


@dataclass
class CorpusEntry:
    """One line of a corpus file."""

    id: str
    matrix: IMat
    expected: Optional[str] = None


@dataclass
class CorpusError:
    line: int
    message: str


def parse_entry(line: str, line_no: int) -> CorpusEntry:
    """Parse a single corpus line.

    Raises:
        CorpusFormatError: If the line is not a valid entry
    """
    try:
        raw = json.loads(line)
    except json.JSONDecodeError as exc:
        raise CorpusFormatError(f"line {line_no}: invalid JSON ({exc.msg})") from None
    if not isinstance(raw, dict):
        raise CorpusFormatError(f"line {line_no}: expected an object")

    literal = raw.get("matrix")
    if not isinstance(literal, str):
        raise CorpusFormatError(f"line {line_no}: missing matrix literal")
    try:
        matrix = parse_matrix(literal)
        require_sl(matrix, "Corpus matrix")
    except TormonoError as exc:
        raise CorpusFormatError(f"line {line_no}: {exc}") from None

    expected = raw.get("expected")
    if expected is not None and expected not in EXPECTED_TAGS:
        raise CorpusFormatError(f"line {line_no}: unknown expected tag {expected!r}")

    return CorpusEntry(id=str(raw.get("id", line_no)), matrix=matrix, expected=expected)


def parse_corpus(corpus_path: Path | str) -> Tuple[List[CorpusEntry], List[CorpusError]]:
    """Parse a JSON Lines corpus file.

    Malformed lines are collected as errors; blank lines are skipped.

    Args:
        corpus_path: Path to the corpus

    Returns:
        Tuple of (entries, errors)

    Raises:
        FileNotFoundError: If the corpus file doesn't exist
    """
    corpus_path = Path(corpus_path)

    if not corpus_path.exists():
        raise FileNotFoundError(f"Corpus file not found: {corpus_path}")

    entries: List[CorpusEntry] = []
    errors: List[CorpusError] = []

    for line_no, raw_line in enumerate(corpus_path.read_bytes().split(b"\n"), start=1):
        try:
            line = raw_line.decode("utf-8")
        except UnicodeDecodeError as exc:
            errors.append(CorpusError(line_no, f"line {line_no}: not valid UTF-8 ({exc.reason})"))
            continue
        if not line.strip():
            continue
        try:
            entries.append(parse_entry(line, line_no))
        except CorpusFormatError as exc:
            errors.append(CorpusError(line_no, str(exc)))

    return entries, errors
