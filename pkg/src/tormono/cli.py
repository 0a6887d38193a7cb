"""Command-line interface for tormono."""

from __future__ import annotations

import argparse
import logging
import re
import sys
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from functools import partial
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from . import __version__
from .core.budget import DEFAULT_BOUND, MAX_LATTICE_POINTS
from .core.bundles import TorusBundle, fiber_product, isomorphic, parse_bundle, thicken
from .core.classify import Verdict, classify_decomposable, classify_stable, classify_thickened
from .core.corpus import CorpusEntry, parse_corpus
from .core.errors import CertificateError, CorpusFormatError, MatrixFormatError, RegimeError, TormonoError
from .core.exactmat import format_matrix, parse_matrix
from .core.monodromy3 import (
    Convention,
    ao_congruence,
    ext_split_test,
    newman_reduce,
    split_residue,
    stable_split,
)
from .core.oracle import brute_block_split, brute_similarity, random_slnz, stabilized_exploration
from .writers import json_report, text_report

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_SEMANTIC = 3

MAX_GEN_DIM = 4

# argparse would otherwise read a literal with a leading minus sign as an option
MATRIX_LITERAL_ARG = re.compile(r"^-\d[\d,;@\s-]*$")


class _ArgumentParser(argparse.ArgumentParser):
    """Bad flags are usage errors: exit 1. Literals such as "-1,0;0,-1" are positionals."""

    def __init__(self, *args: Any, **kwargs: Any) -> None:
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = MATRIX_LITERAL_ARG

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"Error: {message}\n")


def _configure_logging(verbose: int) -> None:
    level = logging.WARNING
    if verbose == 1:
        level = logging.INFO
    elif verbose >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    logging.getLogger("tormono").setLevel(level)


def _emit(args: argparse.Namespace, data: Dict[str, Any], text: str) -> None:
    print(json_report.dumps(data) if args.json else text)


def _verdict_views(verdict) -> tuple:
    if isinstance(verdict, Verdict):
        return json_report.verdict_to_dict(verdict), text_report.format_verdict(verdict)
    return json_report.stable_verdict_to_dict(verdict), text_report.format_stable_verdict(verdict)


def cmd_classify(args: argparse.Namespace) -> int:
    bundle = parse_bundle(args.matrix)
    verdict = classify_thickened(bundle, args.bound, stable=args.stable)
    _emit(args, *_verdict_views(verdict))
    return EXIT_OK


def cmd_thicken(args: argparse.Namespace) -> int:
    bundle = parse_bundle(args.bundle)
    if args.base is not None:
        bundle = thicken(bundle.core, args.base)
    verdict = classify_thickened(bundle, args.bound, stable=args.stable)
    _emit(args, *_verdict_views(verdict))
    return EXIT_OK


def cmd_iso(args: argparse.Namespace) -> int:
    e1 = TorusBundle.from_literal(args.matrix1)
    e2 = TorusBundle.from_literal(args.matrix2)
    result = isomorphic(e1, e2, args.bound)
    _emit(args, json_report.iso_to_dict(result), text_report.format_iso(result))
    return EXIT_OK


def cmd_product(args: argparse.Namespace) -> int:
    product = fiber_product(TorusBundle.from_literal(args.matrix1), TorusBundle.from_literal(args.matrix2))
    data: Dict[str, Any] = {"product": str(product), "fiber_dim": product.fiber_dim, "classification": None}
    text = f"Product:     {product}"
    if product.fiber_dim <= 3:
        verdict = classify_stable(product, args.bound) if args.stable else classify_decomposable(product, args.bound)
        views = _verdict_views(verdict)
        data["classification"] = views[0]
        text += "\n" + views[1]
    _emit(args, data, text)
    return EXIT_OK


def cmd_witness(args: argparse.Namespace) -> int:
    A = TorusBundle.from_literal(args.matrix).monodromy
    rf = newman_reduce(A, args.eigenvalue)
    data: Dict[str, Any] = {
        "input": format_matrix(A),
        "lambda": rf.lam,
        "a": list(rf.a),
        "A2": format_matrix(rf.A2),
        "R": format_matrix(rf.R),
    }
    lines = [
        f"Newman form: {format_matrix(rf.matrix)}  (R = {format_matrix(rf.R)})",
        f"  a = {rf.a}, A2 = {format_matrix(rf.A2)}",
    ]
    for convention in Convention:
        report = ao_congruence(rf.a, rf.A2, convention)
        data[f"congruence_{convention.value}"] = {
            "holds": report.holds,
            "values": list(report.values),
            "modulus": report.modulus,
            "regime": report.regime,
        }
        lines.append(
            f"Congruence ({convention.value}): {report.values} mod {report.modulus} -> "
            f"{'holds' if report.holds else 'fails'}" + (f" [{report.regime}]" if report.regime else "")
        )

    if rf.lam == 1:
        try:
            ext = ext_split_test(rf.a, rf.A2)
            outcome = stable_split(rf, args.bound)
        except RegimeError as exc:
            data["regime"] = exc.regime
            lines.append(f"A2 - I is singular: no extension test ({exc.regime})")
        else:
            data["split_residue"] = list(split_residue(rf.a, rf.A2))
            data["ext_integral"] = ext.integral
            data["stable_split"] = json_report.outcome_to_dict(outcome)
            lines.append(f"Split residue: {data['split_residue']}")
            lines.append(text_report.format_outcome(outcome))
    _emit(args, data, "\n".join(lines))
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    if not 1 <= args.dim <= MAX_GEN_DIM:
        print(f"Error: --dim must be between 1 and {MAX_GEN_DIM}", file=sys.stderr)
        return EXIT_USAGE
    if args.steps < 0 or args.count < 0:
        print("Error: --steps and --count must be non-negative", file=sys.stderr)
        return EXIT_USAGE
    for k in range(args.count):
        print(format_matrix(random_slnz(args.dim, args.steps, args.seed + k)))
    return EXIT_OK


def _matches(expected: Optional[str], result: Dict[str, Any]) -> Optional[bool]:
    if expected is None:
        return None
    return expected in (result["verdict"], result["case"])


def _id_key(record: Dict[str, Any]) -> tuple:
    """Numeric ids (the line-number default) first, in numeric order, then the rest."""
    entry_id = record["id"]
    if entry_id.isascii() and entry_id.isdigit():
        return (0, int(entry_id), "")
    return (1, 0, entry_id)


def _classify_entry(entry: CorpusEntry, bound: int, stable: bool) -> Dict[str, Any]:
    record: Dict[str, Any] = {"id": entry.id, "expected": entry.expected}
    try:
        bundle = TorusBundle(entry.matrix)
        if stable:
            result = json_report.stable_verdict_to_dict(classify_stable(bundle, bound))
        else:
            result = json_report.verdict_to_dict(classify_decomposable(bundle, bound))
    except CertificateError:
        raise
    except TormonoError as exc:
        record.update(result=None, error=str(exc), match=None)
        return record
    record.update(result=result, error=None, match=_matches(entry.expected, result))
    return record


def cmd_batch(args: argparse.Namespace) -> int:
    if not args.corpus.exists():
        print(f"Error: Corpus file not found: {args.corpus}", file=sys.stderr)
        return EXIT_USAGE

    entries, errors = parse_corpus(args.corpus)
    run = partial(_classify_entry, bound=args.bound, stable=args.stable)
    if args.parallel:
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            records: List[Dict[str, Any]] = list(pool.map(run, entries))
    else:
        records = [run(entry) for entry in entries]
    records.sort(key=_id_key)

    counts = Counter(r["result"]["verdict"] for r in records if r["result"])
    cases = Counter(r["result"]["case"] for r in records if r["result"] and r["result"]["case"])
    mismatches = [r["id"] for r in records if r["match"] is False]
    summary = {
        "entries": records,
        "errors": [{"line": e.line, "message": e.message} for e in errors],
        "counts": dict(sorted(counts.items())),
        "cases": dict(sorted(cases.items())),
        "mismatches": mismatches,
    }

    lines = []
    for r in records:
        if r["error"]:
            lines.append(f"{r['id']}: error: {r['error']}")
            continue
        res = r["result"]
        line = f"{r['id']}: {res['verdict']}" + (f" ({res['case']})" if res["case"] else "")
        if r["match"] is False:
            line += f"  MISMATCH (expected {r['expected']})"
        lines.append(line)
    for e in errors:
        lines.append(f"line {e.line}: {e.message}")
    lines.append("Counts: " + ", ".join(f"{k}={v}" for k, v in summary["counts"].items()))
    if summary["cases"]:
        lines.append("Cases:  " + ", ".join(f"{k}={v}" for k, v in summary["cases"].items()))
    if mismatches:
        lines.append(f"Mismatches: {', '.join(mismatches)}")
    _emit(args, summary, "\n".join(lines))

    if errors and not entries:
        return EXIT_PARSE
    if mismatches:
        return EXIT_USAGE
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace) -> int:
    if args.oracle_command == "split":
        report = brute_block_split(parse_matrix(args.matrix), args.bound, args.max_points)
        _emit(args, json_report.search_to_dict(report), text_report.format_search(report))
    elif args.oracle_command == "similar":
        report = brute_similarity(parse_matrix(args.matrix1), parse_matrix(args.matrix2), args.bound, args.max_points)
        _emit(args, json_report.search_to_dict(report), text_report.format_search(report))
    else:
        A = TorusBundle.from_literal(args.matrix).monodromy
        records = stabilized_exploration(A, args.dims, args.bound, args.entry_bound, args.max_points)
        data = {
            "input": format_matrix(A),
            "records": [
                {"stabilizer": format_matrix(r.stabilizer), **json_report.search_to_dict(r.report)} for r in records
            ],
        }
        text = "\n".join(
            f"B = {format_matrix(r.stabilizer)}: {text_report.format_search(r.report)}" for r in records
        )
        _emit(args, data, text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0, help="More logging (-v info, -vv debug)")
    common.add_argument("--json", action="store_true", help="Emit a JSON report")

    bounded = argparse.ArgumentParser(add_help=False)
    bounded.add_argument(
        "--bound",
        type=int,
        default=DEFAULT_BOUND,
        help=f"Search bound in lattice-coefficient units (default: {DEFAULT_BOUND})",
    )

    parser = _ArgumentParser(
        prog="tormono",
        description="Decide (stable) S^1-decomposability of torus bundles from their monodromy",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    p = sub.add_parser("classify", parents=[common, bounded], help="Classify a bundle")
    p.add_argument("matrix", help='Monodromy literal such as "1,1;0,1", optionally with "@m"')
    p.add_argument("--stable", action="store_true", help="Decide stable decomposability")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("iso", parents=[common, bounded], help="Test two bundles for isomorphism")
    p.add_argument("matrix1")
    p.add_argument("matrix2")
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("product", parents=[common, bounded], help="Fiber product of two bundles")
    p.add_argument("matrix1")
    p.add_argument("matrix2")
    p.add_argument("--stable", action="store_true")
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("thicken", parents=[common, bounded], help="Classify a bundle over T^m")
    p.add_argument("bundle", help='Literal "M@m"')
    p.add_argument("--base", type=int, default=None, help="Base dimension m (overrides the @m suffix)")
    p.add_argument("--stable", action="store_true")
    p.set_defaults(func=cmd_thicken)

    p = sub.add_parser("witness", parents=[common], help="Show the reduction and splitting data of a 3x3 monodromy")
    p.add_argument("matrix")
    p.add_argument("--eigenvalue", type=int, choices=[1, -1], default=1)
    p.add_argument("--bound", type=int, default=20, help="Lattice bound for the stable split search (default: 20)")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("gen", parents=[common], help="Generate seeded random SL(n, Z) matrices")
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("batch", parents=[common, bounded], help="Classify a JSON Lines corpus")
    p.add_argument("corpus", type=Path)
    p.add_argument("--stable", action="store_true")
    p.add_argument("--parallel", action="store_true", help="Classify entries on worker threads")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("oracle", help="Bounded brute-force searches")
    oracle_sub = p.add_subparsers(dest="oracle_command", required=True, parser_class=_ArgumentParser)
    searches = argparse.ArgumentParser(add_help=False)
    searches.add_argument("--max-points", type=int, default=MAX_LATTICE_POINTS)

    q = oracle_sub.add_parser("split", parents=[common, bounded, searches], help="Block-split search")
    q.add_argument("matrix")
    q.set_defaults(func=cmd_oracle)

    q = oracle_sub.add_parser("similar", parents=[common, bounded, searches], help="Similarity search")
    q.add_argument("matrix1")
    q.add_argument("matrix2")
    q.set_defaults(func=cmd_oracle)

    q = oracle_sub.add_parser("explore", parents=[common, searches], help="Stabilized splitting exploration")
    q.add_argument("matrix")
    q.add_argument("--dims", type=int, nargs="+", default=[2])
    q.add_argument("--bound", type=int, default=3)
    q.add_argument("--entry-bound", type=int, default=1)
    q.set_defaults(func=cmd_oracle)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main CLI entry point."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    _configure_logging(args.verbose)

    try:
        return args.func(args)
    except (MatrixFormatError, CorpusFormatError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except TormonoError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_SEMANTIC


if __name__ == "__main__":
    sys.exit(main())
