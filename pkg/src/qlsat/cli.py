"""Command-line front end: eval, verify, decide, explore, reproduce.

Exit codes: 0 when a command ran (whatever the verdict), 1 when ``verify``
rejects a certificate or ``reproduce`` has a failing check, 2 for parse
errors, bad flags or invalid input values, 3 for dimension or field
mismatches, 4 when a formula atom has no value.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import nullcontext
from typing import Sequence, TextIO

from .certificate import (
    CertificateFormatError,
    Entry,
    certificate_for,
    dumps,
    evaluate,
    load,
    verify,
)
from .exactla import DimensionMismatchError, Field, FieldMismatchError, ProjectorError, Subspace
from .explorer import HuntSummary, InternalSoundnessError, explore
from .formula import ParseError, count_formulas, enumerate_formulas, parse, to_text
from .reproduce import FAIL, reproduce
from .sampling import DEFAULT_SEED
from .search import SearchBudget, Verdict, decide_com_sat, search_pba, search_std
from .semantics import MissingAtomError, NotAdmissibleError

EXIT_OK, EXIT_REJECTED, EXIT_INPUT, EXIT_MISMATCH, EXIT_MISSING_ATOM = 0, 1, 2, 3, 4

MAX_FORMULAS = 100_000


class UsageError(Exception):
    """Bad flag values that argparse cannot catch by itself."""


def _field(text: str) -> Field:
    try:
        return Field(text.upper())
    except ValueError:
        raise argparse.ArgumentTypeError(f"field must be rat or gauss, not {text!r}") from None


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _dims(text: str) -> list[int]:
    try:
        dims = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated dimensions, got {text!r}") from None
    if not dims or min(dims) < 1:
        raise argparse.ArgumentTypeError("dimensions must be >= 1")
    return dims


def _budget(args: argparse.Namespace) -> SearchBudget:
    return SearchBudget(max_trials=args.max_trials, rng_seed=args.seed, dimension=args.dim,
                        candidate_denominator_bound=args.denom_bound, field=args.field)


def _print_value(out: TextIO, value) -> None:
    if isinstance(value, Subspace):
        print(f"value: {value}", file=out)
        print(f"dimension of value: {value.dim}", file=out)
    else:
        print("value:", file=out)
        for row in str(value).splitlines():
            print(f"  {row}", file=out)


# --- commands -----------------------------------------------------------------


def cmd_eval(args: argparse.Namespace, out: TextIO) -> int:
    cert = load(args.valuation)
    if args.dim is not None and args.dim != cert.dimension:
        raise DimensionMismatchError(f"--dim {args.dim} but the valuation file has dimension {cert.dimension}")
    if args.field is not None and args.field is not cert.field:
        raise FieldMismatchError(f"--field {args.field.value} but the valuation file uses {cert.field.value}")
    text = cert.formula if args.formula == "-" else args.formula
    if text is None:
        raise UsageError("no formula given on the command line or in the file")
    semantics = args.semantics or cert.semantics
    ev = evaluate(cert, to_text(parse(text)), semantics)
    print(f"formula: {to_text(parse(text))}", file=out)
    print(f"semantics: {semantics}  field: {cert.field.value}  dimension: {cert.dimension}", file=out)
    if ev.blame is not None:
        print("value: undefined", file=out)
        print(f"blame: {ev.blame_text} (child values do not commute)", file=out)
        for side, m in (("left", ev.blame.left), ("right", ev.blame.right)):
            print(f"{side} child value:", file=out)
            for row in str(m).splitlines():
                print(f"  {row}", file=out)
        print("verdict: UNDEFINED (not satisfied by this valuation)", file=out)
        return EXIT_OK
    _print_value(out, ev.value)
    if semantics == "PBA":
        print("definedness: Defined", file=out)
    qualifier = " (under this valuation)" if ev.verdict == "UNSAT" else ""
    print(f"verdict: {ev.verdict}{qualifier}", file=out)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, out: TextIO) -> int:
    cert = load(args.certificate)
    result = verify(cert)
    tag = f"{cert.semantics} {cert.field.value} d={cert.dimension} claimed {cert.claimed_verdict}"
    if result.ok:
        print(f"PASS: {tag}", file=out)
        return EXIT_OK
    print(f"FAIL: {result.first_failure}", file=out)
    for extra in result.failures[1:]:
        print(f"  also: {extra}", file=out)
    return EXIT_REJECTED


def cmd_decide(args: argparse.Namespace, out: TextIO) -> int:
    phi = parse(args.formula)
    budget = _budget(args)
    if args.semantics == "COM":
        report = decide_com_sat(phi, args.dim, args.field)
    elif args.semantics == "PBA":
        report = search_pba(phi, budget)
    else:
        report = search_std(phi, budget)
    print(f"formula: {report.formula}", file=out)
    print(f"semantics: {report.semantics}  field: {report.field.value}  dimension: {report.dimension}", file=out)
    print(f"verdict: {report.verdict.value}", file=out)
    print(f"method: {report.method}", file=out)
    print(f"trials: {report.trials_used}", file=out)
    print(f"seed: {report.seed if report.seed is not None else '-'}", file=out)
    for note in report.notes:
        print(f"note: {note}", file=out)
    if report.sat:
        print("witness:", file=out)
        for i, x in sorted(report.witness.items()):
            text = str(x) if isinstance(x, Subspace) else "[" + "; ".join(
                ", ".join(r) for r in Entry.of_matrix(x).rows) + "]"
            print(f"  p{i}: {text}", file=out)
        if args.out:
            cert = certificate_for(report.formula, report.semantics, report.dimension, report.witness, report.field)
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(dumps(cert))
            print(f"certificate: {args.out}", file=out)
    return EXIT_OK


def _explore_formulas(args: argparse.Namespace):
    if args.formula:
        return [parse(t) for t in args.formula]
    if args.atoms < 1 or args.connectives < 0:
        raise UsageError("bounds must satisfy atoms >= 1 and connectives >= 0")
    total = count_formulas(args.atoms, args.connectives, commutative=args.commutative)
    if total > args.max_formulas:
        raise UsageError(
            f"{total} formulas for atoms={args.atoms} connectives={args.connectives}"
            f"{' (commutative)' if args.commutative else ''} exceed --max-formulas {args.max_formulas}; "
            "lower the bounds, add --commutative, or pass explicit --formula arguments")
    return enumerate_formulas(args.atoms, args.connectives, commutative=args.commutative)


def cmd_explore(args: argparse.Namespace, out: TextIO) -> int:
    formulas = _explore_formulas(args)
    budget = _budget(args)
    summary = HuntSummary()
    sink = open(args.out, "w", encoding="utf-8") if args.out else nullcontext(out)
    with sink as rows_out:
        for row in explore(formulas, args.dim, budget, summary):
            if args.hunt and row.com.verdict is not Verdict.UNSAT:
                continue
            print(row.to_json_line(), file=rows_out)
    print(f"# formulas classified: {summary.formulas} (d={args.dim}, seed={args.seed}, "
          f"max_trials={args.max_trials})", file=out)
    print(f"# COM-unsat formulas: {summary.com_unsat}", file=out)
    print("# verdict triples (COM / PBA / STD):", file=out)
    for triple, n in sorted(summary.triples.items()):
        print(f"#   {' / '.join(triple)}: {n}", file=out)
    for f in summary.candidates:
        print(f"# OPEN-PROBLEM CANDIDATE: {f}", file=out)
    print(f"# {summary.conclusion()}", file=out)
    return EXIT_OK


def cmd_reproduce(args: argparse.Namespace, out: TextIO) -> int:
    results = reproduce(args.dims, trials=args.trials, pairs=args.pairs, chain_valuations=args.chain_valuations,
                        chain_atoms=args.chain_atoms, chain_connectives=args.chain_connectives, seed=args.seed,
                        progress=lambda r: (print(r.line(), file=out), out.flush()))
    failed = [r for r in results if r.status == FAIL]
    if failed:
        print(f"{len(failed)} check(s) FAILED", file=out)
        return EXIT_REJECTED
    print(f"all {len(results)} checks passed or were skipped", file=out)
    return EXIT_OK


# --- argument parsing ---------------------------------------------------------------


def _search_flags(p: argparse.ArgumentParser, dim_default: int | None = 2) -> None:
    p.add_argument("--dim", type=_positive, default=dim_default, help="ambient dimension d")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"RNG seed (default {DEFAULT_SEED})")
    p.add_argument("--max-trials", type=_positive, default=2000)
    p.add_argument("--denom-bound", type=_positive, default=16, help="denominator bound for rational reconstruction")
    p.add_argument("--field", type=_field, default=Field.RAT, help="rat or gauss")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qlsat", description="Quantum-logic satisfiability under STD, COM and PBA.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a formula under a valuation file")
    p.add_argument("formula", help="formula text, or '-' for the formula stored in the file")
    p.add_argument("valuation", help="certificate or valuation file")
    p.add_argument("--semantics", type=str.upper, choices=["STD", "COM", "PBA"])
    p.add_argument("--dim", type=_positive)
    p.add_argument("--field", type=_field)
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("verify", help="re-verify a certificate exactly")
    p.add_argument("certificate")
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("decide", help="decide (COM) or search (STD, PBA) satisfiability")
    p.add_argument("formula")
    p.add_argument("--semantics", type=str.upper, choices=["STD", "COM", "PBA"], default="STD")
    _search_flags(p)
    p.add_argument("--out", help="write a certificate here when a witness is found")
    p.set_defaults(run=cmd_decide)

    p = sub.add_parser("explore", help="classify small formulas under all three semantics")
    p.add_argument("--atoms", type=int, default=2)
    p.add_argument("--connectives", type=int, default=2)
    p.add_argument("--formula", action="append", help="classify this formula instead of enumerating (repeatable)")
    p.add_argument("--commutative", action="store_true", help="one formula per class modulo swapping & and | operands")
    p.add_argument("--hunt", action="store_true", help="emit only COM-unsat rows")
    p.add_argument("--max-formulas", type=_positive, default=MAX_FORMULAS)
    _search_flags(p)
    p.add_argument("--out", help="write rows here instead of standard output")
    p.set_defaults(run=cmd_explore)

    p = sub.add_parser("reproduce", help="run the structural checks per dimension")
    p.add_argument("--dims", type=_dims, default=[1, 2, 3, 4])
    p.add_argument("--trials", type=_positive, default=200, help="random valuations per SEP-1 check")
    p.add_argument("--pairs", type=_positive, default=300, help="commuting pairs for the range identities")
    p.add_argument("--chain-valuations", type=int, default=3)
    p.add_argument("--chain-atoms", type=_positive, default=3)
    p.add_argument("--chain-connectives", type=int, default=3)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(run=cmd_reproduce)
    return parser


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.run(args, out)
    except (ParseError, CertificateFormatError, ProjectorError, NotAdmissibleError, UsageError,
            json.JSONDecodeError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (DimensionMismatchError, FieldMismatchError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_MISMATCH
    except MissingAtomError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_MISSING_ATOM
    except InternalSoundnessError as e:
        print(f"internal soundness failure: {e}", file=sys.stderr)
        return EXIT_REJECTED


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
