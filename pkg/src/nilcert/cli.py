"""Command line front end.

Exit codes: 0 ran to completion, 2 malformed input, 3 internal inconsistency
(including a criterion contradicted by the surjectivity oracle).
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .arith import PrimeSet
from .catalog import BUILTINS, InputError, load_document
from .certifier import InconsistencyError
from .report import full_report, render_text

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INCONSISTENT = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _parse_pi(text: str) -> PrimeSet:
    items = [s.strip() for s in text.split(",") if s.strip()]
    try:
        return PrimeSet(int(s) for s in items)
    except ValueError as exc:
        raise InputError(f"--pi: {exc}") from None


def _add_run_flags(p: argparse.ArgumentParser):
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--pi", default=None, help='comma separated primes overriding the document, e.g. "2,3"')
    p.add_argument("--no-oracle", action="store_true", help="skip the surjectivity oracle")
    p.add_argument("--seed", type=int, default=0, help="seed for the randomised cross-checks")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nilcert", description="Certify endomorphisms of pattern groups as automorphisms.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    check = sub.add_parser("check", help="run every check on a JSON input document")
    check.add_argument("file")
    _add_run_flags(check)
    ex = sub.add_parser("example", help="list or run the built-in examples")
    ex_sub = ex.add_subparsers(dest="action", required=True, parser_class=_Parser)
    ex_sub.add_parser("list")
    run = ex_sub.add_parser("run")
    run.add_argument("name")
    _add_run_flags(run)
    return parser


def _run_document(data, args, out) -> int:
    try:
        doc = load_document(data)
        pi = doc.pi if args.pi is None else _parse_pi(args.pi)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        report = full_report(doc.endomorphism, pi, name=doc.name, run_oracle=not args.no_oracle,
                             seed=args.seed)
    except InconsistencyError as exc:
        print(f"SOUNDNESS-BUG: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    if args.format == "json":
        out.write(json.dumps(report.to_dict(), indent=2) + "\n")
    else:
        out.write(render_text(report))
    if report.soundness_bug:
        print("SOUNDNESS-BUG: a criterion concluded automorphism but the oracle found a proper injection",
              file=sys.stderr)
        return EXIT_INCONSISTENT
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    if args.command == "check":
        try:
            with open(args.file, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            print(f"error: cannot read {args.file}: {exc.strerror}", file=sys.stderr)
            return EXIT_INPUT
        except json.JSONDecodeError as exc:
            print(f"error: {args.file} is not valid JSON: {exc}", file=sys.stderr)
            return EXIT_INPUT
        return _run_document(data, args, out)
    if args.action == "list":
        for name in BUILTINS:
            out.write(name + "\n")
        return EXIT_OK
    if args.name not in BUILTINS:
        print(f"error: unknown example {args.name!r}; available: {', '.join(BUILTINS)}", file=sys.stderr)
        return EXIT_INPUT
    return _run_document(BUILTINS[args.name], args, out)


if __name__ == "__main__":
    sys.exit(main())
