"""Command-line entry point: ``sfcfa analyze | eval | translate | check-coherence``.

Exit status is 0 on success, 1 for usage or parse errors and 2 when a
checked property fails.
"""
from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional, Sequence

from .cfa_sf import FAMILIES_SF, analyze_sf, models_sf
from .cfa_sk import FAMILIES_SK, analyze_sk, models_sk
from .document import SolutionDocument
from .harness import check_coherence
from .lam import (
    analyze_lambda,
    assign_lambda_labels,
    lam_models,
    lambda_of,
    lambda_text,
    parse_lambda,
    unlambda_of,
)
from .reduction import evaluate
from .terms import Calculus, assign_labels, parse, strip_labels, to_text
from .translate import sk_to_sf

EXIT_OK, EXIT_USAGE, EXIT_PROPERTY = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _source(arg: str) -> str:
    return sys.stdin.read() if arg == "-" else arg


def cmd_analyze(source: str, calculus: str, fmt: str = "text") -> tuple[str, bool]:
    """Least solution rendered as text or JSON, and whether it passes the checker."""
    if calculus == "lambda":
        e = assign_lambda_labels(parse_lambda(source))[0]
        sol = analyze_lambda(e)
        term = lambda_text(e)
        ok = lam_models(sol.gamma, e)
    else:
        t = assign_labels(parse(source, calculus))[0]
        if calculus == "sk":
            sol, ok_fn = analyze_sk(t), models_sk
        else:
            sol, ok_fn = analyze_sf(t), models_sf
        term = to_text(t)
        ok = ok_fn(sol.gamma, sol.phi, t)
    doc = SolutionDocument.from_solution(term, sol, calculus)
    return (doc.to_json() if fmt == "json" else doc.render_text()), ok


def cmd_eval(source: str, calculus: str, fuel: int = 10_000, trace: bool = False,
             labels: bool = False) -> str:
    t = assign_labels(parse(source, calculus))[0]
    tr = evaluate(t, calculus, fuel)
    lines = []
    if trace and tr.steps:
        lines.append(tr.render(with_labels=labels))
    lines.append(to_text(tr.result, with_labels=labels))
    lines.append(f"steps: {tr.fuel_used} ({tr.outcome})")
    return "\n".join(lines)


def cmd_translate(source: str, direction: str) -> str:
    if direction == "sk-to-sf":
        t = assign_labels(parse(source, Calculus.SK))[0]
        out, mapping = sk_to_sf(t)
        lines = [to_text(out, with_labels=False), to_text(out)]
        for n, site in sorted(mapping.items()):
            lines.append(f"K^{n} -> F^{site.left_f} @^{site.app} F^{site.right_f}")
        return "\n".join(lines)
    if direction == "lambda-to-sk":
        return to_text(unlambda_of(parse_lambda(source)), with_labels=False)
    if direction == "sk-to-lambda":
        t = strip_labels(parse(source, Calculus.SK))
        return lambda_text(lambda_of(t), with_labels=False)
    raise ValueError(f"unknown direction {direction!r}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sfcfa", description="0CFA for lambda, SK and SF calculi.")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="least solution of the analysis")
    a.add_argument("source", help="term text, or - for stdin")
    a.add_argument("--calculus", choices=["lambda", "sk", "sf"], default="sk")
    a.add_argument("--format", choices=["text", "json"], default="text")

    e = sub.add_parser("eval", help="reduce to normal form")
    e.add_argument("source")
    e.add_argument("--calculus", choices=["sk", "sf"], default="sk")
    e.add_argument("--fuel", type=int, default=10_000)
    e.add_argument("--trace", action="store_true", help="list every step")
    e.add_argument("--labels", action="store_true", help="print labels")

    t = sub.add_parser("translate", help="translate between calculi")
    t.add_argument("source")
    t.add_argument("--direction", required=True,
                   choices=["sk-to-sf", "lambda-to-sk", "sk-to-lambda"])

    c = sub.add_parser("check-coherence", help="randomised coherence check")
    c.add_argument("--calculus", choices=["sk", "sf"], default="sk")
    c.add_argument("--trials", type=int, default=500)
    c.add_argument("--max-size", type=int, default=12)
    c.add_argument("--depth", type=int, default=5)
    c.add_argument("--seed", type=int, default=42)
    c.add_argument("--drop", action="append", default=[], metavar="FAMILY",
                   choices=sorted(set(FAMILIES_SK) | set(FAMILIES_SF)),
                   help="solve without this clause family (mutation testing)")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        if args.command == "analyze":
            text, ok = cmd_analyze(_source(args.source), args.calculus, args.format)
            print(text)
            return EXIT_OK if ok else EXIT_PROPERTY
        if args.command == "eval":
            if args.fuel < 0:
                parser.error("--fuel must be non-negative")
            print(cmd_eval(_source(args.source), args.calculus, args.fuel, args.trace,
                           args.labels))
            return EXIT_OK
        if args.command == "translate":
            print(cmd_translate(_source(args.source), args.direction))
            return EXIT_OK
        for name in ("trials", "max_size", "depth"):
            if getattr(args, name) < 1:
                parser.error(f"--{name.replace('_', '-')} must be at least 1")
        families = FAMILIES_SK if args.calculus == "sk" else FAMILIES_SF
        unknown = [d for d in args.drop if d not in families]
        if unknown:
            parser.error(f"{', '.join(unknown)} not a {args.calculus} clause family")
        report = check_coherence(args.calculus, args.trials, args.max_size, args.depth,
                                 args.seed, drop=args.drop)
        print(report.render())
        return EXIT_OK if report.ok else EXIT_PROPERTY
    except ValueError as exc:  # parse, wrong-calculus and translation errors
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
