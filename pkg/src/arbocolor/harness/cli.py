"""Command line: ``arbocolor {gen,replay,static,verify}``.

Exit codes: 0 success, 1 violation, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import asdict
from fractions import Fraction
from typing import Optional, Sequence

from ..errors import InternalError, InvalidArgument, TraceParseError
from ..metrics import rows_to_csv, summarize
from .replay import parse_coloring, parse_graph, replay, run_static, static_report
from .trace import KINDS, gen_trace, load_trace, save_trace

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a decimal: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="arbocolor", description="Dynamic edge coloring by arboricity: traces and checks.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a trace")
    g.add_argument("kind", choices=KINDS)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--T", type=int, required=True, help="number of events")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--epsilon", type=_fraction, default=Fraction(1, 2))
    g.add_argument("--mode", choices=("warmup", "full"), default="full")
    g.add_argument("--alpha", type=int, help="alpha bound written to the header (warmup)")
    g.add_argument("--k", type=int, help="forest-union: number of forests")
    g.add_argument("--p", type=float, help="erdos-renyi: target edge density")
    g.add_argument("--w", type=int, help="sliding-window: live edges kept")
    g.add_argument("--clique", type=int, help="clique-then-drain: clique size")
    g.add_argument("--p-delete", type=float, help="forest-union/star-heavy: deletion probability")
    g.add_argument("--p-star", type=float, help="star-heavy: chance an insertion is a star edge")
    g.add_argument("--out", help="trace file (default stdout)")

    r = sub.add_parser("replay", help="replay a trace with verification")
    r.add_argument("trace")
    r.add_argument("--verify-every", type=int)
    r.add_argument("--exact-alpha", action="store_true", help="use the exact arboricity oracle when n <= 14")
    r.add_argument("--mode", choices=("warmup", "full"))
    r.add_argument("--epsilon", type=_fraction)
    r.add_argument("--alpha", type=int)
    r.add_argument("--deep", action="store_true", help="also audit every cached structure")
    r.add_argument("--no-timing", action="store_true", help="omit wall_nanos from the CSV")
    r.add_argument("--out", help="metrics CSV (default: none)")

    s = sub.add_parser("static", help="color a graph file with the static greedy")
    s.add_argument("graph")
    s.add_argument("--out", help="coloring file")

    v = sub.add_parser("verify", help="check a coloring file against a graph file")
    v.add_argument("graph")
    v.add_argument("coloring")
    return p


def _cmd_gen(args) -> int:
    knobs = {
        name: getattr(args, attr)
        for name, attr in (("k", "k"), ("p", "p"), ("w", "w"), ("clique", "clique"), ("p_delete", "p_delete"), ("p_star", "p_star"))
        if getattr(args, attr) is not None
    }
    trace = gen_trace(args.kind, args.n, args.T, seed=args.seed, epsilon=args.epsilon, mode=args.mode, alpha=args.alpha, **knobs)
    if args.out:
        save_trace(trace, args.out)
    else:
        sys.stdout.write(trace.to_text())
    return EXIT_OK


def _cmd_replay(args) -> int:
    trace = load_trace(args.trace)
    try:
        res = replay(
            trace,
            verify_every=args.verify_every,
            mode=args.mode,
            epsilon=args.epsilon,
            alpha=args.alpha,
            exact_alpha=args.exact_alpha,
            deep=args.deep,
        )
    except InternalError as exc:
        print(f"internal invariant broken: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(rows_to_csv(res.rows, timing=not args.no_timing))
    if res.rows:
        for key, value in asdict(summarize(res.rows)).items():
            print(f"{key}={value}")
    else:
        print("updates=0")
    print(f"verified_steps={res.verified_steps}")
    if res.violations:
        print(f"FAIL at step {res.failed_step}: {len(res.violations)} violation(s)", file=sys.stderr)
        for viol in res.violations:
            print(f"  {viol}", file=sys.stderr)
        return EXIT_VIOLATION
    print("status=ok")
    return EXIT_OK


def _report(report) -> int:
    for line in report.lines():
        print(line)
    return EXIT_OK if report.ok else EXIT_VIOLATION


def _cmd_static(args) -> int:
    return _report(run_static(args.graph, args.out))


def _cmd_verify(args) -> int:
    with open(args.graph, encoding="utf-8") as fh:
        g = parse_graph(fh.read())
    with open(args.coloring, encoding="utf-8") as fh:
        chi = parse_coloring(fh.read())
    return _report(static_report(g, chi))


COMMANDS = {"gen": _cmd_gen, "replay": _cmd_replay, "static": _cmd_static, "verify": _cmd_verify}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (TraceParseError, InvalidArgument, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
