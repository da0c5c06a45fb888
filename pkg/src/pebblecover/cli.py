"""``pebblecover`` command line.

Exit codes: 0 success or "holds", 1 a negative mathematical result
(NotCoverable, counterexample, failed check), 2 search budget exhausted,
3 malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

import numpy as np

from . import numbers
from .decider import SearchBudget, Verdict, is_coverable, simple_refuted_by_weight
from .errors import NotCoverableError, PebblingError
from .graphs import parse_graph_spec
from .pebbling import (
    format_moves,
    is_good,
    moves_to_json,
    parse_configuration,
    simple_configuration,
    verify_cover_sequence,
)
from .strategist import cover_strategy, random_good_configuration

DEFAULT_SEED = 20040101
EXIT_OK, EXIT_NEGATIVE, EXIT_BUDGET, EXIT_INPUT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    p.add_argument("--budget-nodes", type=int, default=2_000_000)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--verify", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="pebblecover", description="Exact cover pebbling toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("coverable", parents=[common], help="decide coverability")
    p.add_argument("graph")
    p.add_argument("config")
    p = sub.add_parser("strategy", parents=[common], help="cover sequence on a hypercube")
    p.add_argument("graph")
    p.add_argument("config")
    for name in ("gamma", "pi", "ratio", "bound"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("graph")
    p = sub.add_parser("verify-cube", parents=[common], help="gamma(Q^D) = 3^D checks")
    p.add_argument("dimension", type=int)
    p = sub.add_parser("check", parents=[common], help="conjecture checks")
    p.add_argument("question", choices=("q1", "q4", "two-pebbling"))
    p.add_argument("graphs", nargs="+")
    return parser


def _emit(report: dict, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
        return
    for key, value in report.items():
        if key == "moves_text":
            out.write(value + ("\n" if value else ""))
        elif isinstance(value, (dict, list)):
            out.write(f"{key}: {json.dumps(value)}\n")
        else:
            out.write(f"{key}: {value}\n")


def _cmd_coverable(args, budget):
    g = parse_graph_spec(args.graph)
    c = parse_configuration(args.config, g.vertex_count)
    res = is_coverable(g, c, budget)
    report = {"graph": g.label, "configuration": list(c), "verdict": res.verdict.value,
              "stats": res.stats.as_dict()}
    if args.verify and res.witness is not None:
        report["witness"] = moves_to_json(res.witness)
        report["verified"] = verify_cover_sequence(g, c, res.witness).is_cover
    code = {Verdict.COVERABLE: EXIT_OK, Verdict.NOT_COVERABLE: EXIT_NEGATIVE,
            Verdict.BUDGET_EXCEEDED: EXIT_BUDGET}[res.verdict]
    return report, code


def _cmd_strategy(args, budget):
    g = parse_graph_spec(args.graph)
    if g.cube_dimension is None:
        raise UsageError("strategy needs a hypercube graph (cube:D)")
    c = parse_configuration(args.config, g.vertex_count)
    trace = cover_strategy(g.cube_dimension, c, budget)
    report = trace.to_json()
    if args.verify:
        report["reverified"] = verify_cover_sequence(g, c, trace.moves).is_cover
    if args.format == "text":
        report = {k: v for k, v in report.items() if k != "moves"}
        report["moves_text"] = format_moves(trace.moves)
    return report, EXIT_OK


def _invariant_code(rep) -> int:
    return EXIT_BUDGET if rep.value is None else EXIT_OK


def _cmd_verify_cube(args, budget):
    d = args.dimension
    g = parse_graph_spec(f"cube:{d}")
    checks = {}
    lo, arg = numbers.simple_bound(g)
    checks["simple_bound == 3^d"] = lo == 3**d
    checks["simple 3^d - 1 refuted by weight"] = simple_refuted_by_weight(g, 0, 3**d - 1)
    checks["simple 3^d is sharp"] = is_good(d, simple_configuration(g.vertex_count, 0, 3**d)).sharp
    ratio = numbers.cover_ratio(g)
    checks["rho == (3/2)^d"] = ratio.value == numbers.Fraction(3**d, 2**d)
    checks["rho matches n^(lg3-1)"] = abs(float(ratio.value) - ratio.cube_check) < 1e-9
    report = {"dimension": d}
    if d <= 3:
        gam = numbers.gamma_bruteforce(g, budget, threads=args.threads)
        checks["gamma bruteforce == 3^d"] = gam.value == 3**d
        report["gamma"] = gam.to_json()
    rng = np.random.default_rng(args.seed)
    fallbacks = 0
    ok = True
    for _ in range(args.samples):
        trace = cover_strategy(d, random_good_configuration(d, rng), budget)
        fallbacks += trace.fallback_count
        ok &= trace.verified
    checks[f"strategy verified on {args.samples} good samples"] = bool(ok)
    checks["no fallbacks"] = fallbacks == 0
    report["checks"] = checks
    report["passed"] = all(checks.values())
    return report, EXIT_OK if report["passed"] else EXIT_NEGATIVE


def _cmd_check(args, budget):
    graphs = [parse_graph_spec(s) for s in args.graphs]
    want = 2 if args.question == "q4" else 1
    if len(graphs) != want:
        raise UsageError(f"check {args.question} takes {want} graph(s)")
    if args.question == "q1":
        rep = numbers.check_simple_conjecture(graphs[0], budget, threads=args.threads)
    elif args.question == "q4":
        rep = numbers.check_product_conjecture(graphs[0], graphs[1], budget, threads=args.threads)
    else:
        rep = numbers.check_two_pebbling(graphs[0], budget, threads=args.threads)
    code = {"holds": EXIT_OK, "counterexample": EXIT_NEGATIVE}.get(rep.outcome, EXIT_BUDGET)
    return rep.to_json(), code


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.budget_nodes <= 0 or args.threads <= 0 or args.samples < 0:
            raise UsageError("--budget-nodes and --threads must be positive")
        budget = SearchBudget(max_nodes=args.budget_nodes)
        cmd = args.command
        if cmd == "coverable":
            report, code = _cmd_coverable(args, budget)
        elif cmd == "strategy":
            report, code = _cmd_strategy(args, budget)
        elif cmd in ("gamma", "pi"):
            g = parse_graph_spec(args.graph)
            fn = numbers.gamma_bruteforce if cmd == "gamma" else numbers.pi_bruteforce
            rep = fn(g, budget, threads=args.threads)
            report, code = rep.to_json(), _invariant_code(rep)
        elif cmd == "ratio":
            rep = numbers.cover_ratio(parse_graph_spec(args.graph), budget, threads=args.threads)
            report, code = rep.to_json(), EXIT_BUDGET if rep.value is None else EXIT_OK
        elif cmd == "bound":
            report, code = numbers.bound_report(parse_graph_spec(args.graph), budget), EXIT_OK
        elif cmd == "verify-cube":
            report, code = _cmd_verify_cube(args, budget)
        else:
            report, code = _cmd_check(args, budget)
    except NotCoverableError as exc:
        err.write(f"pebblecover: {exc}\n")
        return EXIT_NEGATIVE
    except (UsageError, PebblingError, OSError) as exc:
        err.write(f"pebblecover: {exc}\n")
        return EXIT_INPUT
    _emit(report, args.format, out)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
