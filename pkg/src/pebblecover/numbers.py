"""Cover pebbling number, pebbling number, cover ratio and conjecture checks.

Brute force relies on monotonicity: adding a pebble never destroys
coverability (or reachability), so "every configuration of size N works"
is inherited by every larger size and only one level needs checking per
candidate value.
"""

from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .decider import SearchBudget, Verdict, can_reach, is_coverable
from .errors import InvalidParameter, InvariantViolation, SpecSyntaxError
from .graphs import (
    CANONICAL_MAX_DIMENSION,
    Graph,
    canonical_mask,
    parse_graph_spec,
)
from .pebbling import simple_bound, simple_configuration

DEFAULT_MAX_CONFIGURATIONS = 10_000_000
_CHUNK = 4096


@dataclass
class InvariantReport:
    graph: str
    invariant: str
    value: int | Fraction | None
    method: str
    witness: dict | None = None
    bounds: tuple[int, int | None] | None = None
    conjectured: bool = False
    stats: dict = field(default_factory=dict)
    elapsed: float = 0.0

    def to_json(self) -> dict:
        value = self.value
        if isinstance(value, Fraction):
            value = {"numerator": value.numerator, "denominator": value.denominator,
                     "float": float(value)}
        return {
            "graph": self.graph,
            "invariant": self.invariant,
            "value": value,
            "method": self.method,
            "witness": self.witness,
            "bounds": list(self.bounds) if self.bounds else None,
            "conjectured": self.conjectured,
            "stats": self.stats,
            "elapsed": round(self.elapsed, 6),
        }


@dataclass
class ConjectureReport:
    question: str
    graphs: list[str]
    outcome: str
    certificate: dict = field(default_factory=dict)
    informational: list[str] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def holds(self) -> bool:
        return self.outcome == "holds"

    def to_json(self) -> dict:
        return {
            "question": self.question,
            "graphs": self.graphs,
            "outcome": self.outcome,
            "certificate": self.certificate,
            "informational": self.informational,
            "elapsed": round(self.elapsed, 6),
        }


# --------------------------------------------------------------------------
# Enumeration


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Weak compositions of ``total`` into ``parts`` parts, colex order."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for last in range(total + 1):
        for head in compositions(total - last, parts - 1):
            yield head + (last,)


def count_compositions(total: int, parts: int) -> int:
    return math.comb(total + parts - 1, parts - 1)


def composition_array(total: int, parts: int) -> np.ndarray:
    """All weak compositions as rows of an array, same order as :func:`compositions`."""
    dtype = np.uint8 if total < 256 else np.int32
    # rows[t] holds the compositions of t into the parts built so far
    rows = [np.array([[t]], dtype=dtype) for t in range(total + 1)]
    for _ in range(parts - 1):
        nxt = []
        for t in range(total + 1):
            blocks = [
                np.hstack([rows[t - last], np.full((len(rows[t - last]), 1), last, dtype=dtype)])
                for last in range(t + 1)
            ]
            nxt.append(np.vstack(blocks))
        rows = nxt
    return rows[total]


def _cube_symmetric(g: Graph) -> bool:
    return g.cube_dimension is not None and g.cube_dimension <= min(3, CANONICAL_MAX_DIMENSION)


def level_configurations(g: Graph, total: int, symmetry: bool = True) -> list[tuple[int, ...]]:
    """Configurations of the given size to test, one per cube orbit when possible."""
    n = g.vertex_count
    if symmetry and _cube_symmetric(g) and n > 1:
        arr = composition_array(total, n)
        keep = []
        for start in range(0, len(arr), 500_000):
            block = arr[start:start + 500_000]
            keep.append(block[canonical_mask(g.cube_dimension, block)])
        return [tuple(int(x) for x in row) for row in np.vstack(keep)]
    return list(compositions(total, n))


# --------------------------------------------------------------------------
# Sweeps


def _check_chunk(args):
    g, configs, k, targets, budget = args
    nodes = greedy = 0
    for i, c in enumerate(configs):
        if k is None:
            r = is_coverable(g, c, budget)
            nodes += r.stats.nodes
            greedy += r.stats.greedy
            if not r.found:
                return i, None, r.verdict, nodes, greedy
        else:
            for t in targets or range(g.vertex_count):
                r = can_reach(g, c, t, k, budget)
                nodes += r.stats.nodes
                if not r.found:
                    return i, t, r.verdict, nodes, greedy
    return None, None, None, nodes, greedy


def _sweep(g, configs, k, budget, threads, targets=None):
    """First failing configuration in order, as ``(index, target, verdict)``."""
    chunks = [configs[i:i + _CHUNK] for i in range(0, len(configs), _CHUNK)]
    jobs = [(g, ch, k, targets, budget) for ch in chunks]
    stats = {"configurations": len(configs), "search_nodes": 0, "greedy_hits": 0}
    if threads <= 1 or len(chunks) <= 1:
        results = map(_check_chunk, jobs)
    else:
        pool = ProcessPoolExecutor(max_workers=threads)
        results = pool.map(_check_chunk, jobs)
    try:
        for ci, (i, t, verdict, nodes, greedy) in enumerate(results):
            stats["search_nodes"] += nodes
            stats["greedy_hits"] += greedy
            if i is not None:
                return (ci * _CHUNK + i, t, verdict), stats
        return None, stats
    finally:
        if threads > 1 and len(chunks) > 1:
            pool.shutdown(cancel_futures=True)


# --------------------------------------------------------------------------
# Closed forms


def _family(g_or_spec) -> tuple[str, int] | None:
    label = g_or_spec if isinstance(g_or_spec, str) else g_or_spec.label
    if not isinstance(g_or_spec, str) and g_or_spec.cube_dimension is not None:
        return "cube", g_or_spec.cube_dimension
    kind, _, arg = label.partition(":")
    if kind in ("cube", "path", "complete") and arg.isdigit():
        return kind, int(arg)
    return None


def pi_formula(g_or_spec) -> int | None:
    fam = _family(g_or_spec)
    if fam is None:
        return None
    kind, p = fam
    return {"cube": 2**p, "path": 2 ** (p - 1), "complete": p}[kind]


def gamma_formula(g_or_spec) -> int | None:
    fam = _family(g_or_spec)
    if fam is None or fam[0] != "cube":
        return None
    return 3 ** fam[1]


def closed_forms(spec: str, invariant: str = "gamma") -> InvariantReport:
    """Formula values: pi for cubes, paths and complete graphs; gamma for cubes.

    Other gamma requests come back bound-only, carrying the simple-configuration
    value as a conjecture.
    """
    fam = _family(spec)
    if fam is None:
        raise SpecSyntaxError(f"no closed form for {spec!r}")
    if invariant == "pi":
        return InvariantReport(spec, "pi", pi_formula(spec), "formula")
    if invariant != "gamma":
        raise InvalidParameter(f"unknown invariant {invariant!r}")
    value = gamma_formula(spec)
    if value is not None:
        return InvariantReport(spec, "gamma", value, "formula")
    g = parse_graph_spec(spec)
    lo, _ = simple_bound(g)
    return InvariantReport(
        spec, "gamma", lo, "bound-only",
        bounds=(lo, g.vertex_count * pi_formula(spec)), conjectured=True,
    )


# --------------------------------------------------------------------------
# Brute force


def _upper_bound(g: Graph) -> int | None:
    p = pi_formula(g)
    return None if p is None else g.vertex_count * p


def gamma_bruteforce(
    g: Graph,
    budget: SearchBudget | None = None,
    *,
    threads: int = 1,
    symmetry: bool = True,
    max_configurations: int = DEFAULT_MAX_CONFIGURATIONS,
) -> InvariantReport:
    """Least N such that every size-N configuration is coverable.

    The search starts at the simple-configuration bound, whose size-minus-one
    simple configuration is refuted and attached as the witness.
    """
    t0 = time.perf_counter()
    budget = budget or SearchBudget()
    lo, arg = simple_bound(g)
    n = g.vertex_count
    witness_cfg = simple_configuration(n, arg, lo - 1)
    refute = is_coverable(g, witness_cfg, budget)
    if refute.verdict is not Verdict.NOT_COVERABLE:
        raise InvariantViolation("simple configuration below the simple bound was not refuted")
    witness = {"configuration": list(witness_cfg), "simple": True}
    stats = {"levels": [], "symmetry": symmetry and _cube_symmetric(g)}
    N = lo
    while True:
        if count_compositions(N, n) > max_configurations:
            return InvariantReport(
                g.label, "gamma", None, "bound-only", witness, (N, _upper_bound(g)),
                stats=stats, elapsed=time.perf_counter() - t0,
            )
        configs = level_configurations(g, N, symmetry)
        failure, level_stats = _sweep(g, configs, None, budget, threads)
        stats["levels"].append({"size": N, **level_stats})
        if failure is None:
            return InvariantReport(
                g.label, "gamma", N, "bruteforce", witness, stats=stats,
                elapsed=time.perf_counter() - t0,
            )
        i, _, verdict = failure
        if verdict is Verdict.BUDGET_EXCEEDED:
            return InvariantReport(
                g.label, "gamma", None, "bound-only", witness, (N, _upper_bound(g)),
                stats=stats, elapsed=time.perf_counter() - t0,
            )
        witness = {"configuration": list(configs[i]), "simple": sum(1 for x in configs[i] if x) == 1}
        N += 1


def _pi_lower_witness(g: Graph) -> tuple[int, tuple[int, ...], int]:
    """``(bound, configuration, target)`` with the configuration one pebble short."""
    n = g.vertex_count
    diam = g.diameter
    if 2**diam >= n:
        u, v = divmod(int(np.argmax(g.distances)), n)
        return 2**diam, simple_configuration(n, u, 2**diam - 1), v
    return n, tuple(0 if x == 0 else 1 for x in range(n)), 0


def pi_bruteforce(
    g: Graph,
    budget: SearchBudget | None = None,
    *,
    threads: int = 1,
    max_configurations: int = DEFAULT_MAX_CONFIGURATIONS,
) -> InvariantReport:
    """Least N such that every size-N configuration reaches every target."""
    t0 = time.perf_counter()
    budget = budget or SearchBudget()
    n = g.vertex_count
    N, cfg, target = _pi_lower_witness(g)
    if n > 1 and can_reach(g, cfg, target, 1, budget).found:
        raise InvariantViolation("pebbling lower-bound witness reached its target")
    witness = {"configuration": list(cfg), "target": target}
    stats = {"levels": []}
    while True:
        if count_compositions(N, n) * n > max_configurations:
            return InvariantReport(
                g.label, "pi", None, "bound-only", witness, (N, None),
                stats=stats, elapsed=time.perf_counter() - t0,
            )
        configs = list(compositions(N, n))
        failure, level_stats = _sweep(g, configs, 1, budget, threads)
        stats["levels"].append({"size": N, **level_stats})
        if failure is None:
            return InvariantReport(
                g.label, "pi", N, "bruteforce", witness, stats=stats,
                elapsed=time.perf_counter() - t0,
            )
        i, t, verdict = failure
        if verdict is Verdict.BUDGET_EXCEEDED:
            return InvariantReport(
                g.label, "pi", None, "bound-only", witness, (N, None),
                stats=stats, elapsed=time.perf_counter() - t0,
            )
        witness = {"configuration": list(configs[i]), "target": t}
        N += 1


def gamma_value(g: Graph, budget: SearchBudget | None = None, *, threads: int = 1) -> InvariantReport:
    """gamma by formula when one is known, otherwise by brute force."""
    value = gamma_formula(g)
    if value is not None:
        return InvariantReport(g.label, "gamma", value, "formula")
    return gamma_bruteforce(g, budget, threads=threads)


def pi_value(g: Graph, budget: SearchBudget | None = None, *, threads: int = 1) -> InvariantReport:
    value = pi_formula(g)
    if value is not None:
        return InvariantReport(g.label, "pi", value, "formula")
    return pi_bruteforce(g, budget, threads=threads)


@dataclass
class RatioReport:
    graph: str
    value: Fraction | None
    gamma: InvariantReport
    pi: InvariantReport
    cube_check: float | None = None

    def to_json(self) -> dict:
        out = {
            "graph": self.graph,
            "invariant": "rho",
            "value": None,
            "gamma": self.gamma.to_json(),
            "pi": self.pi.to_json(),
            "cube_check": self.cube_check,
        }
        if self.value is not None:
            out["value"] = {"numerator": self.value.numerator,
                            "denominator": self.value.denominator,
                            "float": float(self.value)}
        return out


def cover_ratio(g: Graph | str, budget: SearchBudget | None = None, *, threads: int = 1) -> RatioReport:
    """gamma / pi as an exact fraction; for cubes also ``n ** (lg 3 - 1)``."""
    if isinstance(g, str):
        g = parse_graph_spec(g)
    gam = gamma_value(g, budget, threads=threads)
    pi = pi_value(g, budget, threads=threads)
    value = None
    if gam.value is not None and pi.value is not None:
        value = Fraction(gam.value, pi.value)
    check = None
    if g.cube_dimension is not None:
        check = float(g.vertex_count) ** (math.log2(3) - 1)
    return RatioReport(g.label, value, gam, pi, check)


# --------------------------------------------------------------------------
# Conjectures


def check_simple_conjecture(
    g: Graph,
    budget: SearchBudget | None = None,
    *,
    gamma_report: InvariantReport | None = None,
    threads: int = 1,
) -> ConjectureReport:
    """Is there a simple non-coverable configuration of size gamma - 1?"""
    t0 = time.perf_counter()
    budget = budget or SearchBudget()
    rep = gamma_report or gamma_bruteforce(g, budget, threads=threads)
    lo, arg = simple_bound(g)
    cert = {"gamma": rep.value, "gamma_method": rep.method, "simple_bound": lo, "argmax": arg}
    if rep.value is None:
        return ConjectureReport("Q1", [g.label], "budget-exceeded", cert,
                                elapsed=time.perf_counter() - t0)
    extremal = simple_configuration(g.vertex_count, arg, rep.value - 1)
    verdict = is_coverable(g, extremal, budget).verdict
    cert["simple_witness"] = list(extremal)
    cert["simple_witness_verdict"] = verdict.value
    info = []
    if rep.witness and not rep.witness.get("simple", True):
        info.append(f"non-simple non-coverable configuration of size gamma-1: {rep.witness['configuration']}")
    if verdict is Verdict.BUDGET_EXCEEDED:
        outcome = "budget-exceeded"
    elif rep.value == lo and verdict is Verdict.NOT_COVERABLE:
        outcome = "holds"
    else:
        outcome = "counterexample"
    return ConjectureReport("Q1", [g.label], outcome, cert, info, time.perf_counter() - t0)


def check_product_conjecture(
    g: Graph, h: Graph, budget: SearchBudget | None = None, *, threads: int = 1
) -> ConjectureReport:
    """Does gamma(G □ H) <= gamma(G) * gamma(H)?"""
    from .graphs import cartesian_product

    t0 = time.perf_counter()
    prod = cartesian_product(g, h)
    reps = [gamma_value(x, budget, threads=threads) for x in (g, h, prod)]
    cert = {
        name: {"value": r.value, "method": r.method}
        for name, r in zip(("G", "H", "product"), reps)
    }
    if any(r.value is None for r in reps):
        outcome = "budget-exceeded"
    elif reps[2].value <= reps[0].value * reps[1].value:
        outcome = "holds"
    else:
        outcome = "counterexample"
    return ConjectureReport("Q4", [g.label, h.label], outcome, cert,
                            elapsed=time.perf_counter() - t0)


def two_pebbling_configurations(n: int, pi: int) -> Iterator[tuple[int, ...]]:
    """Minimal configurations with ``|C| = 2*pi - |supp C| + 1``.

    Every configuration above the threshold dominates one of these with the
    same support, provided ``n <= pi``.
    """
    for s in range(1, n + 1):
        total = 2 * pi - s + 1
        if total < s:
            continue
        for supp in itertools.combinations(range(n), s):
            for extra in compositions(total - s, s):
                c = [0] * n
                for v, e in zip(supp, extra):
                    c[v] = 1 + e
                yield tuple(c)


def check_two_pebbling(
    g: Graph,
    budget: SearchBudget | None = None,
    *,
    pi_report: InvariantReport | None = None,
    threads: int = 1,
) -> ConjectureReport:
    """Can every configuration with ``|C| >= 2*pi - |supp C| + 1`` put two
    pebbles on any target?"""
    t0 = time.perf_counter()
    budget = budget or SearchBudget()
    rep = pi_report or pi_bruteforce(g, budget, threads=threads)
    cert = {"pi": rep.value, "pi_method": rep.method}
    if rep.value is None:
        return ConjectureReport("two-pebbling", [g.label], "budget-exceeded", cert,
                                elapsed=time.perf_counter() - t0)
    if g.vertex_count > rep.value:
        raise InvariantViolation("pi below the vertex count")
    configs = list(two_pebbling_configurations(g.vertex_count, rep.value))
    failure, stats = _sweep(g, configs, 2, budget, threads)
    cert["configurations"] = len(configs)
    cert["search_nodes"] = stats["search_nodes"]
    if failure is None:
        outcome = "holds"
    else:
        i, t, verdict = failure
        if verdict is Verdict.BUDGET_EXCEEDED:
            outcome = "budget-exceeded"
        else:
            outcome = "counterexample"
            cert["counterexample"] = {"configuration": list(configs[i]), "target": t}
    return ConjectureReport("two-pebbling", [g.label], outcome, cert,
                            elapsed=time.perf_counter() - t0)


def sanity_bounds(g: Graph, gamma: int, pi: int) -> dict:
    """Check ``simple_bound <= gamma <= n*pi``, ``n <= pi`` and ``2**diam <= pi``."""
    n = g.vertex_count
    lo, _ = simple_bound(g)
    checks = {
        "simple_bound<=gamma": lo <= gamma,
        "gamma<=n*pi": gamma <= n * pi,
        "n<=pi": n <= pi,
        "2^diam<=pi": 2**g.diameter <= pi,
    }
    report = {"graph": g.label, "gamma": gamma, "pi": pi, "simple_bound": lo,
              "n*pi": n * pi, "checks": checks}
    failed = [k for k, ok in checks.items() if not ok]
    if failed:
        raise InvariantViolation(f"{g.label}: violated {', '.join(failed)}")
    return report


def bound_report(g: Graph, budget: SearchBudget | None = None) -> dict:
    lo, arg = simple_bound(g)
    pi = pi_value(g, budget)
    return {
        "graph": g.label,
        "simple_bound": lo,
        "argmax": arg,
        "pi": pi.value,
        "pi_method": pi.method,
        "n*pi": None if pi.value is None else g.vertex_count * pi.value,
    }
