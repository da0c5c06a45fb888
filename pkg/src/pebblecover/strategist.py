"""Explicit cover sequences for good configurations on hypercubes.

A configuration ``C`` on Q^d is good when ``|C| >= 3**d - |supp C| + 1``.
:func:`cover_strategy` turns the inductive argument that every good
configuration is coverable into a move generator:

1. a cover needs no moves;
2. surplus pebbles beyond the sharp threshold are set aside;
3. a vertex with at least three pebbles next to an empty vertex makes one
   step, keeping the configuration sharp;
4. a closed configuration with a single large vertex is solved by routing
   pebbles from that vertex, peeling off its ones one at a time;
5. dimensions up to 3 are solved by exhaustive search;
6. larger cubes are cut along a coordinate, the deficient half receives
   pebbles across the cut, and both halves are solved recursively.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .decider import SearchBudget, Verdict, is_coverable
from .errors import InternalError, InvalidConfiguration, NotCoverableError
from .graphs import build_hypercube, drop_bit, insert_bit
from .pebbling import (
    BranchTag,
    Configuration,
    PebbleMove,
    good_threshold,
    is_cover,
    is_good,
    is_open,
    moves_to_json,
    verify_cover_sequence,
)

BASE_BUDGET = SearchBudget(max_nodes=2_000_000)


@dataclass
class StrategyTrace:
    dimension: int
    initial: Configuration
    moves: list[PebbleMove] = field(default_factory=list)
    branches: list[dict] = field(default_factory=list)
    fallback_count: int = 0
    verified: bool = False

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "initial": list(self.initial),
            "moves": moves_to_json(self.moves),
            "branches": self.branches,
            "fallback_count": self.fallback_count,
            "verified": self.verified,
        }

    def branch_kinds(self) -> set[str]:
        return {b["kind"] for b in self.branches}


@dataclass
class CutAnalysis:
    coordinate: int
    delta: int
    oriented: bool
    top_config: Configuration
    bottom_config: Configuration

    @property
    def top_bit(self) -> int:
        return 0 if self.oriented else 1


@dataclass
class CutResult:
    cut: CutAnalysis
    transfers: list[PebbleMove]
    top_next: Configuration
    bottom_next: Configuration


@lru_cache(maxsize=None)
def _cube(d: int):
    return build_hypercube(d)


def _sharp_or_raise(d: int, c: Sequence[int]) -> None:
    rep = is_good(d, c)
    if not rep.sharp:
        raise InvalidConfiguration(f"configuration is not sharp on Q^{d} (slack {rep.slack})")


def trim_to_sharp(d: int, c: Sequence[int]) -> tuple[Configuration, Configuration]:
    """Remove surplus pebbles until the configuration is sharp.

    Returns ``(sharp, set_aside)`` with ``sharp + set_aside == c``.
    """
    rep = is_good(d, c)
    if not rep.good:
        raise InvalidConfiguration(f"configuration is not good on Q^{d}")
    cur = list(c)
    slack = rep.slack
    while slack > 0:
        # Every count >= 2 can give up pebbles down to 1 without leaving the support.
        for v, x in enumerate(cur):
            if x >= 2:
                take = min(slack, x - 1)
                cur[v] -= take
                slack -= take
                break
        else:
            raise InternalError("good configuration with slack but no large vertex")
    sharp = tuple(cur)
    return sharp, tuple(a - b for a, b in zip(c, sharp))


def open_step(d: int, c: Sequence[int]) -> tuple[PebbleMove, Configuration] | None:
    """One step from a vertex holding >= 3 pebbles onto an empty neighbor.

    The result is sharp again: one pebble fewer, one more support vertex.
    """
    _sharp_or_raise(d, c)
    for v, x in enumerate(c):
        if x < 3:
            continue
        empty = [v ^ (1 << j) for j in range(d) if c[v ^ (1 << j)] == 0]
        if empty:
            w = min(empty)
            nxt = list(c)
            nxt[v] -= 2
            nxt[w] += 1
            return PebbleMove(v, w, BranchTag.OPEN_STEP), tuple(nxt)
    return None


# --------------------------------------------------------------------------
# Single large vertex


def pebble_ancestry(c: Sequence[int], seq: Sequence[PebbleMove], vertex: int):
    """Indices of the moves that built the last pebble left on ``vertex``.

    Pebbles are tracked individually; a move consumes the two most recently
    arrived pebbles at its source.  Returns ``(move_indices, origins)`` where
    ``origins`` lists the starting vertex of every original pebble consumed.
    """
    stacks: list[list[tuple[frozenset, tuple]]] = [
        [(frozenset(), (v,)) for _ in range(x)] for v, x in enumerate(c)
    ]
    for i, m in enumerate(seq):
        a = stacks[m.source].pop()
        b = stacks[m.source].pop()
        stacks[m.target].append((a[0] | b[0] | {i}, a[1] + b[1]))
    if not stacks[vertex]:
        raise InternalError(f"no pebble ends on vertex {vertex}")
    moves, origins = stacks[vertex][-1]
    return moves, origins


def _shortest_path(u: int, v: int) -> list[int]:
    path = [u]
    diff = u ^ v
    cur = u
    j = 0
    while diff:
        if diff & 1:
            cur ^= 1 << j
            path.append(cur)
        diff >>= 1
        j += 1
    return path


def _single_large_base(d: int, c: Sequence[int], large: int) -> list[PebbleMove]:
    moves = []
    targets = sorted(
        (v for v in range(1 << d) if c[v] == 0),
        key=lambda v: (-bin(v ^ large).count("1"), v),
    )
    for v in targets:
        path = _shortest_path(large, v)
        k = len(path) - 1
        for i in range(k):
            moves.extend(
                [PebbleMove(path[i], path[i + 1], BranchTag.SINGLE_LARGE)] * (1 << (k - 1 - i))
            )
    return moves


def single_large_reduction(d: int, c: Sequence[int]) -> list[PebbleMove]:
    """Cover a sharp closed configuration whose only large vertex is ``L``.

    Ones far from ``L`` are traded for two pebbles on ``L`` until the support
    is exactly the closed neighborhood of ``L``; that case is covered by
    routing ``2**dist`` pebbles from ``L`` to each empty vertex.  Unwinding,
    the moves that delivered the covering pebble to each traded one are cut
    out of the sequence.
    """
    _sharp_or_raise(d, c)
    larges = [v for v, x in enumerate(c) if x >= 2]
    if len(larges) != 1 or is_open(_cube(d), c):
        raise InvalidConfiguration("expected a closed configuration with one large vertex")
    large = larges[0]
    nbhd = {large} | {large ^ (1 << j) for j in range(d)}
    cur = list(c)
    traded = []
    while sum(1 for x in cur if x) > d + 1:
        w = min(v for v, x in enumerate(cur) if x == 1 and v not in nbhd)
        cur[w] = 0
        cur[large] += 2
        traded.append(w)
    seq = _single_large_base(d, cur, large)
    for w in reversed(traded):
        anc, origins = pebble_ancestry(cur, seq, w)
        if origins.count(large) < 2:
            raise InternalError("covering pebble of a traded one did not come from the large vertex")
        seq = [m for i, m in enumerate(seq) if i not in anc]
        cur[w] = 1
        cur[large] -= 2
    return seq


# --------------------------------------------------------------------------
# Cut and transfer


def parity_residual(counts: Sequence[int]) -> tuple[int, ...]:
    """0 on empties, otherwise 1 or 2 matching the parity of the count."""
    return tuple(0 if x == 0 else (1 if x % 2 else 2) for x in counts)


def _half(c: Sequence[int], j: int, b: int) -> Configuration:
    n = len(c) // 2
    return tuple(c[insert_bit(v, j, b)] for v in range(n))


def analyse_cut(d: int, c: Sequence[int], j: int) -> CutAnalysis:
    """Split along coordinate ``j``, orienting the deficient half as bottom."""
    halves = [_half(c, j, 0), _half(c, j, 1)]
    slacks = [
        sum(h) - good_threshold(d - 1, sum(1 for x in h if x)) for h in halves
    ]
    bottom = 1 if slacks[1] < slacks[0] else 0
    delta = max(0, -slacks[bottom])
    return CutAnalysis(j, delta, bottom == 1, halves[1 - bottom], halves[bottom])


def cut_and_transfer(d: int, c: Sequence[int]) -> CutResult:
    """Pick a cut of Q^d and move pebbles across it so both halves are good."""
    if d < 4:
        raise InvalidConfiguration("cut_and_transfer needs d >= 4")
    _sharp_or_raise(d, c)
    if sum(1 for x in c if x) < 2:
        raise InvalidConfiguration("cut_and_transfer needs at least two support vertices")
    cuts = [analyse_cut(d, c, j) for j in range(d)]
    cut = min(cuts, key=lambda a: (a.delta, a.coordinate))
    delta = cut.delta
    if delta > 3 ** (d - 1) - 1:
        raise InternalError(f"deficiency {delta} exceeds 3^(d-1) - 1")
    j, tb = cut.coordinate, cut.top_bit
    top = list(cut.top_config)
    residual = parity_residual(top)
    surplus = [x - r for x, r in zip(top, residual)]
    bottom = list(cut.bottom_config)
    transfers = []
    for _ in range(delta):
        x = max(range(len(surplus)), key=lambda v: (surplus[v], -v))
        if surplus[x] < 2:
            raise InternalError("even surplus exhausted before the deficiency was covered")
        surplus[x] -= 2
        top[x] -= 2
        bottom[x] += 1
        transfers.append(
            PebbleMove(insert_bit(x, j, tb), insert_bit(x, j, 1 - tb), BranchTag.CUT_TRANSFER)
        )
    return CutResult(cut, transfers, tuple(top), tuple(bottom))


# --------------------------------------------------------------------------
# Base cases and driver


def base_case_solver(d: int, c: Sequence[int], budget: SearchBudget | None = None) -> list[PebbleMove]:
    """Cover a good configuration on Q^d, d <= 3, by exhaustive search."""
    if d > 3:
        raise InvalidConfiguration("base cases are d <= 3")
    if not is_good(d, c).good:
        raise InvalidConfiguration(f"configuration is not good on Q^{d}")
    res = is_coverable(_cube(d), c, budget or BASE_BUDGET)
    if not res.found:
        raise InternalError(f"search failed on a good configuration of Q^{d}: {res.verdict}")
    return [PebbleMove(m.source, m.target, BranchTag.BASE_SEARCH) for m in res.witness]


class _Run:
    def __init__(self, budget: SearchBudget | None):
        self.branches: list[dict] = []
        self.fallbacks = 0
        self.budget = budget or BASE_BUDGET

    def log(self, kind: BranchTag | str, d: int, **params) -> None:
        self.branches.append({"kind": str(kind), "dimension": d, **params})

    def fallback(self, d: int, c: Configuration, reason: str) -> list[PebbleMove]:
        self.fallbacks += 1
        self.log(BranchTag.FALLBACK, d, reason=reason)
        res = is_coverable(_cube(d), c, self.budget)
        if res.verdict is Verdict.NOT_COVERABLE:
            raise NotCoverableError(f"configuration on Q^{d} is not coverable")
        if not res.found:
            raise NotCoverableError(f"search budget exhausted on Q^{d}")
        return [PebbleMove(m.source, m.target, BranchTag.FALLBACK) for m in res.witness]

    def solve(self, d: int, c: Configuration) -> list[PebbleMove]:
        if is_cover(c):
            return []
        sharp, aside = trim_to_sharp(d, c)
        if any(aside):
            self.log("TRIM", d, removed=sum(aside))
        c = sharp
        moves: list[PebbleMove] = []
        opened = 0
        while not is_cover(c):
            step = open_step(d, c)
            if step is None:
                break
            moves.append(step[0])
            c = step[1]
            opened += 1
        if opened:
            self.log(BranchTag.OPEN_STEP, d, steps=opened)
        if is_cover(c):
            return moves
        larges = [v for v, x in enumerate(c) if x >= 2]
        closed = not is_open(_cube(d), c)
        if len(larges) == 1 and closed:
            self.log(
                BranchTag.SINGLE_LARGE, d, vertex=larges[0], support=sum(1 for x in c if x)
            )
            return moves + single_large_reduction(d, c)
        if d <= 3:
            self.log(BranchTag.BASE_SEARCH, d, closed=closed)
            return moves + base_case_solver(d, c, self.budget)
        if sum(1 for x in c if x) < 2:
            return moves + self.fallback(d, c, "no proof branch applies")
        res = cut_and_transfer(d, c)
        cut = res.cut
        j, tb = cut.coordinate, cut.top_bit
        self.log(
            BranchTag.CUT_TRANSFER,
            d,
            coordinate=j,
            delta=cut.delta,
            oriented=cut.oriented,
            closed=closed,
            support_top=sum(1 for x in cut.top_config if x),
            support_bottom=sum(1 for x in cut.bottom_config if x),
        )
        moves.extend(res.transfers)
        self.log(BranchTag.RECURSE_B, d - 1, coordinate=j, bit=1 - tb)
        for m in self.solve(d - 1, res.bottom_next):
            moves.append(PebbleMove(insert_bit(m.source, j, 1 - tb), insert_bit(m.target, j, 1 - tb), m.tag))
        self.log(BranchTag.RECURSE_T, d - 1, coordinate=j, bit=tb)
        for m in self.solve(d - 1, res.top_next):
            moves.append(PebbleMove(insert_bit(m.source, j, tb), insert_bit(m.target, j, tb), m.tag))
        return moves


def cover_strategy(d: int, c: Sequence[int], budget: SearchBudget | None = None) -> StrategyTrace:
    """Build and verify a cover sequence for ``c`` on Q^d.

    Good inputs go through the inductive pipeline; other inputs are handed
    straight to the decider and counted as a fallback.
    """
    c = tuple(int(x) for x in c)
    if len(c) != 1 << d:
        raise InvalidConfiguration(f"configuration length {len(c)} != 2**{d}")
    run = _Run(budget)
    if is_good(d, c).good:
        moves = run.solve(d, c)
    else:
        moves = run.fallback(d, c, "input is not good")
    trace = StrategyTrace(d, c, moves, run.branches, run.fallbacks)
    result = verify_cover_sequence(_cube(d), c, moves)
    if not result.is_cover:
        raise InternalError("strategy produced a sequence that does not cover")
    trace.verified = True
    return trace


def random_good_configuration(d: int, rng: np.random.Generator, sharp_probability: float = 0.5) -> Configuration:
    """Random support, then a random good size, spread with Dirichlet weights."""
    n = 1 << d
    s = int(rng.integers(1, n + 1))
    supp = rng.choice(n, size=s, replace=False)
    total = good_threshold(d, s)
    if rng.random() >= sharp_probability:
        total += int(rng.integers(1, max(2, 3**d // 8)))
    alpha = float(rng.choice([0.05, 0.3, 1.0, 5.0]))
    weights = rng.dirichlet(np.full(s, alpha))
    extra = rng.multinomial(total - s, weights)
    out = [0] * n
    for v, e in zip(supp, extra):
        out[int(v)] = 1 + int(e)
    return tuple(out)
