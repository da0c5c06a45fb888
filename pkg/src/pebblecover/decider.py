"""Exact coverability and target-reachability by depth-first search.

The search walks reachable configurations, caching refuted ones, and stops at
the first success.  Three necessary conditions cut branches early:

* size: a cover needs at least one pebble per vertex and moves only lose
  pebbles;
* target weight: ``sum_u C(u) / 2**dist(u, v)`` never increases, so an empty
  ``v`` whose weight is below 1 can never be reached;
* source weight: ``sum_x C(x) * 2**dist(s, x)`` never increases for any fixed
  ``s``, while every cover has it at least ``sum_x 2**dist(s, x)``.

Before searching, a greedy router tries to cover the graph directly; most
configurations met in enumeration sweeps are settled there.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

from .errors import InvalidConfiguration, InvalidParameter
from .graphs import Graph
from .pebbling import BranchTag, Configuration, PebbleMove


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int = 2_000_000
    max_memo_entries: int = 2_000_000

    def __post_init__(self):
        if self.max_nodes <= 0 or self.max_memo_entries <= 0:
            raise InvalidParameter("search budgets must be positive")


class Verdict(enum.Enum):
    COVERABLE = "Coverable"
    NOT_COVERABLE = "NotCoverable"
    BUDGET_EXCEEDED = "BudgetExceeded"


@dataclass
class SearchStats:
    nodes: int = 0
    memo_hits: int = 0
    size_prunes: int = 0
    potential_prunes: int = 0
    source_prunes: int = 0
    greedy: bool = False

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class DeciderResult:
    """``verdict`` is COVERABLE for a success of either decision problem;
    for :func:`can_reach` it means the target got ``k`` pebbles."""

    verdict: Verdict
    witness: list[PebbleMove] | None = None
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def found(self) -> bool:
        return self.verdict is Verdict.COVERABLE


class _Tables:
    def __init__(self, g: Graph):
        n = g.vertex_count
        dist = g.dist
        self.n = n
        self.diam = g.diameter
        diam = self.diam
        # inward[v][u] = 2**(diam - dist(u, v))
        self.inward = tuple(tuple(1 << (diam - dist[u][v]) for u in range(n)) for v in range(n))
        self.unit = 1 << diam
        # outward[s][x] = 2**dist(s, x)
        self.outward = tuple(tuple(1 << dist[s][x] for x in range(n)) for s in range(n))
        self.simple_cost = tuple(sum(row) for row in self.outward)
        self.moves = tuple((u, w) for u in range(n) for w in g.neighbors[u])
        self.dist = dist


@lru_cache(maxsize=64)
def _tables(g: Graph) -> _Tables:
    return _Tables(g)


# --------------------------------------------------------------------------
# Refutation tests


def _cover_refuter(t: _Tables, stats: SearchStats | None, use_prunes: bool = True):
    n, inward, unit, outward, scost = t.n, t.inward, t.unit, t.outward, t.simple_cost
    rng = range(n)

    def refute(c: Sequence[int]) -> bool:
        if sum(c) < n:
            if stats is not None:
                stats.size_prunes += 1
            return True
        if not use_prunes:
            return False
        for v in rng:
            if c[v] == 0:
                w = inward[v]
                if sum(c[u] * w[u] for u in rng if c[u]) < unit:
                    if stats is not None:
                        stats.potential_prunes += 1
                    return True
        for s in rng:
            w = outward[s]
            if sum(c[x] * w[x] for x in rng if c[x]) < scost[s]:
                if stats is not None:
                    stats.source_prunes += 1
                return True
        return False

    return refute


def cover_refuted(g: Graph, c: Sequence[int]) -> bool:
    """True if one of the necessary conditions already rules out a cover."""
    return _cover_refuter(_tables(g), None)(c)


def simple_refuted_by_weight(g: Graph, v: int, k: int) -> bool:
    """Closed-form refutation of ``k`` pebbles on ``v`` via the source weight."""
    return k < _tables(g).simple_cost[v]


# --------------------------------------------------------------------------
# Greedy router


def _route(t: _Tables, nbrs, cur: list[int], v: int) -> list[tuple[int, int]] | None:
    """Moves delivering one pebble to empty ``v`` along a shortest path,
    never emptying an occupied vertex, or None."""
    dist_v = [t.dist[v][x] for x in range(t.n)]
    order = sorted(range(t.n), key=dist_v.__getitem__)
    deficit = [0] * t.n
    nxt = [-1] * t.n
    cost = [0] * t.n
    deficit[v] = 1
    best = None
    for x in order:
        if x == v:
            continue
        dx = dist_v[x]
        keep = 1 if cur[x] > 0 else 0
        cand = None
        for y in nbrs[x]:
            if dist_v[y] == dx - 1 and deficit[y] > 0:
                need = max(0, 2 * deficit[y] + keep - cur[x])
                key = (need, cost[y])
                if cand is None or key < cand[0]:
                    cand = (key, y)
        if cand is None:
            # Some shorter-path neighbor is self-sufficient; x is never needed.
            deficit[x] = 0
            continue
        (need, _), y = cand
        deficit[x] = need
        nxt[x] = y
        cost[x] = deficit[y] + cost[y]
        if need == 0:
            key = (cost[x], -cur[x], x)
            if best is None or key < best[0]:
                best = (key, x)
    if best is None:
        return None
    moves = []
    x = best[1]
    while x != v:
        y = nxt[x]
        moves.extend([(x, y)] * deficit[y])
        x = y
    return moves


def greedy_cover(g: Graph, c: Sequence[int]) -> list[PebbleMove] | None:
    """Cover by repeatedly routing a pebble to the most constrained empty
    vertex; returns None when the heuristic gets stuck."""
    t = _tables(g)
    nbrs = g.neighbors
    cur = list(c)
    out: list[tuple[int, int]] = []
    rng = range(t.n)
    while True:
        empties = [v for v in rng if cur[v] == 0]
        if not empties:
            return [PebbleMove(u, w, BranchTag.SEARCH_WITNESS) for u, w in out]
        target = min(
            empties, key=lambda v: (sum(cur[u] * t.inward[v][u] for u in rng), v)
        )
        route = _route(t, nbrs, cur, target)
        if route is None:
            return None
        for u, w in route:
            cur[u] -= 2
            cur[w] += 1
        out.extend(route)


# --------------------------------------------------------------------------
# Search engine


def _search(
    start: Configuration,
    moves: tuple[tuple[int, int], ...],
    is_goal: Callable[[Sequence[int]], bool],
    refute: Callable[[Sequence[int]], bool],
    order: Callable[[Sequence[int], tuple[int, int]], object],
    budget: SearchBudget,
    stats: SearchStats,
) -> tuple[Verdict, list[tuple[int, int]] | None]:
    if is_goal(start):
        return Verdict.COVERABLE, []
    if refute(start):
        return Verdict.NOT_COVERABLE, None

    def children(state):
        legal = [m for m in moves if state[m[0]] >= 2]
        legal.sort(key=lambda m: order(state, m))
        return iter(legal)

    memo: set[Configuration] = set()
    path: list[tuple[int, int]] = []
    stack = [(start, children(start))]
    stats.nodes += 1
    while stack:
        state, it = stack[-1]
        for u, w in it:
            child = list(state)
            child[u] -= 2
            child[w] += 1
            child = tuple(child)
            if is_goal(child):
                path.append((u, w))
                return Verdict.COVERABLE, path
            if child in memo:
                stats.memo_hits += 1
                continue
            if refute(child):
                continue
            stats.nodes += 1
            if stats.nodes > budget.max_nodes:
                return Verdict.BUDGET_EXCEEDED, None
            path.append((u, w))
            stack.append((child, children(child)))
            break
        else:
            stack.pop()
            if len(memo) < budget.max_memo_entries:
                memo.add(state)
            if path:
                path.pop()
    return Verdict.NOT_COVERABLE, None


def _check(g: Graph, c: Sequence[int]) -> Configuration:
    if len(c) != g.vertex_count:
        raise InvalidConfiguration(
            f"configuration has {len(c)} entries, graph has {g.vertex_count} vertices"
        )
    if any(x < 0 for x in c):
        raise InvalidConfiguration("pebble counts must be nonnegative")
    return tuple(int(x) for x in c)


def is_coverable(
    g: Graph,
    c: Sequence[int],
    budget: SearchBudget | None = None,
    *,
    greedy: bool = True,
    prune: bool = True,
) -> DeciderResult:
    """Decide whether some sequence of pebbling steps turns ``c`` into a cover.

    ``prune=False`` keeps only the size bound; it exists for differential
    testing of the weight prunes.
    """
    c = _check(g, c)
    budget = budget or SearchBudget()
    stats = SearchStats()
    t = _tables(g)
    if greedy and sum(c) >= t.n:
        seq = greedy_cover(g, c)
        if seq is not None:
            stats.greedy = True
            return DeciderResult(Verdict.COVERABLE, seq, stats)

    def is_goal(s):
        return 0 not in s

    def order(s, m):
        return (s[m[1]] != 0, -s[m[0]], m)

    verdict, path = _search(
        c, t.moves, is_goal, _cover_refuter(t, stats, prune), order, budget, stats
    )
    witness = None
    if path is not None:
        witness = [PebbleMove(u, w, BranchTag.SEARCH_WITNESS) for u, w in path]
    return DeciderResult(verdict, witness, stats)


def can_reach(
    g: Graph,
    c: Sequence[int],
    target: int,
    k: int = 1,
    budget: SearchBudget | None = None,
    *,
    prune: bool = True,
) -> DeciderResult:
    """Decide whether ``k`` pebbles can be gathered on ``target``."""
    c = _check(g, c)
    if k < 1:
        raise InvalidParameter("k must be positive")
    if not 0 <= target < g.vertex_count:
        raise InvalidParameter(f"target {target} out of range")
    budget = budget or SearchBudget()
    stats = SearchStats()
    t = _tables(g)
    w = t.inward[target]
    need = k * t.unit
    dist_t = t.dist[target]
    rng = range(t.n)

    def is_goal(s):
        return s[target] >= k

    def refute(s):
        if sum(s) < k:
            stats.size_prunes += 1
            return True
        if prune and sum(s[u] * w[u] for u in rng if s[u]) < need:
            stats.potential_prunes += 1
            return True
        return False

    def order(s, m):
        return (dist_t[m[1]] - dist_t[m[0]], -s[m[0]], m)

    # Moves away from the target never help, but they are kept so the search
    # stays a literal exploration of the move system.
    verdict, path = _search(c, t.moves, is_goal, refute, order, budget, stats)
    witness = None
    if path is not None:
        witness = [PebbleMove(u, v, BranchTag.SEARCH_WITNESS) for u, v in path]
    return DeciderResult(verdict, witness, stats)
