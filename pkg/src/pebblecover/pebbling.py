"""Configurations, pebbling moves and the basic predicates on them.

A configuration is a tuple of nonnegative ints indexed by vertex.  Functions
accept any integer sequence and return tuples.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .errors import (
    IllegalMove,
    InvalidConfiguration,
    SpecSyntaxError,
    VerificationFailure,
)
from .graphs import Graph

Configuration = tuple[int, ...]


class BranchTag(str, enum.Enum):
    OPEN_STEP = "OPEN_STEP"
    SINGLE_LARGE = "SINGLE_LARGE"
    BASE_SEARCH = "BASE_SEARCH"
    CUT_TRANSFER = "CUT_TRANSFER"
    RECURSE_T = "RECURSE_T"
    RECURSE_B = "RECURSE_B"
    SEARCH_WITNESS = "SEARCH_WITNESS"
    FALLBACK = "FALLBACK"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class PebbleMove:
    """Take two pebbles off ``source`` and put one on ``target``."""

    source: int
    target: int
    tag: BranchTag | None = None

    def relabel(self, mapping, tag: BranchTag | None = None) -> PebbleMove:
        return PebbleMove(mapping(self.source), mapping(self.target), tag or self.tag)

    def __str__(self) -> str:
        s = f"{self.source} -> {self.target}"
        return f"{s} {self.tag}" if self.tag else s


MoveSequence = list[PebbleMove]


def size(c: Sequence[int]) -> int:
    return sum(c)


def support(c: Sequence[int]) -> frozenset[int]:
    return frozenset(v for v, x in enumerate(c) if x > 0)


def is_cover(c: Sequence[int]) -> bool:
    return all(x > 0 for x in c)


def _check_length(g: Graph, c: Sequence[int]) -> None:
    if len(c) != g.vertex_count:
        raise InvalidConfiguration(
            f"configuration has {len(c)} entries, graph has {g.vertex_count} vertices"
        )
    if any(x < 0 for x in c):
        raise InvalidConfiguration("pebble counts must be nonnegative")


class Classification(NamedTuple):
    simple: bool
    cover: bool
    even: bool
    open: bool
    closed: bool


def is_open(g: Graph, c: Sequence[int]) -> bool:
    nbrs = g.neighbors
    return any(x >= 2 and any(c[w] == 0 for w in nbrs[v]) for v, x in enumerate(c))


def classify(c: Sequence[int], g: Graph) -> Classification:
    _check_length(g, c)
    sigma = support(c)
    opened = is_open(g, c)
    return Classification(
        simple=len(sigma) == 1,
        cover=len(sigma) == g.vertex_count,
        even=all(x % 2 == 0 for x in c),
        open=opened,
        closed=not opened,
    )


class GoodReport(NamedTuple):
    good: bool
    sharp: bool
    slack: int


def good_threshold(d: int, support_size: int) -> int:
    """Least size at which a configuration on Q^d with this support is good."""
    return 3**d - support_size + 1


def is_good(d: int, c: Sequence[int]) -> GoodReport:
    if len(c) != 1 << d:
        raise InvalidConfiguration(f"configuration length {len(c)} != 2**{d}")
    slack = sum(c) - good_threshold(d, sum(1 for x in c if x > 0))
    return GoodReport(slack >= 0, slack == 0, slack)


def apply_move(c: Sequence[int], m: PebbleMove, g: Graph) -> Configuration:
    if not 0 <= m.source < len(c) or not 0 <= m.target < len(c):
        raise IllegalMove(f"{m}: vertex out of range")
    if not g.is_adjacent(m.source, m.target):
        raise IllegalMove(f"{m}: endpoints are not adjacent")
    if c[m.source] < 2:
        raise IllegalMove(f"{m}: source holds {c[m.source]} pebble(s)")
    out = list(c)
    out[m.source] -= 2
    out[m.target] += 1
    return tuple(out)


class VerifyResult(NamedTuple):
    final: Configuration
    is_cover: bool


def verify_cover_sequence(g: Graph, c: Sequence[int], seq: Iterable[PebbleMove]) -> VerifyResult:
    """Replay ``seq`` from ``c``; raise VerificationFailure at the first illegal step."""
    _check_length(g, c)
    cur = list(c)
    for i, m in enumerate(seq):
        if not (0 <= m.source < len(cur) and 0 <= m.target < len(cur)):
            raise VerificationFailure(i, "vertex out of range")
        if not g.is_adjacent(m.source, m.target):
            raise VerificationFailure(i, f"{m.source} and {m.target} are not adjacent")
        if cur[m.source] < 2:
            raise VerificationFailure(i, f"vertex {m.source} holds {cur[m.source]}")
        cur[m.source] -= 2
        cur[m.target] += 1
    final = tuple(cur)
    return VerifyResult(final, is_cover(final))


def simple_cost(g: Graph, v: int) -> int:
    """Pebbles a simple configuration on ``v`` needs to cover ``g``."""
    return sum(1 << d for d in g.dist[v])


def simple_bound(g: Graph) -> tuple[int, int]:
    """``(max_v simple_cost(g, v), argmax)`` with the lowest index winning ties."""
    best, arg = -1, 0
    for v in range(g.vertex_count):
        cost = simple_cost(g, v)
        if cost > best:
            best, arg = cost, v
    return best, arg


def simple_configuration(n: int, v: int, k: int) -> Configuration:
    out = [0] * n
    out[v] = k
    return tuple(out)


# --------------------------------------------------------------------------
# Text formats

_SIMPLE = re.compile(r"simple:(\d+):(\d+)$")
_MOVE = re.compile(r"^\s*(\d+)\s*->\s*(\d+)(?:\s+([A-Z_]+))?\s*$")


def parse_configuration(text: str, n: int) -> Configuration:
    """Parse ``simple:V:K``, ``ones``, or ``n`` whitespace-separated counts."""
    text = text.strip()
    if text == "ones":
        return (1,) * n
    m = _SIMPLE.match(text)
    if m:
        v, k = int(m.group(1)), int(m.group(2))
        if v >= n:
            raise SpecSyntaxError(f"vertex {v} out of range for {n} vertices")
        return simple_configuration(n, v, k)
    parts = text.replace(",", " ").split()
    try:
        counts = tuple(int(p) for p in parts)
    except ValueError:
        raise SpecSyntaxError(f"bad configuration {text!r}") from None
    if len(counts) != n:
        raise SpecSyntaxError(f"configuration has {len(counts)} entries, expected {n}")
    if any(x < 0 for x in counts):
        raise SpecSyntaxError("pebble counts must be nonnegative")
    return counts


def format_configuration(c: Sequence[int]) -> str:
    return " ".join(str(x) for x in c)


def format_moves(seq: Iterable[PebbleMove]) -> str:
    return "\n".join(str(m) for m in seq)


def parse_moves(text: str) -> MoveSequence:
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        m = _MOVE.match(line)
        if not m:
            raise SpecSyntaxError(f"line {lineno}: expected 'FROM -> TO [TAG]'")
        tag = BranchTag(m.group(3)) if m.group(3) else None
        out.append(PebbleMove(int(m.group(1)), int(m.group(2)), tag))
    return out


def moves_to_json(seq: Iterable[PebbleMove]) -> list[dict]:
    return [
        {"from": m.source, "to": m.target, "tag": m.tag.value if m.tag else None} for m in seq
    ]


def moves_from_json(items: Iterable[dict]) -> MoveSequence:
    return [
        PebbleMove(int(d["from"]), int(d["to"]), BranchTag(d["tag"]) if d.get("tag") else None)
        for d in items
    ]
