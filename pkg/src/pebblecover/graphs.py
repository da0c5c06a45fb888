"""Graph construction, distances, hypercube cuts and hypercube symmetry.

Vertices are always the integers ``0 .. n-1``.  For a hypercube vertex ``i``
the binary digits of ``i`` are its coordinates, so two vertices are adjacent
exactly when their labels differ in one bit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .errors import (
    DisconnectedGraphError,
    InvalidParameter,
    ResourceLimitError,
    SpecSyntaxError,
    UnsupportedDimensionError,
)

DEFAULT_VERTEX_BUDGET = 4096
CANONICAL_MAX_DIMENSION = 4


@dataclass(frozen=True, eq=False)
class Graph:
    """An undirected, connected, unweighted graph.

    ``distances`` is a read-only ``int32`` array; ``cube_dimension`` is set
    when the vertex numbering is the standard hypercube labelling.
    """

    vertex_count: int
    adjacency: tuple[frozenset[int], ...]
    distances: np.ndarray = field(repr=False)
    label: str = ""
    cube_dimension: int | None = None

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        """Sorted neighbor tuples, the form the search loops iterate over."""
        return tuple(tuple(sorted(a)) for a in self.adjacency)

    @cached_property
    def dist(self) -> tuple[tuple[int, ...], ...]:
        """Distance table as nested tuples of Python ints."""
        return tuple(tuple(int(x) for x in row) for row in self.distances)

    @property
    def diameter(self) -> int:
        return int(self.distances.max()) if self.vertex_count else 0

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.vertex_count) for v in self.neighbors[u] if u < v]

    def is_adjacent(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def __repr__(self) -> str:
        return f"Graph({self.label or '?'}, n={self.vertex_count}, m={self.edge_count})"


def _check_budget(n: int, max_vertices: int) -> None:
    if n > max_vertices:
        raise ResourceLimitError(f"{n} vertices exceeds the vertex budget of {max_vertices}")


def all_pairs_distances(adjacency: Graph | Sequence[Iterable[int]]) -> np.ndarray:
    """Hop distances between every pair of vertices.

    Raises DisconnectedGraphError if some pair is unreachable.
    """
    if isinstance(adjacency, Graph):
        adjacency = adjacency.adjacency
    n = len(adjacency)
    rows, cols = [], []
    for u, nbrs in enumerate(adjacency):
        for v in nbrs:
            rows.append(u)
            cols.append(v)
    mat = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    dist = shortest_path(mat, method="D", directed=False, unweighted=True)
    if np.isinf(dist).any():
        raise DisconnectedGraphError("graph is not connected")
    out = dist.astype(np.int32)
    out.flags.writeable = False
    return out


def from_edges(
    n: int,
    edges: Iterable[tuple[int, int]],
    label: str = "",
    max_vertices: int = DEFAULT_VERTEX_BUDGET,
) -> Graph:
    if n < 1:
        raise InvalidParameter("a graph needs at least one vertex")
    _check_budget(n, max_vertices)
    adj: list[set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise InvalidParameter(f"edge ({u}, {v}) out of range for {n} vertices")
        if u == v:
            raise InvalidParameter(f"self-loop at vertex {u}")
        adj[u].add(v)
        adj[v].add(u)
    adjacency = tuple(frozenset(a) for a in adj)
    return Graph(n, adjacency, all_pairs_distances(adjacency), label)


def build_path(n: int) -> Graph:
    if n < 1:
        raise InvalidParameter("path needs n >= 1")
    return from_edges(n, [(i, i + 1) for i in range(n - 1)], f"path:{n}")


def build_complete(n: int) -> Graph:
    if n < 1:
        raise InvalidParameter("complete graph needs n >= 1")
    return from_edges(n, itertools.combinations(range(n), 2), f"complete:{n}")


def build_hypercube(d: int, max_vertices: int = DEFAULT_VERTEX_BUDGET) -> Graph:
    if d < 0:
        raise InvalidParameter("dimension must be nonnegative")
    n = 1 << d
    _check_budget(n, max_vertices)
    adjacency = tuple(frozenset(v ^ (1 << j) for j in range(d)) for v in range(n))
    idx = np.arange(n, dtype=np.int64)
    xor = idx[:, None] ^ idx[None, :]
    dist = np.zeros((n, n), dtype=np.int32)
    for j in range(d):
        dist += ((xor >> j) & 1).astype(np.int32)
    dist.flags.writeable = False
    return Graph(n, adjacency, dist, f"cube:{d}", cube_dimension=d)


def cartesian_product(g: Graph, h: Graph, max_vertices: int = DEFAULT_VERTEX_BUDGET) -> Graph:
    """G □ H with vertex ``(u, x)`` numbered ``u * |H| + x``.

    With this numbering the product of two hypercubes is literally the
    hypercube of the summed dimension, so the cube labelling is kept.
    """
    n = g.vertex_count * h.vertex_count
    _check_budget(n, max_vertices)
    m = h.vertex_count
    adj: list[frozenset[int]] = []
    for u in range(g.vertex_count):
        for x in range(m):
            nbrs = [u * m + y for y in h.adjacency[x]] + [v * m + x for v in g.adjacency[u]]
            adj.append(frozenset(nbrs))
    dist = (g.distances[:, None, :, None] + h.distances[None, :, None, :]).reshape(n, n)
    dist = dist.astype(np.int32)
    dist.flags.writeable = False
    cube = None
    if g.cube_dimension is not None and h.cube_dimension is not None:
        cube = g.cube_dimension + h.cube_dimension
    return Graph(n, tuple(adj), dist, f"product:{g.label},{h.label}", cube_dimension=cube)


def read_edge_list(path: str | Path, max_vertices: int = DEFAULT_VERTEX_BUDGET) -> Graph:
    """Parse the ``n m`` / ``u v`` edge-list format (``#`` comments allowed)."""
    lines = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line.split())
    if not lines or len(lines[0]) != 2:
        raise SpecSyntaxError(f"{path}: first line must be 'n m'")
    try:
        n, m = (int(t) for t in lines[0])
        edges = [(int(a), int(b)) for a, b in lines[1:]]
    except ValueError as exc:
        raise SpecSyntaxError(f"{path}: {exc}") from None
    if len(edges) != m:
        raise SpecSyntaxError(f"{path}: header says {m} edges, found {len(edges)}")
    return from_edges(n, edges, f"file:{path}", max_vertices)


def parse_graph_spec(spec: str, max_vertices: int = DEFAULT_VERTEX_BUDGET) -> Graph:
    """Build a graph from ``path:N``, ``complete:N``, ``cube:D``,
    ``product:<spec>,<spec>`` (right-associative) or ``file:<path>``."""
    kind, sep, arg = spec.strip().partition(":")
    if not sep:
        raise SpecSyntaxError(f"bad graph spec {spec!r}")
    if kind == "file":
        return read_edge_list(arg, max_vertices)
    if kind == "product":
        left, comma, right = arg.partition(",")
        if not comma:
            raise SpecSyntaxError(f"product spec needs two factors: {spec!r}")
        return cartesian_product(
            parse_graph_spec(left, max_vertices), parse_graph_spec(right, max_vertices), max_vertices
        )
    try:
        value = int(arg)
    except ValueError:
        raise SpecSyntaxError(f"bad graph parameter in {spec!r}") from None
    if kind == "path":
        return build_path(value)
    if kind == "complete":
        return build_complete(value)
    if kind == "cube":
        return build_hypercube(value, max_vertices)
    raise SpecSyntaxError(f"unknown graph family {kind!r}")


# --------------------------------------------------------------------------
# Hypercube geometry


@dataclass(frozen=True)
class CubeCut:
    dimension: int
    coordinate: int
    top_vertices: tuple[int, ...]
    bottom_vertices: tuple[int, ...]

    def mirror(self, v: int) -> int:
        return v ^ (1 << self.coordinate)


def cube_cut(d: int, j: int) -> CubeCut:
    if d < 1 or not 0 <= j < d:
        raise InvalidParameter(f"coordinate {j} out of range for dimension {d}")
    bit = 1 << j
    verts = range(1 << d)
    return CubeCut(
        d,
        j,
        tuple(v for v in verts if v & bit),
        tuple(v for v in verts if not v & bit),
    )


def drop_bit(v: int, j: int) -> int:
    """Coordinates of ``v`` in the subcube obtained by deleting bit ``j``."""
    low = v & ((1 << j) - 1)
    return low | ((v >> (j + 1)) << j)


def insert_bit(v: int, j: int, b: int) -> int:
    """Inverse of :func:`drop_bit` for the half with bit ``j`` equal to ``b``."""
    low = v & ((1 << j) - 1)
    return low | (b << j) | ((v >> j) << (j + 1))


@lru_cache(maxsize=None)
def cube_automorphisms(d: int) -> np.ndarray:
    """All ``d! * 2**d`` automorphisms of Q^d as rows of vertex images.

    Row ``g`` maps vertex ``v`` to ``g[v]``: permute the coordinates, then
    complement those in the mask.
    """
    if d > CANONICAL_MAX_DIMENSION:
        raise UnsupportedDimensionError(
            f"symmetry reduction is limited to d <= {CANONICAL_MAX_DIMENSION}"
        )
    n = 1 << d
    verts = np.arange(n)
    images = []
    for perm in itertools.permutations(range(d)):
        permuted = np.zeros(n, dtype=np.int64)
        for j, pj in enumerate(perm):
            permuted |= ((verts >> j) & 1) << pj
        for mask in range(n):
            images.append(permuted ^ mask)
    out = np.array(images, dtype=np.int64).reshape(len(images), n)
    out.flags.writeable = False
    return out


def apply_automorphism(image: Sequence[int], c: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(c)
    for v, x in enumerate(c):
        out[image[v]] = x
    return tuple(out)


def colex_key(c: Sequence[int]) -> tuple[int, ...]:
    return tuple(reversed(c))


def cube_canonical(d: int, c: Sequence[int]) -> tuple[int, ...]:
    """Least image of ``c`` under the symmetries of Q^d in colex order
    (compare the highest-numbered vertex first)."""
    if len(c) != 1 << d:
        raise InvalidParameter(f"configuration length {len(c)} != 2**{d}")
    best = tuple(c)
    for image in cube_automorphisms(d).tolist():
        cand = apply_automorphism(image, c)
        if colex_key(cand) < colex_key(best):
            best = cand
    return best


def canonical_mask(d: int, configs: np.ndarray) -> np.ndarray:
    """Boolean mask of rows of ``configs`` that are their own canonical form."""
    configs = np.asarray(configs)
    mask = np.ones(len(configs), dtype=bool)
    rev = configs[:, ::-1]
    for image in cube_automorphisms(d):
        moved = np.empty_like(configs)
        moved[:, image] = configs
        diff = moved[:, ::-1] != rev
        first = diff.argmax(axis=1)
        differs = diff[np.arange(len(configs)), first]
        rows = np.arange(len(configs))
        smaller = differs & (moved[:, ::-1][rows, first] < rev[rows, first])
        mask &= ~smaller
    return mask
