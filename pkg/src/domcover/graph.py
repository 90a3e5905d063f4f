"""Core graph containers, file loaders and solution verifiers."""

from __future__ import annotations

import enum
import io
import logging
import os
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import IO, Iterable, Sequence, Union

import numpy as np

from .errors import ParseError

log = logging.getLogger(__name__)

Source = Union[str, os.PathLike, IO[bytes], IO[str]]


class SetKind(enum.Enum):
    DOMINATING = "DS"
    TOTAL_DOMINATING = "TDS"
    VERTEX_COVER = "VC"
    INDEPENDENT = "IS"


@dataclass(frozen=True)
class VertexSet:
    """Sorted, duplicate-free set of vertex ids tagged with what it is meant to be."""

    members: tuple[int, ...]
    kind: SetKind

    @classmethod
    def of(cls, ids, kind: SetKind) -> "VertexSet":
        if isinstance(ids, np.ndarray) and ids.dtype == bool:
            ids = np.flatnonzero(ids)
        return cls(tuple(sorted({int(i) for i in ids})), kind)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, v):
        return v in self._lookup

    @cached_property
    def _lookup(self) -> frozenset:
        return frozenset(self.members)

    def mask(self, n: int) -> np.ndarray:
        out = np.zeros(n, dtype=bool)
        if self.members:
            out[list(self.members)] = True
        return out


def _as_mask(s, n: int) -> np.ndarray:
    if isinstance(s, VertexSet):
        return s.mask(n)
    s = np.asarray(list(s) if not isinstance(s, np.ndarray) else s)
    if s.dtype == bool:
        return s.copy()
    out = np.zeros(n, dtype=bool)
    if s.size:
        out[s.astype(np.int64)] = True
    return out


@dataclass(frozen=True, eq=False)
class Pools:
    """Per-owner candidate lists in CSR form (ascending member ids)."""

    offsets: np.ndarray
    members: np.ndarray

    @property
    def count(self) -> int:
        return len(self.offsets) - 1

    @cached_property
    def sizes(self) -> np.ndarray:
        return np.diff(self.offsets)

    @cached_property
    def owner(self) -> np.ndarray:
        return np.repeat(np.arange(self.count, dtype=np.int64), self.sizes)

    @classmethod
    def from_lists(cls, lists: Sequence[Iterable[int]]) -> "Pools":
        rows = [sorted(set(int(x) for x in row)) for row in lists]
        offsets = np.zeros(len(rows) + 1, dtype=np.int64)
        np.cumsum([len(r) for r in rows], out=offsets[1:])
        members = np.fromiter((x for r in rows for x in r), dtype=np.int64,
                              count=int(offsets[-1]))
        return cls(offsets, members)


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple undirected graph in CSR form.

    ``neighbors[offsets[v]:offsets[v + 1]]`` is the ascending neighbor
    list of ``v``.  ``labels`` maps dense ids back to the ids used in the
    source file, when the graph came from one.
    """

    n: int
    offsets: np.ndarray
    neighbors: np.ndarray
    labels: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], **kw) -> "Graph":
        """Build from any iterable of pairs; duplicates, both orientations and
        self-loops are normalised away."""
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                         dtype=np.int64).reshape(-1, 2)
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise ValueError("edge endpoint out of range")
        arr = arr[arr[:, 0] != arr[:, 1]]
        both = np.concatenate([arr, arr[:, ::-1]])
        if both.size:
            both = np.unique(both, axis=0)
        src = both[:, 0] if both.size else np.zeros(0, dtype=np.int64)
        dst = both[:, 1] if both.size else np.zeros(0, dtype=np.int64)
        counts = np.bincount(src, minlength=n)
        offsets = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=offsets[1:])
        return cls(n, offsets, dst.astype(np.int64), **kw)

    @cached_property
    def degree(self) -> np.ndarray:
        return np.diff(self.offsets)

    @cached_property
    def owner(self) -> np.ndarray:
        """Source vertex of each entry of ``neighbors``."""
        return np.repeat(np.arange(self.n, dtype=np.int64), self.degree)

    @property
    def edge_count(self) -> int:
        return int(self.neighbors.size // 2)

    @property
    def max_degree(self) -> int:
        return int(self.degree.max()) if self.n else 0

    def neighbors_of(self, v: int) -> np.ndarray:
        return self.neighbors[self.offsets[v]:self.offsets[v + 1]]

    @cached_property
    def open_pools(self) -> Pools:
        """``N(v)`` for every ``v``."""
        return Pools(self.offsets, self.neighbors)

    @cached_property
    def closed_pools(self) -> Pools:
        """``N(v) ∪ {v}`` for every ``v``."""
        owner = np.concatenate([self.owner, np.arange(self.n, dtype=np.int64)])
        members = np.concatenate([self.neighbors, np.arange(self.n, dtype=np.int64)])
        order = np.lexsort((members, owner))
        offsets = self.offsets + np.arange(self.n + 1, dtype=np.int64)
        return Pools(offsets, members[order])

    @cached_property
    def adj(self) -> list[list[int]]:
        """Neighbor lists as plain Python lists (for per-vertex loops)."""
        nb = self.neighbors.tolist()
        off = self.offsets.tolist()
        return [nb[off[v]:off[v + 1]] for v in range(self.n)]

    def edges(self) -> np.ndarray:
        """``(edge_count, 2)`` array of pairs with ``u < v``, lexicographic."""
        src = self.owner
        keep = src < self.neighbors
        return np.stack([src[keep], self.neighbors[keep]], axis=1)

    def isolated(self) -> np.ndarray:
        return np.flatnonzero(self.degree == 0)

    def has_isolated(self) -> bool:
        return bool(self.n) and bool((self.degree == 0).any())

    def same_edges(self, other: "Graph") -> bool:
        return (self.n == other.n and np.array_equal(self.offsets, other.offsets)
                and np.array_equal(self.neighbors, other.neighbors))

    def check(self) -> None:
        """Full-scan structural assertion (sorted, no loops, symmetric)."""
        assert self.offsets[0] == 0 and self.offsets[-1] == self.neighbors.size
        for v, nbrs in enumerate(self.adj):
            assert all(a < b for a, b in zip(nbrs, nbrs[1:])), f"unsorted at {v}"
            assert v not in nbrs, f"self-loop at {v}"
        pairs = set(map(tuple, self.edges().tolist()))
        assert 2 * len(pairs) == self.neighbors.size, "asymmetric adjacency"


@dataclass(frozen=True, eq=False)
class LoopMultigraph:
    """Edge list over ``n`` vertices where ``(v, v)`` is a loop.

    Edges are stored normalised (``u <= v``) and deduplicated, keeping the
    order of first appearance.
    """

    n: int
    edges: np.ndarray

    @classmethod
    def from_pairs(cls, n: int, a, b) -> "LoopMultigraph":
        a = np.asarray(a, dtype=np.int64).ravel()
        b = np.asarray(b, dtype=np.int64).ravel()
        if a.shape != b.shape:
            raise ValueError("endpoint arrays differ in length")
        if a.size and (min(a.min(), b.min()) < 0 or max(a.max(), b.max()) >= n):
            raise ValueError("edge endpoint out of range")
        pairs = np.stack([np.minimum(a, b), np.maximum(a, b)], axis=1)
        if pairs.size:
            _, first = np.unique(pairs, axis=0, return_index=True)
            pairs = pairs[np.sort(first)]
        return cls(n, pairs.reshape(-1, 2))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "LoopMultigraph":
        arr = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        return cls.from_pairs(n, arr[:, 0], arr[:, 1])

    def __len__(self):
        return len(self.edges)

    @cached_property
    def loop_mask(self) -> np.ndarray:
        out = np.zeros(self.n, dtype=bool)
        loops = self.edges[:, 0] == self.edges[:, 1]
        out[self.edges[loops, 0]] = True
        return out

    @cached_property
    def proper_edges(self) -> np.ndarray:
        return self.edges[self.edges[:, 0] != self.edges[:, 1]]

    @cached_property
    def degree(self) -> np.ndarray:
        """Number of distinct non-loop neighbours of each vertex."""
        e = self.proper_edges
        return np.bincount(e.ravel(), minlength=self.n)

    @cached_property
    def adj(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.proper_edges.tolist():
            out[u].append(v)
            out[v].append(u)
        return out


def _open_text(source: Source):
    if isinstance(source, (str, os.PathLike)):
        return open(source, "r", encoding="utf-8", errors="replace"), True
    if isinstance(source, (bytes, bytearray)):
        return io.StringIO(source.decode("utf-8", errors="replace")), True
    if isinstance(source, io.TextIOBase):
        return source, False
    return io.TextIOWrapper(source, encoding="utf-8", errors="replace"), False


def _parse_id(token: str, lineno: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise ParseError(f"malformed vertex id {token!r}", lineno) from None
    if value < 0:
        raise ParseError(f"negative vertex id {value}", lineno)
    return value


def load_edge_list(source: Source) -> Graph:
    """Read a SNAP-style edge list.

    Lines starting with ``#`` or ``%`` are comments; every other non-blank
    line must hold exactly two non-negative integer ids.  Ids are remapped
    to ``0..n-1`` in order of first appearance (``graph.labels`` holds the
    original ids), the graph is symmetrised, and duplicate edges and
    self-loops are dropped.
    """
    fh, close = _open_text(source)
    remap: dict[int, int] = {}
    src: list[int] = []
    dst: list[int] = []
    try:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line[0] in "#%":
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(f"expected 2 ids, got {len(parts)} tokens", lineno)
            u = remap.setdefault(_parse_id(parts[0], lineno), len(remap))
            v = remap.setdefault(_parse_id(parts[1], lineno), len(remap))
            src.append(u)
            dst.append(v)
    finally:
        if close:
            fh.close()
    if not remap:
        raise ParseError("graph has no vertices")
    labels = np.fromiter(remap.keys(), dtype=np.int64, count=len(remap))
    return Graph.from_edges(len(remap), np.column_stack([src, dst]) if src else [],
                            labels=labels)


def load_metis(source: Source) -> Graph:
    """Read an unweighted METIS adjacency file (1-based neighbour lists).

    A header edge count that disagrees with the parsed count is recorded
    in ``graph.meta["warnings"]`` rather than rejected.
    """
    fh, close = _open_text(source)
    try:
        lines = fh.read().splitlines()
    finally:
        if close:
            fh.close()

    pos = 0
    while pos < len(lines) and (not lines[pos].strip() or lines[pos].lstrip().startswith("%")):
        pos += 1
    if pos == len(lines):
        raise ParseError("missing header")
    header = lines[pos].split()
    if len(header) < 2:
        raise ParseError("header must be 'n m [fmt]'", pos + 1)
    n = _parse_id(header[0], pos + 1)
    m_declared = _parse_id(header[1], pos + 1)
    if len(header) > 2 and header[2].strip("0"):
        raise ParseError(f"weighted METIS format {header[2]!r} not supported", pos + 1)
    if n == 0:
        raise ParseError("graph has no vertices", pos + 1)

    src: list[int] = []
    dst: list[int] = []
    v = 0
    for lineno in range(pos + 2, len(lines) + 1):
        if v == n:
            break
        line = lines[lineno - 1]
        if line.lstrip().startswith("%"):
            continue
        for tok in line.split():
            u = _parse_id(tok, lineno)
            if not 1 <= u <= n:
                raise ParseError(f"neighbour id {u} outside [1, {n}]", lineno)
            src.append(v)
            dst.append(u - 1)
        v += 1
    if v < n:
        raise ParseError(f"truncated file: {v} of {n} adjacency lines")

    g = Graph.from_edges(n, np.column_stack([src, dst]) if src else [],
                         labels=np.arange(1, n + 1, dtype=np.int64))
    if g.edge_count != m_declared:
        msg = f"header declares {m_declared} edges, parsed {g.edge_count}"
        log.warning(msg)
        g.meta.setdefault("warnings", []).append(msg)
    return g


def is_dominating(g: Graph, s) -> bool:
    """Every vertex is in ``s`` or adjacent to a member of ``s``."""
    inside = _as_mask(s, g.n)
    hit = np.bincount(g.owner[inside[g.neighbors]], minlength=g.n)
    return bool(np.all(inside | (hit > 0)))


def is_total_dominating(g: Graph, s) -> bool:
    """Every vertex, members included, has a neighbour in ``s``."""
    if g.has_isolated():
        return False
    inside = _as_mask(s, g.n)
    hit = np.bincount(g.owner[inside[g.neighbors]], minlength=g.n)
    return bool(np.all(hit > 0))


def is_vertex_cover(h: LoopMultigraph, s) -> bool:
    """Every edge has an endpoint in ``s``; a loop needs its vertex in ``s``."""
    if not len(h):
        return True
    inside = _as_mask(s, h.n)
    return bool(np.all(inside[h.edges[:, 0]] | inside[h.edges[:, 1]]))


def is_independent(h: LoopMultigraph, s) -> bool:
    inside = _as_mask(s, h.n)
    if not len(h):
        return True
    return not bool(np.any(inside[h.edges[:, 0]] & inside[h.edges[:, 1]]))


def ball(g: Graph, source: int, radius: int) -> dict[int, int]:
    """Vertices within ``radius`` hops of ``source`` mapped to their distance."""
    adj = g.adj
    dist = {source: 0}
    frontier = deque([source])
    while frontier:
        u = frontier.popleft()
        du = dist[u]
        if du == radius:
            continue
        for w in adj[u]:
            if w not in dist:
                dist[w] = du + 1
                frontier.append(w)
    return dist


def power_graph(g: Graph, k: int) -> Graph:
    """Graph on the same vertices with an edge wherever ``1 <= dist(u, v) <= k``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return Graph(g.n, g.offsets, g.neighbors, labels=g.labels, meta=dict(g.meta))
    src: list[int] = []
    dst: list[int] = []
    for v in range(g.n):
        reach = ball(g, v, k)
        for u in reach:
            if u > v:
                src.append(v)
                dst.append(u)
    return Graph.from_edges(g.n, np.column_stack([src, dst]) if src else [], labels=g.labels)


def within_distance(g: Graph, s, k: int) -> np.ndarray:
    """Boolean mask of vertices at distance ``<= k`` from some member of ``s``
    (multi-source BFS)."""
    inside = _as_mask(s, g.n)
    dist = np.full(g.n, -1, dtype=np.int64)
    frontier = deque(np.flatnonzero(inside).tolist())
    dist[inside] = 0
    adj = g.adj
    while frontier:
        u = frontier.popleft()
        if dist[u] == k:
            continue
        for w in adj[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                frontier.append(w)
    return dist >= 0


def complete(n: int) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star(leaves: int) -> Graph:
    """Star with centre 0 and leaves ``1..leaves``."""
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def gnp(n: int, p: float, seed: int) -> Graph:
    """Erdős–Rényi G(n, p) from a numpy generator seeded with ``seed``."""
    gen = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = gen.random(iu.size) < p
    return Graph.from_edges(n, np.column_stack([iu[keep], ju[keep]]))


def from_adjacency(adj: Sequence[Iterable[int]]) -> Graph:
    return Graph.from_edges(len(adj), [(u, v) for u, nb in enumerate(adj) for v in nb])
