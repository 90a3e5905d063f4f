"""Vertex-cover backends for the derived multigraphs."""

from __future__ import annotations

import enum
import heapq
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import OracleLimitError
from .graph import LoopMultigraph, SetKind, VertexSet
from .oracles import ORACLE_LIMIT, brute_force_mvc


def vc_matching(h: LoopMultigraph) -> VertexSet:
    """Maximal-matching 2-approximation.

    Looped vertices go in first; the remaining edges are scanned in stored
    order and both endpoints of every still-uncovered edge are taken.
    """
    inside = h.loop_mask.copy()
    for u, v in h.proper_edges.tolist():
        if not (inside[u] or inside[v]):
            inside[u] = inside[v] = True
    return VertexSet.of(inside, SetKind.VERTEX_COVER)


def vc_greedy(h: LoopMultigraph) -> VertexSet:
    """Loops first, then repeatedly the vertex of largest uncovered degree
    (smallest id on ties).  No approximation guarantee."""
    inside = h.loop_mask.copy()
    adj = h.adj
    deg = np.zeros(h.n, dtype=np.int64)
    for v in range(h.n):
        if not inside[v]:
            deg[v] = sum(1 for u in adj[v] if not inside[u])
    heap = [(-int(d), v) for v, d in enumerate(deg) if d > 0]
    heapq.heapify(heap)
    while heap:
        d, v = heapq.heappop(heap)
        if inside[v] or -d != deg[v]:
            continue
        if deg[v] == 0:
            continue
        inside[v] = True
        for u in adj[v]:
            if not inside[u]:
                deg[u] -= 1
                if deg[u] > 0:
                    heapq.heappush(heap, (-int(deg[u]), u))
    return VertexSet.of(inside, SetKind.VERTEX_COVER)


def vc_exact(h: LoopMultigraph, cap: int = ORACLE_LIMIT) -> VertexSet:
    """Minimum vertex cover; refuses instances with more than ``cap`` vertices."""
    if h.n > cap:
        raise OracleLimitError(f"exact cover refuses n={h.n} (cap {cap})")
    return brute_force_mvc(h, limit=cap)


class CoverKind(enum.Enum):
    MATCHING_2APPROX = "matching"
    GREEDY = "greedy"
    EXACT_SMALL = "exact"


@dataclass(frozen=True)
class CoverSolver:
    """Named, callable cover backend."""

    kind: CoverKind = CoverKind.MATCHING_2APPROX
    size_limit: int | None = None

    def __call__(self, h: LoopMultigraph) -> VertexSet:
        if self.kind is CoverKind.MATCHING_2APPROX:
            return vc_matching(h)
        if self.kind is CoverKind.GREEDY:
            return vc_greedy(h)
        return vc_exact(h, self.size_limit or ORACLE_LIMIT)

    @property
    def name(self) -> str:
        return self.kind.value


CoverLike = Union[CoverSolver, str, Callable[[LoopMultigraph], VertexSet], None]


def resolve(vc: CoverLike) -> Callable[[LoopMultigraph], VertexSet]:
    """Accept a :class:`CoverSolver`, a backend name, or any callable."""
    if vc is None:
        return CoverSolver()
    if isinstance(vc, str):
        return CoverSolver(CoverKind(vc))
    return vc
