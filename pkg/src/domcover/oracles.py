"""Exact solvers for small instances, used to check the approximation code.

All three problems are minimum hitting-set problems over bitmasks: each
vertex (or edge) contributes a constraint "pick at least one of these".
The search is branch and bound with a disjoint-constraint packing bound.
"""

from __future__ import annotations

from .errors import InfeasibleError, OracleLimitError
from .graph import Graph, LoopMultigraph, SetKind, VertexSet

ORACLE_LIMIT = 30


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _reduce(constraints: list[int]) -> list[int]:
    """Drop duplicates and constraints implied by a subset constraint."""
    uniq = sorted(set(constraints), key=lambda c: (c.bit_count(), c))
    kept: list[int] = []
    for c in uniq:
        if not any(k & c == k for k in kept):
            kept.append(c)
    return kept


def _greedy(constraints: list[int]) -> int:
    chosen = 0
    open_ = list(constraints)
    while open_:
        counts: dict[int, int] = {}
        for c in open_:
            for v in _bits(c):
                counts[v] = counts.get(v, 0) + 1
        v = max(counts, key=lambda u: (counts[u], -u))
        chosen |= 1 << v
        open_ = [c for c in open_ if not c & chosen]
    return chosen


def _packing_bound(constraints: list[int]) -> int:
    used = 0
    count = 0
    for c in sorted(constraints, key=int.bit_count):
        if not c & used:
            used |= c
            count += 1
    return count


def min_hitting_set(constraints: list[int]) -> int:
    """Bitmask of a minimum set meeting every constraint mask.

    Every constraint must be non-zero.
    """
    cons = _reduce(constraints)
    if not cons:
        return 0
    best = [_greedy(cons)]
    best_size = [best[0].bit_count()]

    def search(chosen: int, size: int, open_: list[int], allowed: int) -> None:
        live = []
        for c in open_:
            if c & chosen:
                continue
            c &= allowed
            if not c:
                return
            live.append(c)
        if not live:
            if size < best_size[0]:
                best[0], best_size[0] = chosen, size
            return
        if size + _packing_bound(live) >= best_size[0]:
            return
        pivot = min(live, key=int.bit_count)
        freq: dict[int, int] = {}
        for c in live:
            for v in _bits(c & pivot):
                freq[v] = freq.get(v, 0) + 1
        for v in sorted(_bits(pivot), key=lambda u: (-freq.get(u, 0), u)):
            bit = 1 << v
            search(chosen | bit, size + 1, live, allowed)
            allowed &= ~bit

    search(0, 0, cons, (1 << max(c.bit_length() for c in cons)) - 1)
    return best[0]


def _check_size(n: int, limit: int) -> None:
    if n > limit:
        raise OracleLimitError(f"exact solver refuses n={n} (limit {limit})")


def brute_force_mds(g: Graph, limit: int = ORACLE_LIMIT) -> VertexSet:
    """A minimum dominating set."""
    _check_size(g.n, limit)
    cons = [(1 << v) | sum(1 << u for u in nb) for v, nb in enumerate(g.adj)]
    return VertexSet.of(_bits(min_hitting_set(cons)), SetKind.DOMINATING)


def brute_force_mtds(g: Graph, limit: int = ORACLE_LIMIT) -> VertexSet:
    """A minimum total dominating set; raises if ``g`` has an isolated vertex."""
    _check_size(g.n, limit)
    if g.has_isolated():
        raise InfeasibleError("total domination undefined with isolated vertices",
                              g.isolated().tolist())
    cons = [sum(1 << u for u in nb) for nb in g.adj]
    return VertexSet.of(_bits(min_hitting_set(cons)), SetKind.TOTAL_DOMINATING)


def brute_force_mvc(h: LoopMultigraph, limit: int = ORACLE_LIMIT) -> VertexSet:
    """A minimum vertex cover; a loop forces its vertex into the cover."""
    _check_size(h.n, limit)
    cons = [(1 << u) | (1 << v) for u, v in h.edges.tolist()]
    return VertexSet.of(_bits(min_hitting_set(cons)), SetKind.VERTEX_COVER)


def brute_force_set_cover(n_elements: int, subsets: list[list[int]],
                          limit: int = ORACLE_LIMIT) -> list[int]:
    """Indices of a minimum family of subsets covering ``range(n_elements)``."""
    _check_size(len(subsets), limit)
    cons = [0] * n_elements
    for j, members in enumerate(subsets):
        for a in members:
            cons[a] |= 1 << j
    if not all(cons):
        raise InfeasibleError("some element lies in no subset")
    return list(_bits(min_hitting_set(cons)))
