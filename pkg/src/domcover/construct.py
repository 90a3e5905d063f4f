"""Derived multigraphs whose vertex covers are (total) dominating sets,
plus the random-priority independent set run on them.

For every vertex ``v`` the *corresponding edge* joins two candidates from
``v``'s pool: ``N(v)`` for the total-domination graph, ``N(v) ∪ {v}`` for
the plain one.  Any cover of the result therefore meets every pool.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from . import _segments
from .errors import InfeasibleError
from .graph import Graph, LoopMultigraph, Pools, SetKind, VertexSet
from .rng import RngPolicy

# (graph, pools) -> (a, b) per vertex; a == b encodes a loop.
Chooser = Callable[[Graph, Pools], "tuple[np.ndarray, np.ndarray]"]


def random_pair(rng: RngPolicy, tag: str = "pair") -> Chooser:
    """Uniformly random distinct pair from each pool (the default chooser)."""

    def choose(g: Graph, pools: Pools):
        size = pools.sizes
        if not pools.members.size:
            return np.zeros(pools.count, np.int64), np.zeros(pools.count, np.int64)
        u1 = rng.uniform(tag + ".a", pools.count)
        u2 = rng.uniform(tag + ".b", pools.count)
        i1 = np.minimum((u1 * size).astype(np.int64), size - 1)
        i2 = np.minimum((u2 * (size - 1)).astype(np.int64), size - 2)
        i2 += i2 >= i1
        # singleton pools are overwritten by the builder; clip keeps indices valid
        last = pools.members.size - 1
        start = pools.offsets[:-1]
        a = pools.members[np.minimum(start + i1, last)]
        b = pools.members[np.minimum(start + i2, last)]
        return a, b

    return choose


def first_pair(g: Graph, pools: Pools):
    """The two smallest ids of each pool."""
    start = pools.offsets[:-1]
    if not pools.members.size:
        return start, start
    last = pools.members.size - 1
    return pools.members[np.minimum(start, last)], pools.members[np.minimum(start + 1, last)]


def max_degree_pair(g: Graph, pools: Pools):
    """The two highest-degree candidates of each pool (smaller id on ties)."""
    everyone = np.ones(g.n, dtype=bool)
    a, b, _ = _segments.top_two(pools, g.degree.astype(np.float64), everyone)
    return a, b


def anchored_pair(s) -> Chooser:
    """Pair whose first endpoint lies in ``s`` (smallest such id) and whose
    second is the smallest other candidate.  Every edge then touches ``s``,
    so ``s`` covers the derived graph."""

    def choose(g: Graph, pools: Pools):
        mask = VertexSet.of(s, SetKind.DOMINATING).mask(g.n)
        a = _segments.smallest_in(pools, mask)
        if np.any(a < 0):
            raise InfeasibleError("anchor set misses some pool",
                                  np.flatnonzero(a < 0).tolist())
        b = _segments.smallest_in(pools, np.ones(g.n, dtype=bool), exclude=a)
        return a, np.where(b < 0, a, b)

    return choose


def two_sets_pair(s1, s2) -> Chooser:
    """One endpoint from ``s1`` and one from ``s2``; a loop only when the
    sole ``s2`` candidate equals the ``s1`` one."""

    def choose(g: Graph, pools: Pools):
        m1 = VertexSet.of(s1, SetKind.DOMINATING).mask(g.n)
        m2 = VertexSet.of(s2, SetKind.DOMINATING).mask(g.n)
        a = _segments.smallest_in(pools, m1)
        b = _segments.smallest_in(pools, m2, exclude=a)
        b_any = _segments.smallest_in(pools, m2)
        if np.any(a < 0) or np.any(b_any < 0):
            raise InfeasibleError("an input set misses some pool",
                                  np.flatnonzero((a < 0) | (b_any < 0)).tolist())
        return a, np.where(b < 0, b_any, b)

    return choose


CHOOSERS = {"first": first_pair, "max-degree": max_degree_pair}


def _assemble(g: Graph, pools: Pools, chooser: Chooser) -> LoopMultigraph:
    a, b = chooser(g, pools)
    a = np.asarray(a, dtype=np.int64).copy()
    b = np.asarray(b, dtype=np.int64).copy()
    single = pools.sizes == 1
    if single.any():
        sole = pools.members[pools.offsets[:-1][single]]
        a[single] = sole
        b[single] = sole
    return LoopMultigraph.from_pairs(g.n, a, b)


def build_g_prime(g: Graph, chooser: Chooser | None = None,
                  rng: RngPolicy | None = None) -> LoopMultigraph:
    """Total-domination derived graph: each ``e_v`` joins two neighbours of
    ``v``; a degree-one vertex puts a loop on its neighbour."""
    if g.has_isolated():
        raise InfeasibleError("isolated vertex: total domination undefined",
                              g.isolated().tolist())
    chooser = chooser or random_pair(rng or RngPolicy())
    return _assemble(g, g.open_pools, chooser)


def build_g_dprime(g: Graph, chooser: Chooser | None = None,
                   rng: RngPolicy | None = None) -> LoopMultigraph:
    """Plain-domination derived graph over closed neighbourhoods; an
    isolated vertex gets a loop on itself."""
    chooser = chooser or random_pair(rng or RngPolicy())
    return _assemble(g, g.closed_pools, chooser)


def alon_spencer_is(h: LoopMultigraph, rng: RngPolicy, tag: str = "is") -> VertexSet:
    """Vertices whose random priority beats every multigraph neighbour.

    A looped vertex is never selected.  Equal priorities favour the
    smaller id.
    """
    value = rng.distinct_uniform(tag, h.n)
    keep = ~h.loop_mask
    e = h.proper_edges
    if e.size:
        u, v = e[:, 0], e[:, 1]
        # u < v, so on a tie u wins and v loses
        u_loses = value[u] < value[v]
        keep[np.where(u_loses, u, v)] = False
    return VertexSet.of(keep, SetKind.INDEPENDENT)


def caro_wei_bound(h: LoopMultigraph) -> float:
    """``n - Σ 1/(1 + deg)`` over loop-free vertices: the expected size of
    the complement of :func:`alon_spencer_is`."""
    free = ~h.loop_mask
    return float(h.n - np.sum(1.0 / (1.0 + h.degree[free])))


def _complement(n: int, s: VertexSet, kind: SetKind) -> VertexSet:
    return VertexSet.of(~s.mask(n), kind)


def carowei_tds(g: Graph, rng: RngPolicy) -> VertexSet:
    """Total dominating set: everything outside a random independent set of
    a randomly chosen total-domination derived graph."""
    h = build_g_prime(g, random_pair(rng))
    return _complement(g.n, alon_spencer_is(h, rng), SetKind.TOTAL_DOMINATING)


def carowei_ds(g: Graph, rng: RngPolicy) -> VertexSet:
    """Dominating-set counterpart of :func:`carowei_tds`."""
    h = build_g_dprime(g, random_pair(rng))
    return _complement(g.n, alon_spencer_is(h, rng), SetKind.DOMINATING)
