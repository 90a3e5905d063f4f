"""Applications of the marking / derived-graph machinery: set cover,
distance-k domination, restricted dominators and local repair after a
vertex is added or removed."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _segments
from .cover import CoverLike, resolve
from .errors import InfeasibleError, ParseError, PreconditionError
from .graph import (Graph, LoopMultigraph, Pools, SetKind, VertexSet, ball,
                    is_total_dominating, power_graph, within_distance)
from .marking import DEFAULT_M, MarkState, Scope, alg2, count_marks, mark_rounds
from .rng import RngPolicy

DEFAULT_POWER_EDGE_LIMIT = 20_000_000


@dataclass(frozen=True)
class SetCoverInstance:
    n_elements: int
    subsets: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, n_elements: int, subsets) -> "SetCoverInstance":
        subs = tuple(tuple(sorted(set(int(a) for a in s))) for s in subsets)
        for j, s in enumerate(subs):
            if s and (s[0] < 0 or s[-1] >= n_elements):
                raise ValueError(f"subset {j} holds an element outside [0, {n_elements})")
        return cls(n_elements, subs)

    @cached_property
    def incidence(self) -> Pools:
        """Subsets containing each element."""
        rows: list[list[int]] = [[] for _ in range(self.n_elements)]
        for j, s in enumerate(self.subsets):
            for a in s:
                rows[a].append(j)
        return Pools.from_lists(rows)

    def uncovered(self) -> np.ndarray:
        return np.flatnonzero(self.incidence.sizes == 0)

    def covers(self, chosen) -> bool:
        hit = np.zeros(self.n_elements, dtype=bool)
        for j in chosen:
            hit[list(self.subsets[j])] = True
        return bool(hit.all())


def load_set_cover(source) -> SetCoverInstance:
    """First line ``n_elements n_subsets``; then one line of 0-based element
    ids per subset (a blank line is an empty subset)."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    else:
        lines = source.read().splitlines()
        lines = [ln.decode() if isinstance(ln, bytes) else ln for ln in lines]
    if not lines:
        raise ParseError("empty set-cover file")
    head = lines[0].split()
    try:
        n_el, n_sub = int(head[0]), int(head[1])
    except (ValueError, IndexError):
        raise ParseError("header must be 'n_elements n_subsets'", 1) from None
    body = lines[1:1 + n_sub]
    if len(body) < n_sub:
        raise ParseError(f"expected {n_sub} subset lines, found {len(body)}")
    subsets = []
    for i, line in enumerate(body, start=2):
        try:
            subsets.append([int(t) for t in line.split()])
        except ValueError:
            raise ParseError("malformed element id", i) from None
    try:
        return SetCoverInstance.of(n_el, subsets)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


@dataclass
class SetCoverResult:
    chosen: tuple[int, ...]
    cover: tuple[int, ...]
    marked: tuple[int, ...]
    x: np.ndarray = field(repr=False)


def run_set_cover(inst: SetCoverInstance, m: int = DEFAULT_M,
                  rng: RngPolicy | None = None, vc: CoverLike = None) -> SetCoverResult:
    bad = inst.uncovered()
    if bad.size:
        raise InfeasibleError(f"elements {bad[:10].tolist()} lie in no subset", bad.tolist())
    rng = rng or RngPolicy()
    n_sub = len(inst.subsets)
    r = rng.distinct_uniform("setcover.r", n_sub)
    size = np.array([len(s) for s in inst.subsets], dtype=np.int64)
    pools = inst.incidence
    _, x, _ = mark_rounds(pools, size + r, r, m)
    first, second, count = _segments.top_two(pools, x + r, x > 0)
    second = np.where(count == 1, first, second)
    h = LoopMultigraph.from_pairs(n_sub, first, second)
    cover = resolve(vc)(h).members
    marked = tuple(np.flatnonzero(x > 0).tolist())
    chosen = cover if len(cover) <= len(marked) else marked
    return SetCoverResult(tuple(chosen), tuple(cover), marked, x)


def set_cover(inst: SetCoverInstance, m: int = DEFAULT_M, rng: RngPolicy | None = None,
              vc: CoverLike = None) -> tuple[int, ...]:
    """Indices of subsets covering every element."""
    return run_set_cover(inst, m, rng, vc).chosen


def bounded_power_graph(g: Graph, k: int, max_edges: int = DEFAULT_POWER_EDGE_LIMIT) -> Graph:
    """:func:`power_graph` that refuses once the running edge count passes
    ``max_edges``."""
    if k > 1:
        total = 0
        for v in range(g.n):
            total += len(ball(g, v, k)) - 1
            if total > 2 * max_edges:
                raise PreconditionError(
                    f"G^{k} has more than {max_edges} edges; raise the limit to proceed")
    return power_graph(g, k)


def k_dominating(g: Graph, k: int, m: int = DEFAULT_M, rng: RngPolicy | None = None,
                 vc: CoverLike = None, scope: Scope = Scope.CLOSED,
                 max_edges: int = DEFAULT_POWER_EDGE_LIMIT) -> VertexSet:
    """Every vertex lies within distance ``k`` of the result (OPEN scope:
    every vertex has a result member at distance 1..k)."""
    if k < 1:
        raise PreconditionError("k must be >= 1")
    gk = bounded_power_graph(g, k, max_edges)
    result = alg2(gk, m, rng, scope, vc)
    ok = is_total_dominating(gk, result) if scope is Scope.OPEN \
        else bool(within_distance(g, result, k).all())
    if not ok:
        raise AssertionError("k-domination check failed")
    return result


def _constraint_pools(g: Graph, constraints) -> Pools:
    rows = [sorted(set(int(u) for u in a)) for a in constraints]
    if len(rows) != g.n:
        raise PreconditionError(f"need one constraint list per vertex, got {len(rows)}")
    adj = g.adj
    for v, row in enumerate(rows):
        if not row:
            raise InfeasibleError(f"vertex {v} has an empty allowed-dominator set", [v])
        allowed = set(adj[v])
        allowed.add(v)
        stray = [u for u in row if u not in allowed]
        if stray:
            raise PreconditionError(f"allowed dominators {stray} of vertex {v} are not "
                                    f"in its closed neighbourhood")
    return Pools.from_lists(rows)


def constrained_alg1(g: Graph, constraints, m: int = DEFAULT_M,
                     rng: RngPolicy | None = None) -> VertexSet:
    """Marking where vertex ``v`` may only mark members of ``constraints[v]``."""
    _, state = constrained_marking(g, constraints, m, rng)
    return state.marked_set(SetKind.DOMINATING)


def constrained_marking(g: Graph, constraints, m: int = DEFAULT_M,
                        rng: RngPolicy | None = None) -> tuple[Pools, MarkState]:
    pools = _constraint_pools(g, constraints)
    rng = rng or RngPolicy()
    r = rng.distinct_uniform("alg1.r", g.n)
    history, x, w = mark_rounds(pools, g.degree + r, r, m)
    return pools, MarkState(r=r, w=w, x=x, history=history, m=m, seed=rng.seed)


def constrained_alg2(g: Graph, constraints, m: int = DEFAULT_M,
                     rng: RngPolicy | None = None, vc: CoverLike = None) -> VertexSet:
    """Cover refinement restricted to the same allowed sets."""
    pools, state = constrained_marking(g, constraints, m, rng)
    first, second, count = _segments.top_two(pools, state.x + state.r, state.x > 0)
    h = LoopMultigraph.from_pairs(g.n, first, np.where(count == 1, first, second))
    cover = resolve(vc)(h)
    marked = state.marked_set(SetKind.DOMINATING)
    return VertexSet((cover if len(cover) <= len(marked) else marked).members,
                     SetKind.DOMINATING)


def satisfies_constraints(g: Graph, constraints, s) -> bool:
    chosen = set(VertexSet.of(s, SetKind.DOMINATING))
    return all(any(u in chosen for u in a) for a in constraints)


def _repair(g: Graph, r: np.ndarray, frozen: list[np.ndarray], region: np.ndarray,
            scope: Scope, m: int, seed) -> MarkState:
    """Re-run the marking recurrence for voters in ``region`` only; other
    voters replay their recorded targets."""
    full = scope.pools(g)
    voters = np.flatnonzero(region)
    rows = [full.members[full.offsets[v]:full.offsets[v + 1]] for v in voters]
    sub_offsets = np.zeros(len(voters) + 1, dtype=np.int64)
    np.cumsum([len(row) for row in rows], out=sub_offsets[1:])
    sub = Pools(sub_offsets, np.concatenate(rows) if rows else np.zeros(0, np.int64))

    history = []
    w = g.degree + r
    x = None
    for t in range(m + 1):
        if t:
            w = x + r
        targets = frozen[t].copy()
        targets[voters] = _segments.argmax(sub, w)
        history.append(targets)
        x = count_marks(targets, g.n)
    infeasible = tuple(np.flatnonzero(history[-1] < 0).tolist())
    return MarkState(r=r, w=w, x=x, history=history, scope=scope, m=m, seed=seed,
                     infeasible=infeasible)


def _fresh_r(state: MarkState, index: int) -> float:
    rng = RngPolicy(state.seed or 0)
    taken = set(state.r.tolist())
    attempt = 0
    while True:
        value = rng.uniform_at("alg1.r", index, attempt)
        if value not in taken:
            return value
        attempt += 1


def dynamic_add_vertex(g: Graph, state: MarkState, neighbors) -> tuple[Graph, MarkState]:
    """Append vertex ``g.n`` joined to ``neighbors`` and repair the marks
    within two hops of it."""
    v = g.n
    nbrs = sorted(set(int(u) for u in neighbors))
    if any(u < 0 or u >= g.n for u in nbrs):
        raise PreconditionError("new vertex attached to a non-existent vertex")
    edges = np.concatenate([g.edges(), np.array([(u, v) for u in nbrs], dtype=np.int64).reshape(-1, 2)])
    new = Graph.from_edges(g.n + 1, edges)
    r = np.append(state.r, _fresh_r(state, v))
    frozen = [np.append(t, -1) for t in state.history]
    region = np.zeros(new.n, dtype=bool)
    region[list(ball(new, v, 2))] = True
    return new, _repair(new, r, frozen, region, state.scope, state.m, state.seed)


def dynamic_remove_vertex(g: Graph, state: MarkState, v: int) -> tuple[Graph, MarkState]:
    """Delete ``v`` (ids above it shift down by one) and repair the marks
    that lay within two hops of it."""
    if not 0 <= v < g.n:
        raise PreconditionError(f"no vertex {v}")
    keep = np.ones(g.n, dtype=bool)
    keep[v] = False
    old_region = np.zeros(g.n, dtype=bool)
    old_region[list(ball(g, v, 2))] = True

    relabel = np.cumsum(keep) - 1
    e = g.edges()
    e = e[(e[:, 0] != v) & (e[:, 1] != v)]
    new = Graph.from_edges(g.n - 1, relabel[e] if e.size else e)

    def shift(t):
        t = t[keep].copy()
        t[t > v] -= 1
        return t

    frozen = [shift(t) for t in state.history]
    return new, _repair(new, state.r[keep], frozen, old_region[keep],
                        state.scope, state.m, state.seed)
