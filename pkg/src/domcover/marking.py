"""Mark-counting dominating-set algorithms and their cover-based refinement.

Every vertex marks the heaviest candidate of its pool.  The first round
weighs candidates by degree; each re-marking round weighs them by how
often they were marked in the previous round.  Random fractional parts
in (0, 1) break ties between equal integer weights.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field

import numpy as np

from . import _segments
from .cover import CoverLike, resolve
from .errors import InfeasibleError, InvariantError, PreconditionError
from .graph import (Graph, LoopMultigraph, Pools, SetKind, VertexSet,
                    is_dominating, is_total_dominating)
from .construct import build_g_dprime, build_g_prime, two_sets_pair
from .rng import RngPolicy

log = logging.getLogger(__name__)

DEFAULT_M = 5


class Scope(enum.Enum):
    CLOSED = "closed"   # candidates N(v) ∪ {v}
    OPEN = "open"       # candidates N(v)

    def pools(self, g: Graph) -> Pools:
        return g.closed_pools if self is Scope.CLOSED else g.open_pools

    @property
    def kind(self) -> SetKind:
        return SetKind.DOMINATING if self is Scope.CLOSED else SetKind.TOTAL_DOMINATING


@dataclass
class MarkState:
    """Outcome of the marking rounds.

    ``history[t]`` is the mark target of every voter in round ``t``
    (round 0 is the degree-weighted one), so ``targets`` is
    ``history[-1]``.  ``x`` counts marks received in the last round and
    ``w`` is the weight vector that round used.  A target of -1 means the
    voter had no candidate; such voters are listed in ``infeasible``.
    """

    r: np.ndarray
    w: np.ndarray
    x: np.ndarray
    history: list[np.ndarray]
    scope: Scope = Scope.CLOSED
    m: int = DEFAULT_M
    seed: int | None = None
    infeasible: tuple[int, ...] = field(default=())

    @property
    def targets(self) -> np.ndarray:
        return self.history[-1]

    @property
    def marked(self) -> np.ndarray:
        return self.x > 0

    def marked_set(self, kind: SetKind | None = None) -> VertexSet:
        return VertexSet.of(self.marked, kind or self.scope.kind)


def count_marks(targets: np.ndarray, n: int) -> np.ndarray:
    return np.bincount(targets[targets >= 0], minlength=n)


def mark_rounds(pools: Pools, first_weight: np.ndarray, r: np.ndarray, m: int):
    """Run one degree-style round then ``m`` re-marking rounds.

    ``pools`` lists the candidates of each voter; candidate ids index
    ``first_weight`` and ``r``.  Returns ``(history, x, w)``.
    """
    n_targets = len(r)
    w = first_weight
    targets = _segments.argmax(pools, w)
    history = [targets]
    x = count_marks(targets, n_targets)
    for _ in range(m):
        w = x + r
        targets = _segments.argmax(pools, w)
        history.append(targets)
        x = count_marks(targets, n_targets)
    return history, x, w


def _require_no_isolated(g: Graph, what: str) -> None:
    if g.has_isolated():
        raise InfeasibleError(f"{what} needs a graph without isolated vertices",
                              g.isolated().tolist())


def alg1(g: Graph, m: int = DEFAULT_M, rng: RngPolicy | None = None,
         scope: Scope = Scope.CLOSED) -> tuple[VertexSet, MarkState]:
    """Marking algorithm.  CLOSED scope yields a dominating set; OPEN scope
    (each vertex marks a neighbour) yields a total dominating set."""
    if m < 0:
        raise PreconditionError("m must be non-negative")
    if scope is Scope.OPEN:
        _require_no_isolated(g, "open-scope marking")
    rng = rng or RngPolicy()
    r = rng.distinct_uniform("alg1.r", g.n)
    history, x, w = mark_rounds(scope.pools(g), g.degree + r, r, m)
    state = MarkState(r=r, w=w, x=x, history=history, scope=scope, m=m, seed=rng.seed)
    return state.marked_set(), state


def _marked_pairs(pools: Pools, state: MarkState):
    key = state.x + state.r
    first, second, count = _segments.top_two(pools, key, state.x > 0)
    if np.any(count == 0):
        bad = np.flatnonzero(count == 0)
        raise InvariantError(f"no marked candidate in the pool of vertices {bad[:10].tolist()}")
    second = np.where(count == 1, first, second)
    return first, second


def build_g1_dprime(g: Graph, state: MarkState, scope: Scope | None = None) -> LoopMultigraph:
    """Derived graph joining, for every vertex, the two marked candidates of
    its pool with the largest ``x + r``; a loop when only one is marked."""
    scope = scope or state.scope
    a, b = _marked_pairs(scope.pools(g), state)
    return LoopMultigraph.from_pairs(g.n, a, b)


@dataclass
class Alg2Result:
    result: VertexSet
    cover: VertexSet
    marked: VertexSet
    state: MarkState
    derived: LoopMultigraph

    @property
    def cap_engaged(self) -> bool:
        """True when the cover was larger than the marked set and got replaced."""
        return len(self.cover) > len(self.marked)


def run_alg2(g: Graph, m: int = DEFAULT_M, rng: RngPolicy | None = None,
             mark_scope: Scope = Scope.CLOSED, pool_scope: Scope | None = None,
             vc: CoverLike = None) -> Alg2Result:
    """Marking followed by a cover of the mark-derived graph.

    The returned set is the smaller of the cover and the marked set, with
    the cover preferred on equal size.  Its kind follows ``pool_scope``.
    The OPEN-scope marked set also totally dominates, so the cap never
    weakens the guarantee.
    """
    pool_scope = pool_scope or mark_scope
    _, state = alg1(g, m, rng, mark_scope)
    h = build_g1_dprime(g, state, pool_scope)
    cover = resolve(vc)(h)
    marked = state.marked_set(pool_scope.kind)
    chosen = cover if len(cover) <= len(marked) else marked
    out = Alg2Result(VertexSet(chosen.members, pool_scope.kind), cover, marked, state, h)
    if out.cap_engaged:
        log.debug("cover of size %d replaced by marked set of size %d",
                  len(cover), len(marked))
    return out


def alg2(g: Graph, m: int = DEFAULT_M, rng: RngPolicy | None = None,
         scope: Scope = Scope.CLOSED, vc: CoverLike = None) -> VertexSet:
    return run_alg2(g, m, rng, scope, scope, vc).result


def mod1(g: Graph, m: int = DEFAULT_M, rng: RngPolicy | None = None,
         vc: CoverLike = None) -> VertexSet:
    """Open-neighbourhood marking and open-neighbourhood pairs: a total
    dominating set."""
    _require_no_isolated(g, "mod1")
    return run_alg2(g, m, rng, Scope.OPEN, Scope.OPEN, vc).result


def mod2(g: Graph, m: int = DEFAULT_M, rng: RngPolicy | None = None,
         vc: CoverLike = None) -> VertexSet:
    """Open-neighbourhood marking, closed-neighbourhood pairs: a dominating set."""
    _require_no_isolated(g, "mod2")
    return run_alg2(g, m, rng, Scope.OPEN, Scope.CLOSED, vc).result


def combine_solutions(g: Graph, s1, s2, mode: SetKind = SetKind.DOMINATING,
                      vc: CoverLike = None) -> VertexSet:
    """Merge two (total) dominating sets through a derived graph whose every
    edge has one end in each; returns the smallest of the cover, ``s1`` and
    ``s2``."""
    s1 = VertexSet.of(s1, mode)
    s2 = VertexSet.of(s2, mode)
    total = mode is SetKind.TOTAL_DOMINATING
    check = is_total_dominating if total else is_dominating
    if total:
        _require_no_isolated(g, "total-domination combining")
    for name, s in (("s1", s1), ("s2", s2)):
        if not check(g, s):
            raise PreconditionError(f"{name} is not a valid {mode.value} of the graph")
    chooser = two_sets_pair(s1, s2)
    h = build_g_prime(g, chooser) if total else build_g_dprime(g, chooser)
    cover = VertexSet(resolve(vc)(h).members, mode)
    return min((cover, s1, s2), key=len)
