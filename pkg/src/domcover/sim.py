"""Round-synchronous message-passing executor.

Each node runs the same :class:`NodeProgram`.  In round ``t`` a node sees
only its own state and the messages its neighbours sent in round
``t - 1``; whatever it sends now is delivered at the next barrier.
Message sizes are audited against a fixed bit budget.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from .graph import Graph
from .marking import DEFAULT_M, Scope
from .rng import RngPolicy

DEFAULT_PAYLOAD_CAP = 128


class Broadcast:
    """Outbox shorthand: the same message to every neighbour."""

    __slots__ = ("message",)

    def __init__(self, message):
        self.message = message


def payload_bits(message: Any) -> int:
    """Encoded size: ints by bit length, floats as 64-bit, bools as one bit,
    tuples as the sum of their fields."""
    if message is None:
        return 0
    if isinstance(message, bool):
        return 1
    if isinstance(message, (int, np.integer)):
        return max(1, int(message).bit_length())
    if isinstance(message, (float, np.floating)):
        return 64
    if isinstance(message, (tuple, list)):
        return sum(payload_bits(part) for part in message)
    raise TypeError(f"unsupported message field {type(message).__name__}")


class NodeProgram:
    """Per-node behaviour.

    ``init`` receives the node id, its sorted neighbour ids and the node's
    random value.  ``on_round`` returns ``(state, outbox, output)``; the
    outbox is a mapping neighbour -> message or a :class:`Broadcast`, and a
    non-``None`` output is the node's final answer (declared at most once).
    """

    budget: int = 1

    def random_values(self, n: int) -> np.ndarray:
        return np.zeros(n)

    def init(self, node: int, neighbors: tuple[int, ...], r: float):
        return None

    def on_round(self, state, round_no: int, inbox: Mapping[int, Any]):
        raise NotImplementedError


@dataclass
class RoundTrace:
    rounds: int = 0
    messages: list[int] = field(default_factory=list)
    max_payload: list[int] = field(default_factory=list)
    outputs: list[Any] = field(default_factory=list)
    audit_failures: list[str] = field(default_factory=list)
    payload_cap: int = DEFAULT_PAYLOAD_CAP

    @property
    def max_payload_bits(self) -> int:
        return max(self.max_payload, default=0)

    @property
    def audit_passed(self) -> bool:
        return not self.audit_failures

    def records(self) -> list[dict]:
        return [{"round": t + 1, "messages": c, "max_payload_bits": b}
                for t, (c, b) in enumerate(zip(self.messages, self.max_payload))]

    def dump(self, fh) -> None:
        """One JSON record per round."""
        for rec in self.records():
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


class LocalityError(RuntimeError):
    """A node addressed a message to a vertex that is not its neighbour."""


def run_sync(g: Graph, program: NodeProgram, budget: int | None = None,
             payload_cap: int = DEFAULT_PAYLOAD_CAP) -> RoundTrace:
    """Execute exactly ``budget`` rounds (default: the program's own)."""
    budget = program.budget if budget is None else budget
    if budget < 1:
        raise ValueError("budget must be >= 1")
    adj = [tuple(nb) for nb in g.adj]
    neighbor_sets = [frozenset(nb) for nb in adj]
    r = program.random_values(g.n)
    states = [program.init(v, adj[v], float(r[v])) for v in range(g.n)]
    outputs: list[Any] = [None] * g.n
    declared = [False] * g.n
    trace = RoundTrace(payload_cap=payload_cap)
    inboxes: list[dict] = [{} for _ in range(g.n)]

    for t in range(1, budget + 1):
        pending: list[dict] = [{} for _ in range(g.n)]
        count = 0
        widest = 0
        for v in range(g.n):
            state, outbox, output = program.on_round(states[v], t, inboxes[v])
            states[v] = state
            if output is not None:
                if declared[v]:
                    trace.audit_failures.append(f"round {t}: node {v} declared output twice")
                declared[v] = True
                outputs[v] = output
            if outbox is None:
                continue
            if isinstance(outbox, Broadcast):
                outbox = {u: outbox.message for u in adj[v]}
            for u, msg in outbox.items():
                if u not in neighbor_sets[v]:
                    raise LocalityError(f"round {t}: node {v} addressed non-neighbour {u}")
                bits = payload_bits(msg)
                if bits > payload_cap:
                    trace.audit_failures.append(
                        f"round {t}: {v}->{u} payload {bits} bits exceeds cap {payload_cap}")
                widest = max(widest, bits)
                pending[u][v] = msg
                count += 1
        trace.messages.append(count)
        trace.max_payload.append(widest)
        inboxes = pending
    trace.rounds = budget
    trace.outputs = outputs
    return trace


def _best(candidates) -> int:
    """Id with the largest weight, smaller id on ties."""
    return max(candidates, key=lambda item: (item[1], -item[0]))[0]


@dataclass
class _MarkNode:
    node: int
    neighbors: tuple[int, ...]
    r: float
    x: int = 0
    marks_self: bool = False
    nbr_r: dict = field(default_factory=dict)


class Alg1Program(NodeProgram):
    """Distributed marking.

    Round 1 broadcasts ``(degree, r)``.  Every even round a node marks its
    heaviest candidate and tells only that neighbour.  Every later odd
    round a node counts the marks it got and broadcasts ``(x, r)``; the
    last round only counts.  Total: ``2m + 3`` rounds.
    """

    def __init__(self, m: int = DEFAULT_M, rng: RngPolicy | None = None,
                 scope: Scope = Scope.CLOSED):
        self.m = m
        self.rng = rng or RngPolicy()
        self.scope = scope
        self.budget = 2 * m + 3

    def random_values(self, n):
        return self.rng.distinct_uniform("alg1.r", n)

    def init(self, node, neighbors, r):
        return _MarkNode(node, neighbors, r)

    def _mark(self, s: _MarkNode, own_weight: float, weights: dict):
        cands = list(weights.items())
        if self.scope is Scope.CLOSED:
            cands.append((s.node, own_weight))
        if not cands:
            return s, None, None
        target = _best(cands)
        s.marks_self = target == s.node
        return s, (None if s.marks_self else {target: True}), None

    def on_round(self, s: _MarkNode, t, inbox):
        if t == 1:
            return s, Broadcast((len(s.neighbors), s.r)), None
        if t == 2:
            s.nbr_r = {u: r for u, (_, r) in inbox.items()}
            weights = {u: d + r for u, (d, r) in inbox.items()}
            return self._mark(s, len(s.neighbors) + s.r, weights)
        if t % 2 == 1:
            s.x = len(inbox) + int(s.marks_self)
            if t == self.budget:
                return s, None, s.x > 0
            return s, Broadcast((s.x, s.r)), None
        weights = {u: x + r for u, (x, r) in inbox.items()}
        return self._mark(s, s.x + s.r, weights)


def alg1_program(m: int = DEFAULT_M, rng: RngPolicy | None = None,
                 scope: Scope = Scope.CLOSED) -> Alg1Program:
    return Alg1Program(m, rng, scope)


@dataclass
class _CaroNode:
    node: int
    pool: tuple[int, ...]
    value: float
    partners: list = field(default_factory=list)
    looped: bool = False


class CaroWeiProgram(NodeProgram):
    """Each node picks a random pair from its pool, tells both endpoints who
    their new partner is (with the partner's priority), and joins the
    output unless it beats every partner.  Three rounds."""

    budget = 3

    def __init__(self, rng: RngPolicy | None = None, total: bool = False):
        self.rng = rng or RngPolicy()
        self.total = total

    def random_values(self, n):
        return self.rng.distinct_uniform("is", n)

    def init(self, node, neighbors, r):
        pool = neighbors if self.total else tuple(sorted(neighbors + (node,)))
        return _CaroNode(node, pool, r)

    def _pair(self, s: _CaroNode) -> tuple[int, int]:
        size = len(s.pool)
        if size == 1:
            return s.pool[0], s.pool[0]
        u1 = self.rng.uniform_at("pair.a", s.node)
        u2 = self.rng.uniform_at("pair.b", s.node)
        i1 = min(math.floor(u1 * size), size - 1)
        i2 = min(math.floor(u2 * (size - 1)), size - 2)
        if i2 >= i1:
            i2 += 1
        return s.pool[i1], s.pool[i2]

    def on_round(self, s: _CaroNode, t, inbox):
        if t == 1:
            return s, Broadcast(s.value), None
        if t == 2:
            values = dict(inbox)
            values[s.node] = s.value
            a, b = self._pair(s)
            outbox = {}
            for end, other in ((a, b), (b, a)):
                if end == s.node:
                    if other == s.node:
                        s.looped = True
                    else:
                        s.partners.append((other, values[other]))
                else:
                    outbox[end] = (other, values[other])
            return s, outbox, None
        for other, value in list(inbox.values()):
            if other == s.node:
                s.looped = True
            else:
                s.partners.append((other, value))
        wins = not s.looped and all((s.value, -s.node) > (val, -o) for o, val in s.partners)
        return s, None, not wins


def carowei_program(rng: RngPolicy | None = None, total: bool = False) -> CaroWeiProgram:
    return CaroWeiProgram(rng, total)


def simulated_set(trace: RoundTrace) -> list[int]:
    """Vertices whose declared output is truthy."""
    return [v for v, out in enumerate(trace.outputs) if out]
