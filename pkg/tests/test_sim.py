import io
import json

import pytest

from domcover.construct import carowei_ds, carowei_tds
from domcover.graph import Graph, star
from domcover.marking import Scope, alg1
from domcover.rng import RngPolicy
from domcover.sim import (Broadcast, LocalityError, NodeProgram, alg1_program, carowei_program,
                          payload_bits, run_sync, simulated_set)

from conftest import random_graph


class Echo(NodeProgram):
    """Round 1 sends the node id; later rounds record what arrived."""

    def init(self, node, neighbors, r):
        return {"id": node, "seen": []}

    def on_round(self, state, t, inbox):
        state["seen"].append(dict(inbox))
        if t == 1:
            return state, Broadcast(state["id"]), None
        return state, None, sorted(inbox.values())


def test_echo_single_round():
    g = star(3)
    trace = run_sync(g, Echo(), budget=1)
    assert trace.rounds == 1 and trace.messages == [6]


def test_messages_arrive_next_round_only():
    g = star(3)
    trace = run_sync(g, Echo(), budget=2)
    assert trace.outputs[0] == [1, 2, 3]
    assert trace.outputs[1] == [0]


class Sentinel(NodeProgram):
    """Audits that inbox senders are exactly neighbours that messaged last round."""

    budget = 4

    def init(self, node, neighbors, r):
        return {"node": node, "nbrs": set(neighbors), "bad": []}

    def on_round(self, s, t, inbox):
        expected = s["nbrs"] if t > 1 and (t - 1) % 2 == 1 else set()
        if set(inbox) != expected or any(msg != t - 1 for msg in inbox.values()):
            s["bad"].append(t)
        outbox = Broadcast(t) if t % 2 == 1 else None
        return s, outbox, (s["bad"] or None) if t == self.budget else None


def test_locality_sentinel(gen):
    g = random_graph(gen, 20, 40)
    trace = run_sync(g, Sentinel())
    assert all(out is None for out in trace.outputs)


def test_non_neighbour_message_rejected():
    class Rogue(NodeProgram):
        def on_round(self, s, t, inbox):
            return s, {99: 1}, None

    with pytest.raises(LocalityError):
        run_sync(Graph.from_edges(3, [(0, 1)]), Rogue(), budget=1)


def test_double_output_audited():
    class Chatty(NodeProgram):
        def on_round(self, s, t, inbox):
            return s, None, True

    trace = run_sync(star(2), Chatty(), budget=2)
    assert not trace.audit_passed and "twice" in trace.audit_failures[0]


def test_budget_validation():
    with pytest.raises(ValueError):
        run_sync(star(2), Echo(), budget=0)


def test_payload_bits():
    assert payload_bits(None) == 0
    assert payload_bits(True) == 1
    assert payload_bits(5) == 3
    assert payload_bits(0.5) == 64
    assert payload_bits((7, 0.25)) == 67
    with pytest.raises(TypeError):
        payload_bits("text")


@pytest.mark.parametrize("m", [0, 1, 5])
def test_alg1_program_rounds(m):
    trace = run_sync(star(5), alg1_program(m, RngPolicy(1)))
    assert trace.rounds == 2 * m + 3
    assert simulated_set(trace) == [0]


def test_alg1_equivalence(gen):
    for i in range(50):
        g = random_graph(gen, 2, 60)
        for seed in range(3):
            for scope in (Scope.CLOSED, Scope.OPEN):
                if scope is Scope.OPEN and g.has_isolated():
                    continue
                rng = RngPolicy(seed)
                trace = run_sync(g, alg1_program(5, rng, scope))
                assert simulated_set(trace) == list(alg1(g, 5, rng, scope)[0].members)
                assert trace.audit_passed


def test_carowei_equivalence(gen):
    for i in range(50):
        g = random_graph(gen, 2, 60)
        for seed in range(3):
            rng = RngPolicy(seed)
            trace = run_sync(g, carowei_program(rng))
            assert trace.rounds == 3 and trace.audit_passed
            assert simulated_set(trace) == list(carowei_ds(g, rng).members)
            if not g.has_isolated():
                trace = run_sync(g, carowei_program(rng, total=True))
                assert simulated_set(trace) == list(carowei_tds(g, rng).members)


def test_carowei_edgeless():
    trace = run_sync(Graph.from_edges(4, []), carowei_program(RngPolicy(0)))
    assert simulated_set(trace) == [0, 1, 2, 3]


def test_payload_cap_audit(gen):
    g = random_graph(gen, 30, 30, 0.3, 0.3)
    assert run_sync(g, alg1_program(5, RngPolicy(2))).audit_passed
    low = run_sync(g, alg1_program(5, RngPolicy(2)), payload_cap=64)
    assert not low.audit_passed
    assert simulated_set(low) == list(alg1(g, 5, RngPolicy(2))[0].members)


def test_trace_dump():
    trace = run_sync(star(5), alg1_program(1, RngPolicy(1)))
    buf = io.StringIO()
    trace.dump(buf)
    lines = [json.loads(line) for line in buf.getvalue().splitlines()]
    assert [rec["round"] for rec in lines] == list(range(1, 6))
    assert lines[0]["messages"] == 10
