import io

import numpy as np
import pytest

from domcover.errors import InfeasibleError, ParseError, PreconditionError
from domcover.extensions import (SetCoverInstance, bounded_power_graph, constrained_alg1,
                                 constrained_alg2, dynamic_add_vertex, dynamic_remove_vertex,
                                 k_dominating, load_set_cover, run_set_cover,
                                 satisfies_constraints, set_cover)
from domcover.graph import (Graph, ball, cycle, is_dominating, is_total_dominating, path,
                            power_graph, star, within_distance)
from domcover.marking import Scope, alg1, alg2
from domcover.oracles import brute_force_mds, brute_force_set_cover
from domcover.rng import RngPolicy

from conftest import random_graph


def random_instance(gen, n_el, n_sub):
    subsets = [np.flatnonzero(gen.random(n_el) < gen.uniform(0.05, 0.5)).tolist()
               for _ in range(n_sub)]
    for a in range(n_el):
        if not any(a in s for s in subsets):
            subsets[int(gen.integers(n_sub))].append(a)
    return SetCoverInstance.of(n_el, subsets)


class TestSetCover:
    def test_single_full_subset(self):
        inst = SetCoverInstance.of(4, [[0, 1, 2, 3], [0], [1, 2]])
        assert set_cover(inst, rng=RngPolicy(1)) == (0,)

    def test_small_example(self):
        inst = SetCoverInstance.of(3, [[0, 1], [1, 2], [2]])
        assert len(brute_force_set_cover(3, [list(s) for s in inst.subsets])) == 2
        for seed in range(20):
            out = set_cover(inst, rng=RngPolicy(seed), vc="exact")
            assert len(out) == 2 and inst.covers(out)

    def test_partition(self):
        inst = SetCoverInstance.of(6, [[0, 1], [2], [3, 4, 5]])
        assert set_cover(inst) == (0, 1, 2)

    def test_infeasible(self):
        with pytest.raises(InfeasibleError):
            set_cover(SetCoverInstance.of(3, [[0], [1]]))

    def test_random_instances_cover(self, gen):
        for i in range(200):
            inst = random_instance(gen, int(gen.integers(1, 40)), int(gen.integers(1, 20)))
            out = run_set_cover(inst, 5, RngPolicy(i))
            assert inst.covers(out.chosen) and len(out.chosen) <= len(out.marked)

    def test_file_format(self, tmp_path):
        p = tmp_path / "inst.sc"
        p.write_text("3 3\n0 1\n1 2\n2\n")
        inst = load_set_cover(p)
        assert inst.subsets == ((0, 1), (1, 2), (2,))
        with pytest.raises(ParseError):
            load_set_cover(io.StringIO("3 2\n0 1\n"))
        with pytest.raises(ParseError):
            load_set_cover(io.StringIO("2 1\n0 5\n"))


class TestKDominating:
    def test_p5_k2(self):
        assert k_dominating(path(5), 2, rng=RngPolicy(0)).members == (2,)

    def test_k1_identity(self, gen):
        for i in range(10):
            g = random_graph(gen, 5, 60)
            assert k_dominating(g, 1, rng=RngPolicy(i)) == alg2(g, rng=RngPolicy(i))

    def test_c10_k2_exact(self):
        assert len(brute_force_mds(power_graph(cycle(10), 2))) == 2
        sizes = []
        for seed in range(10):
            out = k_dominating(cycle(10), 2, rng=RngPolicy(seed), vc="exact")
            assert within_distance(cycle(10), out, 2).all()
            sizes.append(len(out))
        # randomised: optimum reached on some seeds, never beaten
        assert min(sizes) == 2 and all(s >= 2 for s in sizes)
        assert len(k_dominating(cycle(10), 2, rng=RngPolicy(2), vc="exact")) == 2

    def test_distance_check_by_bfs(self, gen):
        for i in range(30):
            g = random_graph(gen, 5, 80, 0.02, 0.1)
            k = int(gen.integers(1, 4))
            out = set(k_dominating(g, k, rng=RngPolicy(i)))
            for v in range(g.n):
                if v not in out:
                    assert out & set(ball(g, v, k))

    def test_open_scope(self):
        out = k_dominating(cycle(9), 2, rng=RngPolicy(1), scope=Scope.OPEN)
        assert is_total_dominating(power_graph(cycle(9), 2), out)

    def test_edge_limit(self):
        with pytest.raises(PreconditionError):
            bounded_power_graph(path(50), 10, max_edges=100)


class TestConstrained:
    def test_vacuous_constraint_is_open_alg1(self, gen):
        for i in range(20):
            g = random_graph(gen, 5, 60, 0.1, 0.4)
            if g.has_isolated():
                continue
            got = constrained_alg1(g, g.adj, 5, RngPolicy(i))
            assert got.members == alg1(g, 5, RngPolicy(i), Scope.OPEN)[0].members

    def test_star_leaves_pinned_to_centre(self):
        g = star(4)
        rng = RngPolicy(3)
        constraints = [[1, 2, 3, 4]] + [[0]] * 4
        out = constrained_alg1(g, constraints, 5, rng)
        r = rng.distinct_uniform("alg1.r", g.n)
        leaf = 1 + int(np.argmax(r[1:]))
        assert out.members == (0, leaf)

    def test_respects_constraints(self, gen):
        for i in range(40):
            g = random_graph(gen, 5, 60, 0.1, 0.4)
            constraints = []
            for v in range(g.n):
                pool = g.adj[v] + [v]
                keep = [u for u in pool if gen.random() < 0.5] or [pool[0]]
                constraints.append(keep)
            for fn in (constrained_alg1, constrained_alg2):
                out = fn(g, constraints, 5, RngPolicy(i))
                assert satisfies_constraints(g, constraints, out)

    def test_empty_allowed_set(self):
        with pytest.raises(InfeasibleError) as info:
            constrained_alg1(path(3), [[1], [], [1]])
        assert info.value.vertices == (1,)

    def test_stray_dominator(self):
        with pytest.raises(PreconditionError):
            constrained_alg1(path(3), [[2], [1], [1]])


def reference_repair(g, r, frozen, region, m):
    """Per-vertex region recurrence (closed scope)."""
    n = g.n
    pools = [sorted(g.adj[v] + [v]) for v in range(n)]
    w = [g.degree[v] + r[v] for v in range(n)]
    hist = []
    for t in range(m + 1):
        targets = list(frozen[t])
        for v in range(n):
            if region[v]:
                targets[v] = max(pools[v], key=lambda u: (w[u], -u))
        x = [0] * n
        for tv in targets:
            x[tv] += 1
        w = [x[v] + r[v] for v in range(n)]
        hist.append(targets)
    return hist


class TestDynamic:
    def test_add_isolated(self):
        g = cycle(6)
        _, st = alg1(g, 5, RngPolicy(1))
        g2, st2 = dynamic_add_vertex(g, st, [])
        assert g2.n == 7 and st2.targets[6] == 6
        assert np.array_equal(st2.targets[:6], st.targets)

    def test_remove_leaf_from_star(self):
        g = star(5)
        _, st = alg1(g, 5, RngPolicy(1))
        g2, st2 = dynamic_remove_vertex(g, st, 5)
        assert st2.targets.tolist() == [0] * 5
        assert st2.marked_set().members == (0,)

    def test_random_edit_sequence(self, gen):
        g = random_graph(gen, 100, 100, 0.02, 0.05)
        _, st = alg1(g, 5, RngPolicy(11))
        for step in range(100):
            if step % 2 == 0 or g.n < 10:
                v = g.n
                g2, st2 = dynamic_add_vertex(g, st, np.flatnonzero(gen.random(g.n) < 0.03))
                region_ids = set(ball(g2, v, 2))
                old_id = {u: u for u in range(g.n)}
                relabel = lambda t: t  # noqa: E731
            else:
                v = int(gen.integers(g.n))
                g2, st2 = dynamic_remove_vertex(g, st, v)
                region_ids = {u - (u > v) for u in ball(g, v, 2) if u != v}
                old_id = {u - (u > v): u for u in range(g.n) if u != v}
                relabel = lambda t, v=v: t - (t > v)  # noqa: E731
            assert is_dominating(g2, st2.marked_set())
            assert st2.x.sum() == g2.n
            # locality: every round's target outside the 2-hop ball is untouched
            for u in set(range(g2.n)) - region_ids:
                for t in range(st.m + 1):
                    assert st2.history[t][u] == relabel(st.history[t][old_id[u]])
            region = np.zeros(g2.n, dtype=bool)
            region[list(region_ids)] = True
            ref = reference_repair(g2, st2.r.tolist(), [h.tolist() for h in st2.history],
                                   region, st.m)
            assert [h.tolist() for h in st2.history] == ref
            g, st = g2, st2

    def test_open_scope_isolation_flagged(self):
        g = path(3)
        _, st = alg1(g, 5, RngPolicy(0), Scope.OPEN)
        g2, st2 = dynamic_remove_vertex(g, st, 1)
        assert st2.infeasible == (0, 1)
