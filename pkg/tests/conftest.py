from itertools import combinations

import networkx as nx
import numpy as np
import pytest

from domcover.graph import Graph, LoopMultigraph


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges().tolist())
    return h


def from_nx(h: nx.Graph) -> Graph:
    mapping = {v: i for i, v in enumerate(sorted(h.nodes()))}
    return Graph.from_edges(len(mapping), [(mapping[u], mapping[v]) for u, v in h.edges()])


def naive_min(n, ok):
    """Smallest subset (by size, then lexicographic) satisfying ``ok``."""
    for k in range(n + 1):
        for combo in combinations(range(n), k):
            if ok(set(combo)):
                return set(combo)
    return None


def naive_gamma(g: Graph) -> int:
    h = to_nx(g)
    return len(naive_min(g.n, lambda s: nx.is_dominating_set(h, s)))


def naive_gamma_t(g: Graph) -> int:
    adj = g.adj
    return len(naive_min(g.n, lambda s: all(any(u in s for u in adj[v]) for v in range(g.n))))


def naive_beta(h: LoopMultigraph) -> int:
    edges = h.edges.tolist()
    return len(naive_min(h.n, lambda s: all(u in s or v in s for u, v in edges)))


def random_graph(gen: np.random.Generator, n_lo=5, n_hi=200, p_lo=0.02, p_hi=0.5) -> Graph:
    n = int(gen.integers(n_lo, n_hi + 1))
    p = float(gen.uniform(p_lo, p_hi))
    iu, ju = np.triu_indices(n, k=1)
    keep = gen.random(iu.size) < p
    return Graph.from_edges(n, np.column_stack([iu[keep], ju[keep]]))


def random_multigraph(gen: np.random.Generator, n: int, n_edges: int, loop_p=0.1) -> LoopMultigraph:
    a = gen.integers(0, n, n_edges)
    b = np.where(gen.random(n_edges) < loop_p, a, gen.integers(0, n, n_edges))
    return LoopMultigraph.from_pairs(n, a, b)


@pytest.fixture
def gen():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def report(criterion: str, ok: bool, detail: str) -> None:
    """Record a one-line verdict for the terminal summary, then assert."""
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
    assert ok, f"{criterion}: {detail}"


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
