"""Run records and the algorithm dispatch shared by the CLI and bench."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

from .construct import carowei_ds, carowei_tds
from .cover import CoverSolver, CoverKind
from .extensions import k_dominating, load_set_cover, set_cover
from .graph import (Graph, is_dominating, is_total_dominating, load_edge_list,
                    load_metis, power_graph, within_distance)
from .marking import DEFAULT_M, Scope, alg1, alg2, mod1, mod2
from .rng import RngPolicy

ALGORITHMS = ("alg1", "alg2", "mod1", "mod2", "carowei-ds", "carowei-tds", "kdom", "setcover")
GRAPH_FORMATS = ("edgelist", "metis")
METIS_SUFFIXES = {".graph", ".metis"}
SETCOVER_SUFFIXES = {".sc", ".setcover"}


@dataclass
class RunRecord:
    instance: str
    n: int
    edge_count: int
    algorithm: str
    scope: str
    m: int
    seed: int
    vc: str
    size: int
    rounds: int | None = None
    wall_time_ms: float | None = None
    verified: bool = False
    members: list[int] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self))

    @classmethod
    def from_json(cls, text: str) -> "RunRecord":
        return cls(**json.loads(text))

    @classmethod
    def csv_header(cls) -> list[str]:
        return [f.name for f in dataclasses.fields(cls)]

    def csv_row(self) -> list[str]:
        row = []
        for name in self.csv_header():
            value = getattr(self, name)
            if name == "members":
                value = " ".join(map(str, value))
            elif value is None:
                value = ""
            elif isinstance(value, bool):
                value = "true" if value else "false"
            row.append(str(value))
        return row

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.csv_header())
        writer.writerow(self.csv_row())
        return buf.getvalue()

    @classmethod
    def from_csv_row(cls, row: dict) -> "RunRecord":
        def opt(cast, text):
            return None if text == "" else cast(text)

        return cls(
            instance=row["instance"], n=int(row["n"]), edge_count=int(row["edge_count"]),
            algorithm=row["algorithm"], scope=row["scope"], m=int(row["m"]),
            seed=int(row["seed"]), vc=row["vc"], size=int(row["size"]),
            rounds=opt(int, row["rounds"]), wall_time_ms=opt(float, row["wall_time_ms"]),
            verified=row["verified"] == "true",
            members=[int(t) for t in row["members"].split()],
        )


def detect_format(path: Path) -> str:
    suffix = path.suffix.lower()
    if suffix in SETCOVER_SUFFIXES:
        return "setcover"
    return "metis" if suffix in METIS_SUFFIXES else "edgelist"


def load_graph(path, fmt: str | None = None) -> Graph:
    path = Path(path)
    fmt = fmt or detect_format(path)
    if fmt == "metis":
        return load_metis(path)
    return load_edge_list(path)


def natural_scope(algo: str, scope: Scope) -> str:
    if algo in ("mod1", "carowei-tds"):
        return Scope.OPEN.value
    if algo == "mod2":
        return "open+closed"
    if algo in ("carowei-ds", "setcover"):
        return Scope.CLOSED.value
    return scope.value


def solve(path, algo: str, *, fmt: str | None = None, m: int = DEFAULT_M, seed: int = 0,
          vc: str = "matching", k: int = 1, scope: Scope = Scope.CLOSED,
          timing: bool = True, instance: str | None = None) -> RunRecord:
    """Load one instance, run ``algo`` on it and verify the answer."""
    if algo not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algo!r}")
    rng = RngPolicy(seed)
    solver = CoverSolver(CoverKind(vc))
    path = Path(path)
    name = instance or path.name

    if algo == "setcover":
        inst = load_set_cover(path)
        t0 = time.perf_counter()
        chosen = set_cover(inst, m, rng, solver)
        elapsed = (time.perf_counter() - t0) * 1e3
        return RunRecord(name, inst.n_elements, len(inst.subsets), algo, "closed", m, seed,
                         vc, len(chosen), None, round(elapsed, 3) if timing else None,
                         inst.covers(chosen), list(chosen))

    g = load_graph(path, fmt)
    t0 = time.perf_counter()
    if algo == "alg1":
        result, _ = alg1(g, m, rng, scope)
    elif algo == "alg2":
        result = alg2(g, m, rng, scope, solver)
    elif algo == "mod1":
        result = mod1(g, m, rng, solver)
    elif algo == "mod2":
        result = mod2(g, m, rng, solver)
    elif algo == "carowei-ds":
        result = carowei_ds(g, rng)
    elif algo == "carowei-tds":
        result = carowei_tds(g, rng)
    else:
        result = k_dominating(g, k, m, rng, solver, scope)
    elapsed = (time.perf_counter() - t0) * 1e3

    total = natural_scope(algo, scope) == "open"
    if algo == "kdom":
        verified = (is_total_dominating(power_graph(g, k), result) if total
                    else bool(within_distance(g, result, k).all()))
    else:
        verified = (is_total_dominating if total else is_dominating)(g, result)
    return RunRecord(name, g.n, g.edge_count, algo, natural_scope(algo, scope), m, seed, vc,
                     len(result), None, round(elapsed, 3) if timing else None,
                     bool(verified), list(result.members))
