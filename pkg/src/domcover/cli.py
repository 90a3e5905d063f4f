"""``domcover`` command line: solve, bench, oracle, simulate."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import statistics
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .construct import carowei_ds, carowei_tds
from .errors import InfeasibleError, OracleLimitError, ParseError, PreconditionError
from .marking import DEFAULT_M, Scope, alg1
from .oracles import ORACLE_LIMIT, brute_force_mds, brute_force_mtds, brute_force_mvc
from .graph import LoopMultigraph
from .records import ALGORITHMS, GRAPH_FORMATS, RunRecord, detect_format, load_graph, solve
from .rng import RngPolicy
from .sim import DEFAULT_PAYLOAD_CAP, alg1_program, carowei_program, run_sync, simulated_set

EXIT_OK = 0
EXIT_UNVERIFIED = 2
EXIT_INFEASIBLE = 3
EXIT_USAGE = 64
EXIT_DATAERR = 65
EXIT_NOINPUT = 66

WORKERS_ENV = "DOMCOVER_WORKERS"

log = logging.getLogger("domcover")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--m", type=int, default=DEFAULT_M, help="re-marking rounds (default 5)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scope", choices=[s.value for s in Scope], default="closed",
                   help="candidate pool for alg1/alg2/kdom")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="domcover", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one instance and print a run record")
    p.add_argument("--input", required=True, type=Path)
    p.add_argument("--format", choices=GRAPH_FORMATS, default=None)
    p.add_argument("--algo", choices=ALGORITHMS, required=True)
    p.add_argument("--vc", choices=["matching", "greedy", "exact"], default="matching")
    p.add_argument("--k", type=int, default=1, help="distance for kdom")
    p.add_argument("--out", choices=["json", "csv"], default="json")
    p.add_argument("--verify", action="store_true", help="exit 2 unless the result verifies")
    p.add_argument("--no-timing", action="store_true", help="emit wall_time_ms as null")
    _common(p)

    p = sub.add_parser("bench", help="sweep a directory of instances")
    p.add_argument("--dir", required=True, type=Path)
    p.add_argument("--algos", default="alg1,alg2",
                   help="comma-separated list from: " + ",".join(ALGORITHMS))
    p.add_argument("--repeat", type=int, default=1, help="seeds per instance (seed, seed+1, ...)")
    p.add_argument("--vc", choices=["matching", "greedy", "exact"], default="matching")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--out", type=Path, default=None, help="CSV path (default stdout)")
    p.add_argument("--jsonl", type=Path, default=None, help="append one JSON row per line")
    p.add_argument("--no-timing", action="store_true")
    _common(p)

    p = sub.add_parser("oracle", help="exact gamma / gamma_t / beta for a small graph")
    p.add_argument("--input", required=True, type=Path)
    p.add_argument("--format", choices=GRAPH_FORMATS, default=None)

    p = sub.add_parser("simulate", help="run a round-synchronous simulation")
    p.add_argument("--input", required=True, type=Path)
    p.add_argument("--format", choices=GRAPH_FORMATS, default=None)
    p.add_argument("--algo", choices=["alg1", "carowei"], required=True)
    p.add_argument("--trace", type=Path, default=None, help="write per-round JSON lines here")
    p.add_argument("--payload-cap", type=int, default=DEFAULT_PAYLOAD_CAP)
    _common(p)
    return parser


def _emit_record(rec: RunRecord, fmt: str) -> None:
    sys.stdout.write(rec.to_csv() if fmt == "csv" else rec.to_json() + "\n")


def cmd_solve(args) -> int:
    rec = solve(args.input, args.algo, fmt=args.format, m=args.m, seed=args.seed, vc=args.vc,
                k=args.k, scope=Scope(args.scope), timing=not args.no_timing)
    _emit_record(rec, args.out)
    if args.verify and not rec.verified:
        print(f"domcover: result for {rec.instance} failed verification", file=sys.stderr)
        return EXIT_UNVERIFIED
    return EXIT_OK


BENCH_COLUMNS = [c for c in RunRecord.csv_header() if c != "members"] + \
    ["repeat", "size_min", "size_mean", "error"]


def _bench_row(task) -> dict:
    path, algo, opts = task
    base = {"instance": path.name, "algorithm": algo, "seed": opts["seed"], "m": opts["m"],
            "vc": opts["vc"], "repeat": opts["repeat"]}
    try:
        runs = [solve(path, algo, m=opts["m"], seed=opts["seed"] + i, vc=opts["vc"],
                      k=opts["k"], scope=Scope(opts["scope"]), timing=opts["timing"])
                for i in range(opts["repeat"])]
    except (OSError, ParseError, InfeasibleError, OracleLimitError, PreconditionError,
            ValueError) as exc:
        return {**base, "error": f"{type(exc).__name__}: {exc}"}
    first = runs[0]
    sizes = [r.size for r in runs]
    row = {k: v for k, v in first.__dict__.items()}
    row.update(repeat=opts["repeat"], size_min=min(sizes),
               size_mean=round(statistics.fmean(sizes), 6),
               verified=all(r.verified for r in runs), error="")
    return row


def _csv_value(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return v


def cmd_bench(args) -> int:
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    for a in algos:
        if a not in ALGORITHMS:
            print(f"domcover: unknown algorithm {a!r}", file=sys.stderr)
            return EXIT_USAGE
    if args.repeat < 1:
        print("domcover: --repeat must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    if not args.dir.is_dir():
        print(f"domcover: {args.dir} is not a directory", file=sys.stderr)
        return EXIT_NOINPUT
    opts = {"m": args.m, "seed": args.seed, "vc": args.vc, "k": args.k, "scope": args.scope,
            "repeat": args.repeat, "timing": not args.no_timing}
    files = sorted(p for p in args.dir.iterdir() if p.is_file() and not p.name.startswith("."))
    tasks = []
    for path in files:
        is_sc = detect_format(path) == "setcover"
        for algo in algos:
            if is_sc == (algo == "setcover"):
                tasks.append((path, algo, opts))

    workers = int(os.environ.get(WORKERS_ENV, "1") or 1)
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_bench_row, tasks))
    else:
        rows = [_bench_row(t) for t in tasks]

    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=BENCH_COLUMNS, extrasaction="ignore",
                                lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _csv_value(v) for k, v in row.items()})
    finally:
        if args.out:
            out.close()
    if args.jsonl:
        with open(args.jsonl, "a") as fh:
            for row in rows:
                fh.write(json.dumps(row) + "\n")
    return EXIT_OK


def cmd_oracle(args) -> int:
    g = load_graph(args.input, args.format)
    if g.n > ORACLE_LIMIT:
        print(f"domcover: oracle refuses n={g.n} (limit {ORACLE_LIMIT})", file=sys.stderr)
        return EXIT_INFEASIBLE
    mds = brute_force_mds(g)
    mtds = None if g.has_isolated() else brute_force_mtds(g)
    mvc = brute_force_mvc(LoopMultigraph.from_edges(g.n, g.edges().tolist()))
    rec = {"instance": args.input.name, "n": g.n, "edge_count": g.edge_count,
           "gamma": len(mds), "gamma_t": None if mtds is None else len(mtds),
           "beta": len(mvc), "mds": list(mds.members),
           "mtds": None if mtds is None else list(mtds.members), "mvc": list(mvc.members)}
    print(json.dumps(rec))
    return EXIT_OK


def cmd_simulate(args) -> int:
    g = load_graph(args.input, args.format)
    rng = RngPolicy(args.seed)
    scope = Scope(args.scope)
    if args.algo == "alg1":
        if scope is Scope.OPEN and g.has_isolated():
            raise InfeasibleError("open-scope marking needs no isolated vertices",
                                  g.isolated().tolist())
        program = alg1_program(args.m, rng, scope)
        direct = list(alg1(g, args.m, rng, scope)[0].members)
    else:
        program = carowei_program(rng, total=scope is Scope.OPEN)
        direct = list((carowei_tds if scope is Scope.OPEN else carowei_ds)(g, rng).members)
    trace = run_sync(g, program, payload_cap=args.payload_cap)
    result = simulated_set(trace)
    if args.trace:
        with open(args.trace, "w") as fh:
            trace.dump(fh)
    print(json.dumps({"instance": args.input.name, "algorithm": args.algo, "scope": scope.value,
                      "m": args.m, "seed": args.seed, "rounds": trace.rounds,
                      "size": len(result), "max_payload_bits": trace.max_payload_bits,
                      "payload_cap": args.payload_cap, "audit_passed": trace.audit_passed,
                      "audit_failures": len(trace.audit_failures),
                      "matches_direct": result == direct}))
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "bench": cmd_bench, "oracle": cmd_oracle,
            "simulate": cmd_simulate}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (InfeasibleError, OracleLimitError) as exc:
        print(f"domcover: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ParseError as exc:
        print(f"domcover: parse error: {exc}", file=sys.stderr)
        return EXIT_DATAERR
    except FileNotFoundError as exc:
        print(f"domcover: {exc}", file=sys.stderr)
        return EXIT_NOINPUT


if __name__ == "__main__":
    sys.exit(main())
