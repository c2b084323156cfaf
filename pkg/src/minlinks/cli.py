"""Command-line driver: ``minlinks solve|check|gen|reduce-tss|bench``.

Exit codes: 0 solved/feasible, 1 infeasible, 2 input error, 3 internal failure.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
import time
from pathlib import Path

from minlinks import exact, oracle
from minlinks.errors import InputError
from minlinks.feasibility import CLIQUE, CYCLE, GENERAL, TREE, classify_topology, explain_infeasibility
from minlinks.graph import Graph, SolveOutcome, Status, is_pervading, simulate
from minlinks.instances import (
    FAMILIES,
    THRESHOLD_MODES,
    format_solution,
    format_trace,
    gadget_reduce,
    generate,
    generator_comments,
    parse,
    serialize,
)
from minlinks.tpi import tpi

log = logging.getLogger("minlinks")

EXIT_OK, EXIT_INFEASIBLE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3
TPI_LABEL = "tpi(heuristic)"
ALGOS = ("auto", TREE, CYCLE, CLIQUE, "tpi", "brute")
EXACT = {TREE: exact.solve_tree, CYCLE: exact.solve_cycle, CLIQUE: exact.solve_clique}


class VerificationError(RuntimeError):
    pass


def _read_instance(path: str) -> tuple[Graph, int]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse(text)


def _run_tpi(g: Graph, k: int) -> tuple[SolveOutcome, str]:
    report = tpi(g, k)
    return SolveOutcome(Status.FEASIBLE, report.links, TPI_LABEL), f"{report.bound}"


def run_algorithm(g: Graph, k: int, algo: str, node_cap: int) -> tuple[SolveOutcome, str | None]:
    """Dispatch to a solver; returns the outcome and, for tpi, the exact bound."""
    if algo == "auto":
        topology = classify_topology(g)
        if topology in EXACT:
            return EXACT[topology](g, k), None
        t_max = max(g.thresholds, default=0)
        if k >= t_max:
            return _run_tpi(g, k)
        if g.n <= node_cap:
            log.warning("k=%d < max threshold %d: falling back to exhaustive search", k, t_max)
            return oracle.brute_min_links(g, k, node_cap), None
        raise InputError(
            f"general graph with k={k} < max threshold {t_max} and n={g.n} above the oracle cap {node_cap}"
        )
    if algo in EXACT:
        return EXACT[algo](g, k), None
    if algo == "tpi":
        return _run_tpi(g, k)
    if algo == "brute":
        return oracle.brute_min_links(g, k, node_cap), None
    raise InputError(f"unknown algorithm {algo!r}")


def cmd_solve(args: argparse.Namespace) -> int:
    g, k = _read_instance(args.input)
    outcome, bound = run_algorithm(g, k, args.algo, args.node_cap)
    out = [f"c algorithm {outcome.algorithm}\n"]
    if bound is not None:
        out.append(f"c bound {bound}\n")
    out.append(format_solution(outcome))
    if not outcome.feasible:
        sys.stdout.write("".join(out))
        return EXIT_INFEASIBLE
    if args.verify:
        if any(x > k for x in outcome.links):
            raise VerificationError(f"some node receives more than k={k} links")
        if not is_pervading(g, outcome.links):
            raise VerificationError("link vector does not activate every node")
    if args.trace:
        out.append(format_trace(simulate(g, outcome.links)))
    sys.stdout.write("".join(out))
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    g, k = _read_instance(args.input)
    topology = classify_topology(g)
    reason = explain_infeasibility(g, k, topology, base=1)
    print(f"c topology {topology}")
    if reason is None:
        print("feasible")
        return EXIT_OK
    print("infeasible")
    print(f"c reason {reason}")
    return EXIT_INFEASIBLE


def cmd_gen(args: argparse.Namespace) -> int:
    g, k = generate(args.family, args.n, args.k, args.mode, args.seed, p=args.p, cap=args.cap)
    comments = generator_comments(args.family, args.n, args.k, args.mode, args.seed, args.p)
    _write(args.out, serialize(g, k, comments))
    return EXIT_OK


def cmd_reduce_tss(args: argparse.Namespace) -> int:
    g, _ = _read_instance(args.input)
    reduced = gadget_reduce(g)
    _write(args.out, serialize(reduced, 1, [f"seed-set gadget reduction of {Path(args.input).name}"]))
    return EXIT_OK


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}") from None


BENCH_COLUMNS = ["instance", "n", "m", "k", "topology", "algo", "total", "bound", "oracle_total", "wall_time_ms"]


def bench_rows(name: str, g: Graph, k: int, node_cap: int) -> list[dict]:
    topology = classify_topology(g)
    oracle_total = ""
    if g.n <= node_cap:
        res = oracle.brute_min_links(g, k, node_cap)
        oracle_total = res.total if res.feasible else "infeasible"
    algos = []
    if topology in EXACT:
        algos.append(topology)
    if g.n == 0 or k >= max(g.thresholds):
        algos.append("tpi")
    rows = []
    for algo in algos:
        start = time.perf_counter()
        if algo == "tpi":
            report = tpi(g, k)
            elapsed = time.perf_counter() - start
            total, bound, label = report.total, f"{float(report.bound):.6f}", TPI_LABEL
        else:
            res = EXACT[algo](g, k)
            elapsed = time.perf_counter() - start
            total = res.total if res.feasible else "infeasible"
            bound, label = "", algo
        rows.append(
            {
                "instance": name,
                "n": g.n,
                "m": g.m,
                "k": k,
                "topology": topology,
                "algo": label,
                "total": total,
                "bound": bound,
                "oracle_total": oracle_total,
                "wall_time_ms": f"{elapsed * 1000:.3f}",
            }
        )
    return rows


def cmd_bench(args: argparse.Namespace) -> int:
    directory = Path(args.dir)
    if not directory.is_dir():
        raise InputError(f"not a readable directory: {directory}")
    try:
        files = sorted(p for p in directory.iterdir() if p.is_file() and not p.name.startswith("."))
    except OSError as exc:
        raise InputError(f"cannot list {directory}: {exc.strerror}") from None
    rows = []
    for path in files:
        try:
            g, k = parse(path.read_text())
        except (InputError, OSError, UnicodeDecodeError) as exc:
            log.warning("skipping %s: %s", path.name, exc)
            continue
        rows.extend(bench_rows(path.name, g, k, args.node_cap))
    rows.sort(key=lambda r: r["instance"])
    try:
        with open(args.out, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=BENCH_COLUMNS)
            writer.writeheader()
            writer.writerows(rows)
    except OSError as exc:
        raise InputError(f"cannot write {args.out}: {exc.strerror}") from None
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="minlinks", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    parser.add_argument(
        "--node-cap",
        type=int,
        default=oracle.DEFAULT_NODE_CAP,
        help="largest n handed to the exhaustive oracle (env MINLINKS_ORACLE_CAP)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="compute a pervading link vector")
    p.add_argument("input")
    p.add_argument("--algo", choices=ALGOS, default="auto")
    p.add_argument("--trace", action="store_true", help="append the round-by-round activation trace")
    p.add_argument("--verify", action="store_true", help="re-simulate and fail unless every node activates")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", help="decide whether a pervading link set exists")
    p.add_argument("input")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("gen", help="write a random instance")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.add_argument("mode", choices=THRESHOLD_MODES)
    p.add_argument("seed", type=int)
    p.add_argument("out")
    p.add_argument("--p", type=float, default=None, help="edge probability for gnp")
    p.add_argument("--cap", type=int, default=None, help="upper cap on generated thresholds")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("reduce-tss", help="seed-set instance (thresholds <= 2) to a one-influencer instance")
    p.add_argument("input")
    p.add_argument("out")
    p.set_defaults(func=cmd_reduce_tss)

    p = sub.add_parser("bench", help="run every applicable solver on a directory of instances")
    p.add_argument("dir")
    p.add_argument("out")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (VerificationError, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
