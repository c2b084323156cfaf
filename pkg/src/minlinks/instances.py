"""Instance files, solution/trace text, random instances and the seed-set gadget.

Instance format (ASCII, one record per line, 1-based node ids)::

    c <comment>
    p minlinks <n> <m> <k>
    t <v> <threshold>        (n lines)
    e <u> <v>                (m lines)

The ``p`` line must be the first non-comment line; ``t`` and ``e`` lines may
interleave. Blank lines are ignored.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

from minlinks.errors import InputError, ParseError
from minlinks.graph import DiffusionTrace, Graph, SolveOutcome, check_budget

PRNG_NAME = "numpy-PCG64"
FAMILIES = ("tree", "cycle", "clique", "star", "gnp")
THRESHOLD_MODES = ("unit", "feasible-uniform", "adversarial", "center-n")
_U64 = (1 << 64) - 1


def _int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {tok!r}", lineno) from None


def parse(text: str) -> tuple[Graph, int]:
    """Parse an instance; every error carries the offending line number."""
    header = None
    thresholds: list[int | None] = []
    edges: list[tuple[int, int]] = []
    seen_edges: dict[tuple[int, int], int] = {}
    last = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last = lineno
        line = raw.strip()
        if not line or line[0] == "c" and (len(line) == 1 or line[1].isspace()):
            continue
        tok = line.split()
        tag = tok[0]
        if header is None:
            if tag != "p":
                raise ParseError("expected 'p minlinks <n> <m> <k>' header", lineno)
            if len(tok) != 5 or tok[1] != "minlinks":
                raise ParseError("malformed header, expected 'p minlinks <n> <m> <k>'", lineno)
            n, m, k = (_int(x, lineno, name) for x, name in zip(tok[2:], ("n", "m", "k")))
            if n < 0 or m < 0:
                raise ParseError("n and m must be non-negative", lineno)
            if k < 1:
                raise ParseError(f"k must be >= 1, got {k}", lineno)
            header = (n, m, k)
            thresholds = [None] * n
            continue
        n, m, k = header
        if tag == "p":
            raise ParseError("duplicate header", lineno)
        if tag == "t":
            if len(tok) != 3:
                raise ParseError("threshold line must be 't <v> <threshold>'", lineno)
            v = _int(tok[1], lineno, "node id")
            x = _int(tok[2], lineno, "threshold")
            if not 1 <= v <= n:
                raise ParseError(f"node id {v} out of range 1..{n}", lineno)
            if thresholds[v - 1] is not None:
                raise ParseError(f"duplicate threshold for node {v}", lineno)
            if x < 1:
                raise ParseError(f"threshold must be >= 1, got {x}", lineno)
            thresholds[v - 1] = x
        elif tag == "e":
            if len(tok) != 3:
                raise ParseError("edge line must be 'e <u> <v>'", lineno)
            u = _int(tok[1], lineno, "node id")
            v = _int(tok[2], lineno, "node id")
            for x in (u, v):
                if not 1 <= x <= n:
                    raise ParseError(f"node id {x} out of range 1..{n}", lineno)
            if u == v:
                raise ParseError(f"self-loop at node {u}", lineno)
            key = (min(u, v), max(u, v))
            if key in seen_edges:
                raise ParseError(f"duplicate edge {u}-{v} (first on line {seen_edges[key]})", lineno)
            seen_edges[key] = lineno
            edges.append((u - 1, v - 1))
        else:
            raise ParseError(f"unknown line tag {tag!r}", lineno)
    if header is None:
        raise ParseError("missing 'p minlinks' header", last or None)
    n, m, k = header
    missing = [v + 1 for v, x in enumerate(thresholds) if x is None]
    if missing:
        raise ParseError(f"no threshold line for node {missing[0]}", last)
    if len(edges) != m:
        raise ParseError(f"header declares {m} edges, found {len(edges)}", last)
    return Graph.from_edges(n, edges, thresholds), k


def serialize(g: Graph, k: int, comments: Iterable[str] = ()) -> str:
    """Canonical text: header, thresholds by id, edges sorted with u < v."""
    k = check_budget(k)
    out = [f"c {c}" for c in comments]
    out.append(f"p minlinks {g.n} {g.m} {k}")
    out.extend(f"t {v + 1} {x}" for v, x in enumerate(g.thresholds))
    out.extend(f"e {u + 1} {v + 1}" for u, v in g.edges())
    return "\n".join(out) + "\n"


def format_solution(outcome: SolveOutcome) -> str:
    if not outcome.feasible:
        return "infeasible\n"
    lines = [f"s {v + 1} {x}" for v, x in enumerate(outcome.links) if x]
    lines.append(f"total {outcome.total}")
    return "\n".join(lines) + "\n"


def parse_solution(text: str, n: int) -> tuple[int, ...] | None:
    """Inverse of :func:`format_solution`; None for an infeasible verdict."""
    s = [0] * n
    total = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tok = raw.split()
        if not tok or tok[0] == "c":
            continue
        if tok == ["infeasible"]:
            return None
        if tok[0] == "s" and len(tok) == 3:
            v = _int(tok[1], lineno, "node id")
            if not 1 <= v <= n:
                raise ParseError(f"node id {v} out of range 1..{n}", lineno)
            s[v - 1] = _int(tok[2], lineno, "link count")
        elif tok[0] == "total" and len(tok) == 2:
            total = _int(tok[1], lineno, "total")
        else:
            raise ParseError(f"unrecognised solution line {raw!r}", lineno)
    if total is None or total != sum(s):
        raise ParseError("missing or inconsistent 'total' line")
    return tuple(s)


def format_trace(trace: DiffusionTrace) -> str:
    return "".join(
        f"round {j}: {' '.join(str(v + 1) for v in sorted(r))}\n" for j, r in enumerate(trace.rounds)
    )


def materialize_links(s: Sequence[int]) -> list[tuple[int, int]]:
    """Concrete ``(influencer, node)`` pairs, both 1-based: node v is linked
    to influencers 1..s(v)."""
    return [(i, v + 1) for v, x in enumerate(s) for i in range(1, x + 1)]


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed) & _U64))


def _relabel(n: int, edges: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    perm = rng.permutation(n)
    return perm[edges] if len(edges) else edges


def _gnp_edges(n: int, p: float, rng: np.random.Generator) -> np.ndarray:
    """Edges of G(n, p) by geometric skipping over the upper triangle."""
    total = n * (n - 1) // 2
    if p <= 0 or total == 0:
        return np.empty((0, 2), dtype=np.int64)
    if p >= 1:
        idx = np.arange(total, dtype=np.int64)
    else:
        chunks = []
        pos = -1
        batch = max(16, int(total * p * 1.1) + 16)
        while True:
            gaps = rng.geometric(p, size=batch).astype(np.int64)
            steps = pos + np.cumsum(gaps)
            keep = steps[steps < total]
            chunks.append(keep)
            if len(keep) < len(steps):
                break
            pos = int(steps[-1])
        idx = np.concatenate(chunks)
    # row u starts at u*(2n-u-1)/2
    b = 2 * n - 1
    u = np.floor((b - np.sqrt(np.maximum(b * b - 8 * idx.astype(np.float64), 0.0))) / 2).astype(np.int64)
    start = u * (b - u) // 2
    while True:
        hi = start > idx
        lo = idx >= start + (n - 1 - u)
        if not hi.any() and not lo.any():
            break
        u = u - hi + lo
        start = u * (b - u) // 2
    v = idx - start + u + 1
    return np.stack([u, v], axis=1)


def _family_edges(family: str, n: int, rng: np.random.Generator, p: float | None) -> np.ndarray:
    if family == "tree":
        if n == 1:
            return np.empty((0, 2), dtype=np.int64)
        child = np.arange(1, n, dtype=np.int64)
        parent = (rng.random(n - 1) * child).astype(np.int64)
        return _relabel(n, np.stack([parent, child], axis=1), rng)
    if family == "cycle":
        if n < 3:
            raise InputError("a cycle needs n >= 3")
        a = np.arange(n, dtype=np.int64)
        return _relabel(n, np.stack([a, (a + 1) % n], axis=1), rng)
    if family == "clique":
        iu = np.triu_indices(n, 1)
        return np.stack([iu[0], iu[1]], axis=1).astype(np.int64)
    if family == "star":
        leaves = np.arange(1, n, dtype=np.int64)
        return np.stack([np.zeros_like(leaves), leaves], axis=1)
    if family == "gnp":
        if p is None or not 0 <= p <= 1:
            raise InputError("gnp needs 0 <= p <= 1")
        return _gnp_edges(n, p, rng)
    raise InputError(f"unknown family {family!r}, expected one of {', '.join(FAMILIES)}")


def _thresholds(
    mode: str, degrees: np.ndarray, k: int, rng: np.random.Generator, cap: int | None
) -> np.ndarray:
    n = len(degrees)
    if mode == "unit":
        return np.ones(n, dtype=np.int64)
    if mode == "center-n":
        t = np.ones(n, dtype=np.int64)
        t[0] = n
        return t
    hi = degrees + k
    if cap is not None:
        if cap < 1:
            raise InputError("threshold cap must be >= 1")
        hi = np.minimum(hi, cap)
    if mode == "feasible-uniform":
        return 1 + (rng.random(n) * hi).astype(np.int64)
    if mode == "adversarial":
        base = 1 + (rng.random(n) * k).astype(np.int64)
        pick = rng.random(n)
        t = np.where(pick < 0.25, k + 2, np.where(pick < 0.5, k + 1, base))
        return np.minimum(t, hi)
    raise InputError(f"unknown threshold mode {mode!r}, expected one of {', '.join(THRESHOLD_MODES)}")


def generate(
    family: str,
    n: int,
    k: int,
    threshold_mode: str = "unit",
    seed: int = 0,
    p: float | None = None,
    cap: int | None = None,
) -> tuple[Graph, int]:
    """Random instance of the given family; identical for identical arguments.

    Threshold modes: ``unit`` (all 1), ``feasible-uniform`` (uniform in
    ``[1, min(deg + k, cap)]``), ``adversarial`` (about half the nodes at
    ``k + 1`` or ``k + 2``, capped at ``deg + k``) and ``center-n`` (node 0
    at ``n``, the rest at 1; meant for stars).
    """
    k = check_budget(k)
    if n < 1:
        raise InputError("n must be >= 1")
    rng = make_rng(seed)
    edges = _family_edges(family, n, rng, p)
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges.tolist():
        adj[u].append(v)
        adj[v].append(u)
    degrees = np.fromiter((len(a) for a in adj), dtype=np.int64, count=n)
    t = _thresholds(threshold_mode, degrees, k, rng, cap)
    return Graph(adj, t.tolist()), k


def generator_comments(family: str, n: int, k: int, mode: str, seed: int, p: float | None) -> list[str]:
    extra = f" p={p}" if p is not None else ""
    return [f"generated family={family} n={n} k={k} mode={mode} seed={seed}{extra} prng={PRNG_NAME}"]


def gadget_offsets(g: Graph) -> list[int]:
    """First id of each node's gadget block in the reduced graph."""
    out, acc = [], 0
    for x in g.thresholds:
        out.append(acc)
        acc += x + 2
    return out


def gadget_reduce(g: Graph) -> Graph:
    """Replace each node v by a gadget of ``t(v) + 2`` nodes for one influencer.

    Block layout for node v, starting at ``gadget_offsets(g)[v]``: the port
    node (threshold ``t(v)``), the far node, then ``t(v)`` middle nodes each
    adjacent to both. Ports are joined wherever the original nodes were.
    All non-port nodes have threshold 1; use the result with ``k = 1``.
    """
    for v, x in enumerate(g.thresholds):
        if x > 2:
            raise InputError(f"node {v} has threshold {x}; the gadget needs thresholds <= 2")
    off = gadget_offsets(g)
    n2 = off[-1] + g.thresholds[-1] + 2 if g.n else 0
    thresholds = [1] * n2
    edges = []
    for v, x in enumerate(g.thresholds):
        port, far = off[v], off[v] + 1
        thresholds[port] = x
        for i in range(x):
            mid = off[v] + 2 + i
            edges.append((port, mid))
            edges.append((mid, far))
    edges.extend((off[u], off[v]) for u, v in g.edges())
    return Graph.from_edges(n2, edges, thresholds)
