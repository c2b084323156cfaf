"""Threshold graphs, link vectors and the synchronous diffusion engine.

Nodes are dense ids ``0..n-1``. A link vector is a plain sequence of
non-negative ints, one entry per node, counting the influencer links the
node receives; each link lowers the node's effective threshold by one.
"""

from __future__ import annotations

import enum
from bisect import bisect_left
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field

from minlinks.errors import InputError

LinkVector = tuple[int, ...]


class Graph:
    """Undirected simple graph with a positive integer threshold per node.

    Instances are treated as immutable; solvers copy whatever they mutate.
    """

    __slots__ = ("adjacency", "thresholds", "m")

    def __init__(self, adjacency: Sequence[Iterable[int]], thresholds: Sequence[int]):
        adj = tuple(tuple(sorted(nbrs)) for nbrs in adjacency)
        t = tuple(int(x) for x in thresholds)
        if len(adj) != len(t):
            raise InputError(f"{len(adj)} adjacency rows but {len(t)} thresholds")
        n = len(adj)
        half = 0
        for v, nbrs in enumerate(adj):
            prev = -1
            for u in nbrs:
                if not 0 <= u < n:
                    raise InputError(f"node {v} has out-of-range neighbor {u}")
                if u == v:
                    raise InputError(f"self-loop at node {v}")
                if u == prev:
                    raise InputError(f"duplicate edge ({v}, {u})")
                prev = u
                if u > v:
                    half += 1
        # with no duplicates, mirrored upper entries + matching counts => symmetric
        for v, nbrs in enumerate(adj):
            for u in nbrs:
                if u > v and not _contains(adj[u], v):
                    raise InputError(f"edge ({v}, {u}) is not symmetric")
        if 2 * half != sum(len(a) for a in adj):
            raise InputError("adjacency is not symmetric")
        _check_thresholds(t)
        self.adjacency = adj
        self.thresholds = t
        self.m = half

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], thresholds: Sequence[int]) -> Graph:
        if n < 0:
            raise InputError("node count must be non-negative")
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise InputError(f"self-loop at node {u}")
            adj[u].append(v)
            adj[v].append(u)
        return cls(adj, thresholds)

    @classmethod
    def _trusted(cls, adjacency: tuple[tuple[int, ...], ...], thresholds: tuple[int, ...], m: int) -> Graph:
        # skips validation; callers guarantee a sorted, symmetric, simple adjacency
        g = object.__new__(cls)
        g.adjacency = adjacency
        g.thresholds = thresholds
        g.m = m
        return g

    @property
    def n(self) -> int:
        return len(self.adjacency)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v``, in lexicographic order."""
        for v, nbrs in enumerate(self.adjacency):
            for u in nbrs:
                if u > v:
                    yield v, u

    def with_thresholds(self, thresholds: Sequence[int]) -> Graph:
        t = tuple(int(x) for x in thresholds)
        if len(t) != self.n:
            raise InputError(f"expected {self.n} thresholds, got {len(t)}")
        _check_thresholds(t)
        return Graph._trusted(self.adjacency, t, self.m)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.adjacency == other.adjacency and self.thresholds == other.thresholds

    def __hash__(self) -> int:
        return hash((self.adjacency, self.thresholds))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m}, t_max={max(self.thresholds, default=0)})"


def _contains(sorted_row: tuple[int, ...], x: int) -> bool:
    i = bisect_left(sorted_row, x)
    return i < len(sorted_row) and sorted_row[i] == x


def _check_thresholds(t: Sequence[int]) -> None:
    for v, x in enumerate(t):
        if x < 1:
            raise InputError(f"threshold of node {v} must be >= 1, got {x}")


def check_budget(k: int) -> int:
    if isinstance(k, bool) or int(k) != k or k < 1:
        raise InputError(f"influencer budget k must be a positive integer, got {k!r}")
    return int(k)


def check_links(g: Graph, s: Sequence[int]) -> LinkVector:
    s = tuple(int(x) for x in s)
    if len(s) != g.n:
        raise InputError(f"link vector has length {len(s)}, graph has {g.n} nodes")
    for v, x in enumerate(s):
        if x < 0:
            raise InputError(f"negative link count at node {v}")
    return s


class Status(enum.Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class DiffusionTrace:
    """Outcome of the synchronous threshold process.

    ``activated_at[v]`` is the first round in which ``v`` is active, or -1.
    Round sets are derived from it on demand, which keeps long cascades
    linear in memory.
    """

    activated_at: tuple[int, ...]
    num_rounds: int

    @property
    def rounds(self) -> list[frozenset[int]]:
        """``rounds[j]`` is the set of nodes active at round ``j`` (cumulative)."""
        buckets: list[list[int]] = [[] for _ in range(self.num_rounds)]
        for v, r in enumerate(self.activated_at):
            if r >= 0:
                buckets[r].append(v)
        out = []
        acc: set[int] = set()
        for b in buckets:
            acc.update(b)
            out.append(frozenset(acc))
        return out

    @property
    def final(self) -> frozenset[int]:
        return frozenset(v for v, r in enumerate(self.activated_at) if r >= 0)

    @property
    def fully_activated(self) -> bool:
        return all(r >= 0 for r in self.activated_at)


@dataclass(frozen=True)
class SolveOutcome:
    status: Status
    links: LinkVector | None
    algorithm: str
    trace: DiffusionTrace | None = field(default=None, compare=False)

    @property
    def total(self) -> int:
        return sum(self.links) if self.links is not None else 0

    @property
    def feasible(self) -> bool:
        return self.status is Status.FEASIBLE

    @classmethod
    def infeasible(cls, algorithm: str) -> SolveOutcome:
        return cls(Status.INFEASIBLE, None, algorithm)


def simulate(g: Graph, s: Sequence[int]) -> DiffusionTrace:
    """Run the threshold process seeded by link vector ``s`` to its fixpoint.

    Round 0 holds every node with ``s(v) >= t(v)``; a node joins round j
    once at least ``t(v) - s(v)`` of its neighbors were active at round j-1.
    The trace stops at the last round that adds somebody (round 0 always
    counts), so its final round is the fixpoint.
    """
    s = check_links(g, s)
    adj = g.adjacency
    need = [t - x if x < t else 0 for t, x in zip(g.thresholds, s)]
    at = [-1] * g.n
    frontier = [v for v, r in enumerate(need) if r == 0]
    for v in frontier:
        at[v] = 0
    j = 0
    while frontier:
        nxt = []
        for v in frontier:
            for u in adj[v]:
                if at[u] < 0:
                    need[u] -= 1
                    if need[u] == 0:
                        at[u] = j + 1
                        nxt.append(u)
        if not nxt:
            break
        frontier = nxt
        j += 1
    return DiffusionTrace(tuple(at), j + 1)


def is_pervading(g: Graph, s: Sequence[int]) -> bool:
    return simulate(g, s).fully_activated
