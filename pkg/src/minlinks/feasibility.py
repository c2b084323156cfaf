"""Existence of pervading link sets: the generic simulation test and the
structural characterizations for trees, cycles and cliques."""

from __future__ import annotations

from collections import deque
from collections.abc import Sequence
from itertools import chain

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from minlinks.errors import InputError
from minlinks.graph import Graph, check_budget, is_pervading

TREE = "tree"
CYCLE = "cycle"
CLIQUE = "clique"
GENERAL = "general"


def component_count(g: Graph) -> int:
    n = g.n
    if n == 0:
        return 0
    adj = g.adjacency
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.fromiter(map(len, adj), dtype=np.int64, count=n), out=indptr[1:])
    indices = np.fromiter(chain.from_iterable(adj), dtype=np.int64, count=int(indptr[-1]))
    a = csr_matrix((np.ones(len(indices), dtype=np.int8), indices, indptr), shape=(n, n))
    count, _ = connected_components(a, directed=False)
    return int(count)


def is_connected(g: Graph) -> bool:
    return component_count(g) == 1


def is_tree(g: Graph) -> bool:
    return g.m == g.n - 1 and is_connected(g)


def is_forest(g: Graph) -> bool:
    # acyclic iff m = n - (#components)
    return g.m < g.n and g.m == g.n - component_count(g) or g.n == 0


def is_cycle(g: Graph) -> bool:
    if g.n < 3 or any(len(a) != 2 for a in g.adjacency):
        return False
    return len(cycle_order(g)) == g.n


def is_clique(g: Graph) -> bool:
    n = g.n
    return n >= 1 and g.m == n * (n - 1) // 2


def classify_topology(g: Graph) -> str:
    """Return ``"tree"``, ``"cycle"``, ``"clique"`` or ``"general"``.

    Checked in that order, so K1 and K2 are trees and K3 is a cycle.
    """
    if is_tree(g):
        return TREE
    if is_cycle(g):
        return CYCLE
    if is_clique(g):
        return CLIQUE
    return GENERAL


def cycle_order(g: Graph) -> list[int]:
    """Nodes of a cycle in traversal order, starting at 0 towards its smaller neighbor."""
    adj = g.adjacency
    order = [0]
    prev, cur = 0, adj[0][0]
    while cur != 0:
        order.append(cur)
        a, b = adj[cur]
        prev, cur = cur, (b if a == prev else a)
    return order


def feasible_generic(g: Graph, k: int) -> bool:
    """Give every node ``min(t(v), k)`` links and simulate."""
    k = check_budget(k)
    return is_pervading(g, [min(t, k) for t in g.thresholds])


def violates_degree_bound(g: Graph, k: int) -> bool:
    return degree_bound_violation(g, k) is not None


def degree_bound_violation(g: Graph, k: int, base: int = 0) -> str | None:
    k = check_budget(k)
    for v, t in enumerate(g.thresholds):
        if t > g.degree(v) + k:
            return f"node {v + base} has threshold {t} > degree {g.degree(v)} + k"
    if g.n and min(g.thresholds) > k:
        return f"every threshold exceeds k={k}"
    return None


def _require(pred: bool, what: str) -> None:
    if not pred:
        raise InputError(f"graph is not a {what}")


def tree_violation(g: Graph, k: int, base: int = 0) -> str | None:
    """Peel leaves one at a time; a leaf with ``t <= k`` lowers its neighbor's
    threshold, a leaf with ``t = k + 1`` is dropped, anything larger fails."""
    k = check_budget(k)
    _require(is_tree(g), TREE)
    t = list(g.thresholds)
    deg = g.degrees()
    adj = g.adjacency
    alive = bytearray(b"\x01") * g.n
    queue = deque(v for v in range(g.n) if deg[v] == 1)
    remaining = g.n
    while remaining > 1:
        v = queue.popleft()
        if not alive[v]:
            continue
        w = next(u for u in adj[v] if alive[u])
        if t[v] <= k:
            t[w] = max(0, t[w] - 1)
        elif t[v] > k + 1:
            return f"leaf {v + base} has residual threshold {t[v]} > k + 1"
        alive[v] = 0
        remaining -= 1
        deg[w] -= 1
        if deg[w] == 1:
            queue.append(w)
    last = next(v for v in range(g.n) if alive[v])
    if t[last] > k:
        return f"last node {last + base} has residual threshold {t[last]} > k"
    return None


def feasible_tree(g: Graph, k: int) -> bool:
    return tree_violation(g, k) is None


def cycle_violation(g: Graph, k: int, base: int = 0) -> str | None:
    """Every failed cycle condition, joined with '; ', or None."""
    k = check_budget(k)
    _require(is_cycle(g), CYCLE)
    t = g.thresholds
    failed = []
    if min(t) > k:
        failed.append(f"condition 1: no node has threshold <= k={k}")
    over = [v for v, x in enumerate(t) if x > k + 2]
    if over:
        v = over[0]
        failed.append(f"condition 2: node {v + base} has threshold {t[v]} > k + 2")
    order = cycle_order(g)
    n = len(order)
    peaks = [i for i, v in enumerate(order) if t[v] == k + 2]
    if len(peaks) >= 2:
        for a, b in zip(peaks, peaks[1:] + [peaks[0] + n]):
            if not any(t[order[i % n]] <= k for i in range(a + 1, b)):
                failed.append(
                    f"condition 3: consecutive threshold-(k+2) nodes {order[a] + base} and "
                    f"{order[b % n] + base} have no node of threshold <= k between them"
                )
                break
    return "; ".join(failed) or None


def feasible_cycle(g: Graph, k: int) -> bool:
    return cycle_violation(g, k) is None


def clique_violation_thresholds(thresholds: Sequence[int], k: int) -> str | None:
    k = check_budget(k)
    for i, x in enumerate(sorted(thresholds), start=1):
        if x > i + k - 1:
            return f"rank {i} threshold {x} > rank + k - 1 = {i + k - 1}"
    return None


def clique_violation(g: Graph, k: int) -> str | None:
    _require(is_clique(g), CLIQUE)
    return clique_violation_thresholds(g.thresholds, k)


def feasible_clique(g: Graph, k: int) -> bool:
    return clique_violation(g, k) is None


def explain_infeasibility(g: Graph, k: int, topology: str | None = None, base: int = 0) -> str | None:
    """Human-readable reason the instance has no pervading link set, or None.

    Node ids in the message are shifted by ``base`` (1 for file-facing output).
    """
    topology = topology or classify_topology(g)
    reasons = []
    reason = degree_bound_violation(g, k, base)
    if reason is not None:
        reasons.append(f"degree bound: {reason}")
    if topology == TREE:
        reason = tree_violation(g, k, base)
        if reason:
            reasons.append(f"tree leaf-peeling: {reason}")
    elif topology == CYCLE:
        reason = cycle_violation(g, k, base)
        if reason:
            reasons.append(f"cycle {reason}")
    elif topology == CLIQUE:
        reason = clique_violation(g, k)
        if reason:
            reasons.append(f"clique {reason}")
    elif not reasons and not feasible_generic(g, k):
        reasons.append("simulation with min(t(v), k) links on every node does not activate all nodes")
    return "; ".join(reasons) or None
