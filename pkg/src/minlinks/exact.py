"""Optimal link assignment on trees, cycles and cliques.

Each solver has a closed-form companion (``ml_*``) returning the optimum
total, or ``None`` when no pervading link set exists.
"""

from __future__ import annotations

import heapq
from collections.abc import Sequence

from minlinks.errors import InputError
from minlinks.feasibility import (
    CLIQUE,
    CYCLE,
    TREE,
    clique_violation_thresholds,
    cycle_order,
    feasible_cycle,
    feasible_tree,
    is_clique,
    is_forest,
)
from minlinks.graph import Graph, SolveOutcome, Status, check_budget


def solve_tree(g: Graph, k: int, *, check: bool = True) -> SolveOutcome:
    """Leaf-peeling greedy on a forest.

    The lowest-id current leaf is processed first. A leaf with ``t = k + 1``
    takes ``k`` links and is dropped. A leaf with ``t <= k`` takes ``t``
    links and activates the component of threshold-1 nodes around it; that
    component is removed and each of its outside neighbors loses one unit of
    threshold. Isolated nodes take ``t`` links if ``t <= k``.
    """
    k = check_budget(k)
    if check and not is_forest(g):
        raise InputError("graph is not a forest")
    links = _peel_forest(g.adjacency, list(g.thresholds), k)
    if links is None:
        return SolveOutcome.infeasible(TREE)
    return SolveOutcome(Status.FEASIBLE, tuple(links), TREE)


def _peel_forest(
    adj: Sequence[Sequence[int]],
    t: list[int],
    k: int,
    alive: bytearray | None = None,
    deg: list[int] | None = None,
) -> list[int] | None:
    """Links from the leaf-peeling greedy, or None if some leaf is hopeless.

    ``alive``/``deg`` restrict the run to a sub-forest; ``t`` is consumed.
    """
    n = len(adj)
    if deg is None:
        deg = list(map(len, adj))
    if alive is None:
        alive = bytearray(b"\x01") * n
    s = [0] * n
    heap: list[int] = []
    heappop, heappush = heapq.heappop, heapq.heappush
    k1 = k + 1
    # ids below `nxt` were swept already; leaves appearing there go on the heap,
    # so the next leaf is always the smallest current one
    nxt = 0
    while True:
        if heap:
            v = heappop(heap)
        else:
            while nxt < n and (deg[nxt] > 1 or not alive[nxt]):
                nxt += 1
            if nxt == n:
                break
            v = nxt
            nxt += 1
        if not alive[v]:
            continue
        tv = t[v]
        alive[v] = 0
        if deg[v] == 0:
            if tv > k:
                return None
            s[v] = tv
            continue
        if tv > k1:
            return None
        if tv == k1:
            s[v] = k
            for w in adj[v]:
                if alive[w]:
                    d = deg[w] - 1
                    deg[w] = d
                    if d <= 1 and w < nxt:
                        heappush(heap, w)
                    break
            continue
        s[v] = tv
        # sweep the threshold-1 component around v; in a forest each outside
        # neighbor touches it exactly once, so decrement inline
        stack = [v]
        while stack:
            x = stack.pop()
            for u in adj[x]:
                if alive[u]:
                    if t[u] == 1:
                        alive[u] = 0
                        stack.append(u)
                    else:
                        t[u] -= 1
                        d = deg[u] - 1
                        deg[u] = d
                        if d <= 1 and u < nxt:
                            heappush(heap, u)
    return s


def ml_tree(g: Graph, k: int) -> int | None:
    """``1 + sum(t(v) - 1)`` for a feasible tree, else None."""
    if not feasible_tree(g, k):
        return None
    return 1 + sum(t - 1 for t in g.thresholds)


def solve_cycle(g: Graph, k: int) -> SolveOutcome:
    """Reduce the cycle to a path around a minimum-threshold node.

    The node ``i`` of minimum threshold (lowest id) takes ``t(i)`` links,
    which activates the run of threshold-1 nodes around it. The rest of the
    cycle, from the first threshold>1 node on one side to the first on the
    other, is solved as a path with both ends' thresholds lowered by one (or
    a single node lowered by two when both sides meet at the same node).
    """
    k = check_budget(k)
    order = cycle_order(g) if g.n >= 3 and all(len(a) == 2 for a in g.adjacency) else []
    if len(order) != g.n or not order:
        raise InputError("graph is not a cycle")
    t = g.thresholds
    n = g.n
    big = [v for v in range(n) if t[v] > 1]
    if not big or (len(big) == 1 and t[big[0]] == 2):
        s = [0] * n
        s[t.index(1)] = 1
        return SolveOutcome(Status.FEASIBLE, tuple(s), CYCLE)

    i = t.index(min(t))
    if t[i] > k:
        return SolveOutcome.infeasible(CYCLE)
    pi = order.index(i)
    c = next(q % n for q in range(pi + 1, pi + n) if t[order[q % n]] > 1)
    cc = next(q % n for q in range(pi - 1, pi - n, -1) if t[order[q % n]] > 1)

    # the arc strictly between cc and c (through i) is activated by i's links
    alive = bytearray(b"\x01") * n
    q = (cc + 1) % n
    while q != c:
        alive[order[q]] = 0
        q = (q + 1) % n
    deg = [2] * n
    pt = list(t)
    vc, vcc = order[c], order[cc]
    deg[vc] -= 1
    deg[vcc] -= 1
    pt[vc] -= 1
    pt[vcc] -= 1
    sub = _peel_forest(g.adjacency, pt, k, alive, deg)
    if sub is None:
        return SolveOutcome.infeasible(CYCLE)
    sub[i] = t[i]
    return SolveOutcome(Status.FEASIBLE, tuple(sub), CYCLE)


def ml_cycle(g: Graph, k: int) -> int | None:
    """``max(1, sum(t(v) - 1))`` for a feasible cycle, else None."""
    if not feasible_cycle(g, k):
        return None
    return max(1, sum(t - 1 for t in g.thresholds))


def solve_clique_thresholds(thresholds: Sequence[int], k: int) -> SolveOutcome:
    """Clique greedy on a bare threshold sequence (the clique is implicit).

    Nodes are counting-sorted by threshold, ties by id; the node at rank i
    (1-based) takes ``t - i + 1`` links whenever ``t >= i``.
    """
    k = check_budget(k)
    n = len(thresholds)
    hi = n + k
    buckets: list[list[int]] = [[] for _ in range(hi + 1)]
    for v, x in enumerate(thresholds):
        if x > hi:
            return SolveOutcome.infeasible(CLIQUE)
        buckets[x].append(v)
    s = [0] * n
    rank = 0
    for x, bucket in enumerate(buckets):
        for v in bucket:
            rank += 1
            if x >= rank:
                need = x - rank + 1
                if need > k:
                    return SolveOutcome.infeasible(CLIQUE)
                s[v] = need
    return SolveOutcome(Status.FEASIBLE, tuple(s), CLIQUE)


def solve_clique(g: Graph, k: int) -> SolveOutcome:
    if not is_clique(g):
        raise InputError("graph is not a clique")
    return solve_clique_thresholds(g.thresholds, k)


def ml_clique_thresholds(thresholds: Sequence[int], k: int) -> int | None:
    if clique_violation_thresholds(thresholds, k) is not None:
        return None
    return sum(x - i + 1 for i, x in enumerate(sorted(thresholds), start=1) if x >= i)


def ml_clique(g: Graph, k: int) -> int | None:
    """Sum of ``t(i) - i + 1`` over sorted ranks with ``t(i) >= i``, else None."""
    if not is_clique(g):
        raise InputError("graph is not a clique")
    return ml_clique_thresholds(g.thresholds, k)
