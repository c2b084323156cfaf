"""Exhaustive ground-truth solvers for small instances.

They enumerate link vectors (or seed sets) and simulate each one, so
only use them on toy graphs.
"""

from __future__ import annotations

import os
from collections.abc import Iterator, Sequence
from itertools import combinations

from minlinks.errors import SizeError
from minlinks.graph import Graph, LinkVector, SolveOutcome, Status, check_budget

BRUTE = "brute"
DEFAULT_NODE_CAP = int(os.environ.get("MINLINKS_ORACLE_CAP", "10"))
_HINT_MAX_NODES = 12


def _check_size(g: Graph, node_cap: int) -> None:
    if g.n > node_cap:
        raise SizeError(f"exhaustive search limited to {node_cap} nodes, graph has {g.n}")


def _masks(g: Graph) -> list[int]:
    return [sum(1 << u for u in nbrs) for nbrs in g.adjacency]


def _spreads(nbr: list[int], need: Sequence[int], active: int, full: int) -> bool:
    """True iff the process started from ``active`` with residual ``need`` reaches everyone."""
    if not active:
        return full == 0
    n = len(nbr)
    changed = True
    while changed and active != full:
        changed = False
        for v in range(n):
            if not active >> v & 1 and (nbr[v] & active).bit_count() >= need[v]:
                active |= 1 << v
                changed = True
    return active == full


def _vectors_with_total(caps: Sequence[int], total: int) -> Iterator[tuple[int, ...]]:
    """Vectors ``0 <= s[i] <= caps[i]`` summing to ``total``, lexicographically ascending."""
    n = len(caps)
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + caps[i]
    if total > suffix[0]:
        return
    s = [0] * n

    def rec(i: int, left: int) -> Iterator[tuple[int, ...]]:
        if i == n - 1:
            s[i] = left
            yield tuple(s)
            return
        for x in range(max(0, left - suffix[i + 1]), min(caps[i], left) + 1):
            s[i] = x
            yield from rec(i + 1, left - x)

    if n == 0:
        if total == 0:
            yield ()
        return
    yield from rec(0, total)


def _level(t, caps, nbr, full, seedable, total, collect_all=False) -> list[LinkVector]:
    """Pervading vectors with the given total: the first one, or all of them."""
    found: list[LinkVector] = []
    n = len(t)
    for s in _vectors_with_total(caps, total):
        active = 0
        for v in seedable:
            if s[v] >= t[v]:
                active |= 1 << v
        if n and not active:
            continue
        need = [x - y for x, y in zip(t, s)]
        if _spreads(nbr, need, active, full):
            found.append(s)
            if not collect_all:
                break
    return found


def _order_optimum(g: Graph, k: int) -> int | None:
    """Cheapest activation order, by DP over activated subsets.

    Activating v after a set A costs ``max(0, t(v) - |N(v) & A|)`` links,
    allowed only when that is at most k.
    """
    n = g.n
    nbr = _masks(g)
    t = g.thresholds
    inf = 1 << 30
    best = [inf] * (1 << n)
    best[0] = 0
    for a in range(1 << n):
        base = best[a]
        if base == inf:
            continue
        for v in range(n):
            bit = 1 << v
            if a & bit:
                continue
            cost = t[v] - (nbr[v] & a).bit_count()
            if cost > k:
                continue
            c = base + (cost if cost > 0 else 0)
            if c < best[a | bit]:
                best[a | bit] = c
    return None if best[-1] == inf else best[-1]


def _search(g: Graph, k: int, all_optima: bool) -> tuple[int | None, list[LinkVector]]:
    """Smallest total admitting a pervading vector, and the vector(s) found there.

    Adding links never deactivates anyone, so pervading vectors form an
    up-set: once total T admits one, every larger total up to ``sum(caps)``
    does too. "Level T has one and level T-1 has none", both settled by full
    enumeration, therefore certifies T. The subset DP only picks the level
    to start from; enumeration makes the call.
    """
    t = g.thresholds
    n = g.n
    caps = [min(x, k) for x in t]
    nbr = _masks(g)
    full = (1 << n) - 1
    seedable = [v for v in range(n) if t[v] <= k]

    def level(total: int, collect_all: bool = False) -> list[LinkVector]:
        return _level(t, caps, nbr, full, seedable, total, collect_all)

    top = sum(caps)
    if not level(top):
        return None, []
    hint = _order_optimum(g, k) if n <= _HINT_MAX_NODES else None
    total = 0 if hint is None else min(hint, top)
    found = level(total)
    if found:
        while total > 0:
            lower = level(total - 1)
            if not lower:
                break
            total, found = total - 1, lower
    else:
        while not found:
            total += 1
            found = level(total)
    if all_optima:
        found = level(total, collect_all=True)
    return total, found


def brute_min_links(g: Graph, k: int, node_cap: int = DEFAULT_NODE_CAP) -> SolveOutcome:
    """Minimum pervading link vector by exhaustive search.

    Returns the lexicographically smallest pervading vector of minimum
    total, exactly what scanning totals upwards would find first.
    """
    k = check_budget(k)
    _check_size(g, node_cap)
    total, found = _search(g, k, all_optima=False)
    if total is None:
        return SolveOutcome.infeasible(BRUTE)
    return SolveOutcome(Status.FEASIBLE, found[0], BRUTE)


def brute_min_links_all_optima(g: Graph, k: int, node_cap: int = 8) -> set[LinkVector]:
    k = check_budget(k)
    _check_size(g, node_cap)
    _, found = _search(g, k, all_optima=True)
    return set(found)


def brute_target_set(g: Graph, node_cap: int = 12) -> int:
    """Size of a smallest seed set that activates the whole graph.

    Seeds are active outright regardless of their thresholds.
    """
    _check_size(g, node_cap)
    n = g.n
    nbr = _masks(g)
    full = (1 << n) - 1
    t = g.thresholds
    for size in range(n + 1):
        for seeds in combinations(range(n), size):
            active = 0
            for v in seeds:
                active |= 1 << v
            if _spreads(nbr, t, active, full):
                return size
    raise AssertionError("seeding every node always succeeds")
