"""Threshold-pruning link assignment for arbitrary graphs.

The heuristic repeatedly either tops up a node whose residual threshold
exceeds its residual degree (case 1) or prunes the node maximising
``k(v)(k(v)+1) / (delta(v)(delta(v)+1))`` (case 2). The resulting link
vector is always pervading and its total never exceeds :func:`tpi_bound`.
"""

from __future__ import annotations

import heapq
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from minlinks.errors import BudgetError
from minlinks.graph import Graph, LinkVector, check_budget

log = logging.getLogger(__name__)

# doubles have a 52-bit fraction; distinct a1/b1, a2/b2 with a*b below this
# differ by more than one ulp, so correctly rounded quotients keep their order
# and equal rationals round to the same double
_EXACT_FLOAT_LIMIT = 1 << 52


@dataclass
class TpiReport:
    links: LinkVector
    bound: Fraction
    iterations: int = 0
    case1_count: int = 0
    case2_count: int = 0
    nonunit_increments: int = 0
    potential_violations: int = 0
    trace_lines: list[str] = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(self.links)


def tpi_bound(g: Graph) -> Fraction:
    """Exact value of ``sum t(v)(t(v)+1) / (2(deg(v)+1))``."""
    by_degree: dict[int, int] = defaultdict(int)
    for t, a in zip(g.thresholds, g.adjacency):
        by_degree[len(a)] += t * (t + 1)
    return sum((Fraction(num, 2 * (d + 1)) for d, num in by_degree.items()), Fraction(0))


def _potential(kv: int, dv: int) -> Fraction:
    return Fraction(kv * (kv + 1), 2 * (dv + 1))


def tpi(g: Graph, k: int, *, instrument: bool = False) -> TpiReport:
    """Run the pruning heuristic; requires ``k >= max t(v)``.

    Case-1 candidates are taken lowest id first; case-2 ties on the ratio
    go to the lowest id. With ``instrument=True`` every iteration is
    recorded as ``iter <j> node <v> case <c> sigma <s>`` (1-based j, 0-based
    v), and the potential drop is checked against the links emitted.
    """
    k = check_budget(k)
    n = g.n
    bound = tpi_bound(g)
    if n == 0:
        return TpiReport((), bound)
    t_max = max(g.thresholds)
    if k < t_max:
        raise BudgetError(f"k={k} is below the maximum threshold {t_max}")

    adj = g.adjacency
    t0 = g.thresholds
    delta = [len(a) for a in adj]
    kres = list(t0)
    s = [0] * n
    live = bytearray(b"\x01") * n
    topped = bytearray(n)
    n_live = n

    d_max = max(delta)
    exact_float = t_max * (t_max + 1) * d_max * (d_max + 1) < _EXACT_FLOAT_LIMIT

    def ratio(v: int):
        kv, dv = kres[v], delta[v]
        if exact_float:
            return -(kv * (kv + 1) / (dv * (dv + 1)))
        return -Fraction(kv * (kv + 1), dv * (dv + 1))

    case1 = [v for v in range(n) if kres[v] > delta[v]]
    prio = [(ratio(v), v) for v in range(n) if delta[v] > 0 and kres[v] <= delta[v]]
    heapq.heapify(prio)
    heappush, heappop = heapq.heappush, heapq.heappop

    report = TpiReport((), bound)
    potential = bound if instrument else None
    # case 2 runs at most n times; case 1 at most once per node up front plus
    # once per degree decrement, i.e. n + m
    cap = g.m + 2 * n
    j = 0
    while n_live:
        j += 1
        assert j <= cap, "iteration cap exceeded"
        v = -1
        while case1:
            u = heappop(case1)
            if live[u] and kres[u] > delta[u]:
                v = u
                break
        if v >= 0:
            dv = delta[v]
            sigma = kres[v] - dv
            first_over = not topped[v] and t0[v] > len(adj[v])
            expected = t0[v] - len(adj[v]) if first_over else 1
            assert sigma == expected, f"case-1 increment {sigma} at node {v}, expected {expected}"
            if sigma != 1:
                report.nonunit_increments += 1
            topped[v] = 1
            before = _potential(kres[v], dv) if instrument else None
            s[v] += sigma
            kres[v] = dv
            if dv == 0:
                assert s[v] >= sigma
                live[v] = 0
                n_live -= 1
                after = Fraction(0)
            else:
                heappush(prio, (ratio(v), v))
                after = _potential(dv, dv) if instrument else None
            report.case1_count += 1
            case = 1
        else:
            while True:
                key, v = heappop(prio)
                if live[v] and key == ratio(v):
                    break
            assert kres[v] <= delta[v] and delta[v] > 0
            sigma = 0
            if instrument:
                _check_argmax(v, kres, delta, live)
                before = _potential(kres[v], delta[v])
                after = Fraction(0)
            live[v] = 0
            n_live -= 1
            for u in adj[v]:
                if not live[u]:
                    continue
                if instrument:
                    before += _potential(kres[u], delta[u])
                du = delta[u] - 1
                delta[u] = du
                if instrument:
                    after += _potential(kres[u], du)
                if kres[u] > du:
                    heappush(case1, u)
                else:
                    heappush(prio, (ratio(u), u))
            report.case2_count += 1
            case = 2
        if instrument:
            drop = before - after
            if sigma > drop:
                report.potential_violations += 1
            potential -= drop
            line = f"iter {j} node {v} case {case} sigma {sigma}"
            report.trace_lines.append(line)
            log.debug(line)
    report.iterations = j
    report.links = tuple(s)
    if instrument:
        assert potential == 0, "potential did not telescope to zero"
    return report


def _check_argmax(v: int, kres: list[int], delta: list[int], live: bytearray) -> None:
    # integer cross-multiplication against every live node
    a, b = kres[v] * (kres[v] + 1), delta[v] * (delta[v] + 1)
    for u in range(len(kres)):
        if not live[u]:
            continue
        au, bu = kres[u] * (kres[u] + 1), delta[u] * (delta[u] + 1)
        assert au * b <= a * bu, f"node {u} beats selected node {v}"
        if au * b == a * bu:
            assert v <= u, f"tie with lower id {u} than selected {v}"
