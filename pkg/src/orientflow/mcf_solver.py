"""Exact unit-capacity min-cost d-flow with a unique optimum.

Each arc carries capacity 1 and the cost pair ``(w(e), 2**arc_index)``.
Comparing flows lexicographically on ``(sum of w, sum of 2**arc_index)`` makes
the optimum unique: distinct 0/1 flows have distinct supports, and distinct
supports have distinct power-of-two sums.  Internally the pair is folded into
one exact integer ``w * 2**(2m) + 2**arc_index``.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Sequence

from .graph_core import Arc, DirectedSubgraph, GraphError, WeightedGraph


class NoFeasibleFlow(Exception):
    """No d-flow exists on the given arc set."""


class DemandError(GraphError):
    pass


class Demand(tuple):
    """Integer demand indexed by vertex ``1..n``; positive means net out-flow.

    Stored as a plain tuple of length ``n`` where position ``u-1`` holds
    ``d(u)``.
    """

    def __new__(cls, values: Iterable[int]) -> Demand:
        vals = tuple(int(v) for v in values)
        if sum(vals) != 0:
            raise DemandError(f"demand values must sum to zero, got sum {sum(vals)}")
        return super().__new__(cls, vals)

    @classmethod
    def zero(cls, n: int) -> Demand:
        return cls([0] * n)

    def __call__(self, u: int) -> int:
        return self[u - 1]

    @property
    def n(self) -> int:
        return len(self)

    @property
    def supply(self) -> int:
        """Total positive demand, i.e. the flow value to be routed."""
        return sum(v for v in self if v > 0)

    def __repr__(self) -> str:
        return f"Demand({list(self)})"


def parse_demand(text: str, n: int) -> Demand:
    """Parse ``d <u> <value>`` lines; unlisted vertices default to 0."""
    values = [0] * n
    seen: set[int] = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        tokens = line.split()
        if not tokens or tokens[0].startswith("#"):
            continue
        if tokens[0] != "d" or len(tokens) != 3:
            raise DemandError(f"line {lineno}: expected 'd <u> <value>': {line.strip()!r}")
        try:
            u, val = int(tokens[1]), int(tokens[2])
        except ValueError:
            raise DemandError(f"line {lineno}: non-integer field: {line.strip()!r}") from None
        if not 1 <= u <= n:
            raise DemandError(f"line {lineno}: vertex {u} outside 1..{n}")
        if u in seen:
            raise DemandError(f"line {lineno}: vertex {u} listed twice")
        seen.add(u)
        values[u - 1] = val
    return Demand(values)


class LexCost(NamedTuple):
    base: int
    tiebreak: int


@dataclass(frozen=True)
class IntegralFlow:
    """0/1 flow given by its support (an arc bitmask of ``graph``)."""

    support: DirectedSubgraph
    cost: LexCost

    @property
    def base_cost(self) -> int:
        return self.cost.base

    def arcs(self) -> list[Arc]:
        """Support arcs in arc-index order."""
        return list(self.support)


Solver = Callable[[WeightedGraph, DirectedSubgraph, Demand], IntegralFlow]


def lex_cost(g: WeightedGraph, support: DirectedSubgraph | Iterable[Arc]) -> LexCost:
    if not isinstance(support, DirectedSubgraph):
        support = DirectedSubgraph.from_arcs(g, support)
    mask = support.mask
    base = 0
    rest = mask
    while rest:
        low = rest & -rest
        base += g.slots[(low.bit_length() - 1) >> 1].weight
        rest ^= low
    return LexCost(base, mask)


def net_outflow(g: WeightedGraph, support: DirectedSubgraph) -> list[int]:
    """Out-degree minus in-degree of every vertex (index ``u-1``)."""
    out = [0] * g.n
    for a in support:
        out[a.tail - 1] += 1
        out[a.head - 1] -= 1
    return out


def check_demand(g: WeightedGraph, d: Sequence[int]) -> Demand:
    if not isinstance(d, Demand):
        d = Demand(d)
    if len(d) != g.n:
        raise DemandError(f"demand has {len(d)} entries, graph has {g.n} vertices")
    return d


def min_cost_flow(g: WeightedGraph, D: DirectedSubgraph, d: Sequence[int]) -> IntegralFlow:
    """Unique lexicographically cheapest integral d-flow supported on ``D``.

    Successive shortest augmenting paths from a super source over the
    residual graph, with Dijkstra on potential-reduced costs.  All arc costs
    are positive, so zero initial potentials are valid.  Raises
    :class:`NoFeasibleFlow` if some supply cannot be routed.
    """
    d = check_demand(g, d)
    if D.graph is not g and D.graph != g:
        raise GraphError("arc set belongs to a different graph")
    need = d.supply
    if need == 0:
        return IntegralFlow(DirectedSubgraph(g, 0), LexCost(0, 0))

    n = g.n
    scale = 1 << g.num_arcs
    # node 0 is the super source, n+1 the super sink
    source, sink = 0, n + 1
    heads: list[int] = []
    caps: list[int] = []
    costs: list[int] = []
    adj: list[list[int]] = [[] for _ in range(n + 2)]

    def add(u: int, v: int, cap: int, cost: int) -> int:
        eid = len(heads)
        heads.extend((v, u))
        caps.extend((cap, 0))
        costs.extend((cost, -cost))
        adj[u].append(eid)
        adj[v].append(eid + 1)
        return eid

    arc_edge: list[tuple[int, int]] = []
    mask = D.mask
    while mask:
        low = mask & -mask
        idx = low.bit_length() - 1
        mask ^= low
        a = g.arc(idx)
        w = g.slots[idx >> 1].weight
        arc_edge.append((idx, add(a.tail, a.head, 1, w * scale + (1 << idx))))
    for u, du in enumerate(d, start=1):
        if du > 0:
            add(source, u, du, 0)
        elif du < 0:
            add(u, sink, -du, 0)

    potential = [0] * (n + 2)
    total = n + 2
    for _ in range(need):
        dist: list[int | None] = [None] * total
        prev_edge = [-1] * total
        dist[source] = 0
        heap = [(0, source)]
        done = [False] * total
        while heap:
            du_, u = heapq.heappop(heap)
            if done[u]:
                continue
            done[u] = True
            pu = potential[u]
            for eid in adj[u]:
                if caps[eid] <= 0:
                    continue
                v = heads[eid]
                if done[v]:
                    continue
                nd = du_ + costs[eid] + pu - potential[v]
                dv = dist[v]
                if dv is None or nd < dv:
                    dist[v] = nd
                    prev_edge[v] = eid
                    heapq.heappush(heap, (nd, v))
        if dist[sink] is None:
            raise NoFeasibleFlow(f"demand cannot be routed on {len(D)} arcs")
        for v in range(total):
            dv = dist[v]
            if dv is not None:
                potential[v] += dv
        v = sink
        while v != source:
            eid = prev_edge[v]
            caps[eid] -= 1
            caps[eid ^ 1] += 1
            v = heads[eid ^ 1]

    support = 0
    for idx, eid in arc_edge:
        if caps[eid] == 0:
            support |= 1 << idx
    flow = DirectedSubgraph(g, support)
    return IntegralFlow(flow, lex_cost(g, flow))


def feasible(g: WeightedGraph, D: DirectedSubgraph, d: Sequence[int]) -> bool:
    try:
        min_cost_flow(g, D, d)
    except NoFeasibleFlow:
        return False
    return True


def solve_or_none(solver: Solver, g: WeightedGraph, D: DirectedSubgraph, d: Demand) -> IntegralFlow | None:
    try:
        return solver(g, D, d)
    except NoFeasibleFlow:
        return None


class CountingSolver:
    """Wraps a solver and counts its invocations."""

    def __init__(self, solver: Solver = min_cost_flow):
        self.solver = solver
        self.calls = 0

    def __call__(self, g: WeightedGraph, D: DirectedSubgraph, d: Demand) -> IntegralFlow:
        self.calls += 1
        return self.solver(g, D, d)
