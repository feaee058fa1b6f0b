"""k arc-disjoint shortest (s,t)-paths from the unit-capacity min-cost flow.

The minimum-weight collection of ``k`` arc-disjoint paths is the support of
the min-cost flow under the demand ``+k`` at ``s`` and ``-k`` at ``t``; it is
decomposed into paths by walking from ``s`` along the lowest-indexed unused
arc.  Vertex-disjoint paths reduce to this by splitting vertices.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph_core import Arc, DirectedSubgraph, GraphError, WeightedGraph
from .mcf_solver import Demand, IntegralFlow, Solver, min_cost_flow


class CyclicSupport(ValueError):
    """The flow support does not decompose into k simple s-t paths."""


@dataclass(frozen=True)
class PathSet:
    paths: tuple[tuple[int, ...], ...]
    total_weight: int

    def arcs(self) -> list[Arc]:
        return [Arc(p[j], p[j + 1]) for p in self.paths for j in range(len(p) - 1)]

    def to_text(self) -> str:
        lines = [">".join(map(str, p)) for p in self.paths]
        lines.append(f"total {self.total_weight}")
        return "\n".join(lines) + "\n"


def st_demand(n: int, s: int, t: int, k: int) -> Demand:
    if s == t:
        raise GraphError(f"source and sink coincide ({s})")
    if not (1 <= s <= n and 1 <= t <= n):
        raise GraphError(f"vertices {s}, {t} must lie in 1..{n}")
    if k < 1:
        raise GraphError(f"k must be positive, got {k}")
    values = [0] * n
    values[s - 1] = k
    values[t - 1] = -k
    return Demand(values)


def decompose_flow(g: WeightedGraph, f: IntegralFlow, s: int, t: int, k: int) -> PathSet:
    """Split an s-t flow of value ``k`` into ``k`` arc-disjoint paths."""
    remaining = f.support.mask
    paths = []
    total = 0
    for _ in range(k):
        path = [s]
        seen = {s}
        u = s
        while u != t:
            nxt = None
            rest = remaining
            while rest:
                low = rest & -rest
                idx = low.bit_length() - 1
                rest ^= low
                if g.arc(idx).tail == u:
                    nxt = idx
                    break
            if nxt is None:
                raise CyclicSupport(f"walk from {s} stuck at {u}")
            remaining &= ~(1 << nxt)
            u = g.arc(nxt).head
            total += g.slots[nxt >> 1].weight
            if u in seen:
                raise CyclicSupport(f"walk from {s} revisits {u}")
            seen.add(u)
            path.append(u)
        paths.append(tuple(path))
    if remaining:
        raise CyclicSupport(f"{remaining.bit_count()} support arcs left after {k} paths")
    return PathSet(tuple(paths), total)


def k_disjoint_paths(
    g: WeightedGraph,
    D: DirectedSubgraph,
    s: int,
    t: int,
    k: int,
    *,
    solver: Solver = min_cost_flow,
) -> PathSet:
    """Minimum-weight ``k`` arc-disjoint (s,t)-paths inside ``D``.

    Raises :class:`~orientflow.mcf_solver.NoFeasibleFlow` when ``D`` does not
    k-connect ``s`` to ``t``.
    """
    f = solver(g, D, st_demand(g.n, s, t, k))
    return decompose_flow(g, f, s, t, k)


@dataclass(frozen=True)
class VertexSplit:
    """Bookkeeping for a split graph.

    ``out_copy[v]`` is the id of ``v_out`` (``v`` itself keeps the role of
    ``v_in``).  ``allowed`` lists the arcs of the split graph that respect the
    in/out discipline; ``scale`` is the factor applied to original weights.
    """

    original: WeightedGraph
    graph: WeightedGraph
    out_copy: dict[int, int]
    scale: int
    allowed: DirectedSubgraph
    arc_origin: dict[Arc, Arc] = field(repr=False)

    def to_original(self, v: int) -> int:
        return v if v <= self.original.n else self._inverse[v]

    @property
    def _inverse(self) -> dict[int, int]:
        return {o: v for v, o in self.out_copy.items()}

    def lift(self, D: DirectedSubgraph) -> DirectedSubgraph:
        """Allowed split-graph arcs whose original arc lies in ``D`` plus all internal arcs."""
        arcs = [a for a in self.allowed if (o := self.arc_origin.get(a)) is None or o in D]
        return DirectedSubgraph.from_arcs(self.graph, arcs)

    def project(self, paths: PathSet) -> PathSet:
        """Map split-graph paths back and drop the internal edges from the weight."""
        inv = self._inverse
        projected = []
        total = 0
        for p in paths.paths:
            q: list[int] = []
            for j, v in enumerate(p):
                if j:
                    a = Arc(p[j - 1], v)
                    o = self.arc_origin.get(a)
                    if o is not None:
                        total += self.original.weight(o)
                orig = inv.get(v, v)
                if not q or q[-1] != orig:
                    q.append(orig)
            projected.append(tuple(q))
        return PathSet(tuple(projected), total)


def vertex_split(g: WeightedGraph, interior_cap_vertices) -> tuple[WeightedGraph, VertexSplit]:
    """Give each listed vertex unit capacity by splitting it into in/out copies.

    ``v`` stays as ``v_in``; ``v_out`` gets a fresh id above ``n``.  An edge
    ``{u, v}`` becomes the edges ``{u_out, v_in}`` and ``{v_out, u_in}`` (one
    edge when neither endpoint is split), so the split graph is again a
    symmetric digraph; only the arcs listed in ``VertexSplit.allowed`` point
    the right way.  The internal edge ``{v_in, v_out}`` has weight 1 and all
    original weights are multiplied by ``#split + 1``, so internal edges only
    break ties and never change which collection is cheapest.
    """
    split = sorted(set(interior_cap_vertices))
    for v in split:
        if not 1 <= v <= g.n:
            raise GraphError(f"vertex {v} outside 1..{g.n}")
    out_copy = {v: g.n + j for j, v in enumerate(split, start=1)}
    scale = len(split) + 1

    def out_of(v: int) -> int:
        return out_copy.get(v, v)

    edges: list[tuple[int, int, int]] = []
    allowed: list[Arc] = []
    origin: dict[Arc, Arc] = {}
    for slot in g.slots:
        u, v = slot.reference_arc
        w = slot.weight * scale
        if u in out_copy or v in out_copy:
            for a, b in ((u, v), (v, u)):
                edges.append((out_of(a), b, w))
                allowed.append(Arc(out_of(a), b))
                origin[Arc(out_of(a), b)] = Arc(a, b)
        else:
            edges.append((u, v, w))
            allowed += [Arc(u, v), Arc(v, u)]
            origin[Arc(u, v)] = Arc(u, v)
            origin[Arc(v, u)] = Arc(v, u)
    for v in split:
        edges.append((v, out_copy[v], 1))
        allowed.append(Arc(v, out_copy[v]))
    h = WeightedGraph.from_edges(g.n + len(split), edges)
    info = VertexSplit(g, h, out_copy, scale, DirectedSubgraph.from_arcs(h, allowed), origin)
    return h, info


def vertex_disjoint_paths(
    g: WeightedGraph,
    D: DirectedSubgraph,
    s: int,
    t: int,
    k: int,
    *,
    solver: Solver = min_cost_flow,
) -> PathSet:
    """Minimum-weight ``k`` internally vertex-disjoint (s,t)-paths inside ``D``."""
    interior = [v for v in range(1, g.n + 1) if v not in (s, t)]
    h, info = vertex_split(g, interior)
    paths = k_disjoint_paths(h, info.lift(D), s, t, k, solver=solver)
    return info.project(paths)
