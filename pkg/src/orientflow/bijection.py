"""Flow-preserving maps between feasible subgraphs and feasible orientations.

``phi`` orients slots ``1, 2, ..., m`` in turn; ``psi`` decides slots
``m, ..., 1`` between "both arcs" and "no arc".  Each step keeps the unique
min-cost flow ``A(D)`` unchanged.  Rule numbers in traces refer to:

phi step at slot i with reference arc e:
  1. A(D) != A(D ⊕ e)      -> D ⊕ rev(e)
  2. A(D) != A(D ⊕ rev e)  -> D ⊕ e
  3. e in D                -> D ⊕ chi(e)
  4. otherwise             -> D ⊕ rev(chi(e))

psi step at slot i:
  1. A(D) != A(D + e)      -> D - e
  2. A(D) != A(D - e)      -> D + e
  3. chi(e) in D           -> D + e
  4. otherwise             -> D - e

An infeasible modified set counts as having a different flow.  Rules 1 and 2
firing together is impossible for a unique optimum and raises
:class:`RuleConflict`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .graph_core import (
    DirectedSubgraph,
    Kind,
    WeightedGraph,
    classify,
    orient_insert,
    pair_insert,
    pair_remove,
    rev,
)
from .mcf_solver import IntegralFlow, Solver, check_demand, min_cost_flow, solve_or_none


class InfeasibleInput(ValueError):
    pass


class NotASubgraph(ValueError):
    pass


class NotAnOrientation(ValueError):
    pass


class RuleConflict(AssertionError):
    """Rules 1 and 2 of a step both applied."""


@dataclass(frozen=True)
class Step:
    index: int
    rule: int
    result: DirectedSubgraph

    def describe(self, kind: str) -> str:
        g = self.result.graph
        bits = self.result.slot_bits(self.index)
        slot = g.slot(self.index)
        if kind == "phi":
            arc = slot.reference_arc if bits == 1 else slot.reverse_arc
            return f"step {self.index} rule {self.rule} arc {arc}"
        action = "keep" if bits == 3 else "drop"
        a = slot.reference_arc
        return f"step {self.index} rule {self.rule} {action} {a.tail}-{a.head}"


def _same(x: IntegralFlow | None, y: IntegralFlow) -> bool:
    return x is not None and x.support.mask == y.support.mask


def _current(g: WeightedGraph, D: DirectedSubgraph, d, solver: Solver, flow: IntegralFlow | None) -> IntegralFlow:
    if flow is not None:
        return flow
    A = solve_or_none(solver, g, D, d)
    if A is None:
        raise InfeasibleInput(f"no d-flow exists on {D}")
    return A


def _solve_variant(g, D, variant, d, solver, A):
    # reuse A(D) when the modification is a no-op
    if variant.mask == D.mask:
        return A
    return solve_or_none(solver, g, variant, d)


def _phi_step(g, d, D, i, solver, flow=None) -> tuple[Step, IntegralFlow]:
    A = _current(g, D, d, solver, flow)
    e = g.slot(i).reference_arc
    with_e = orient_insert(D, e)
    with_rev = orient_insert(D, rev(e))
    rule1 = not _same(_solve_variant(g, D, with_e, d, solver, A), A)
    rule2 = not _same(_solve_variant(g, D, with_rev, d, solver, A), A)
    if rule1 and rule2:
        raise RuleConflict(f"phi step {i}: both orientations of {e} change the flow on {D}")
    if rule1:
        return Step(i, 1, with_rev), A
    if rule2:
        return Step(i, 2, with_e), A
    # e is its own reference arc, so chi(e) = e
    if e in D:
        return Step(i, 3, with_e), A
    return Step(i, 4, with_rev), A


def _psi_step(g, d, D, i, solver, flow=None) -> tuple[Step, IntegralFlow]:
    A = _current(g, D, d, solver, flow)
    e = g.slot(i).reference_arc
    plus = pair_insert(D, e)
    minus = pair_remove(D, e)
    rule1 = not _same(_solve_variant(g, D, plus, d, solver, A), A)
    rule2 = not _same(_solve_variant(g, D, minus, d, solver, A), A)
    if rule1 and rule2:
        raise RuleConflict(f"psi step {i}: both including and excluding {e} change the flow on {D}")
    if rule1:
        return Step(i, 1, minus), A
    if rule2:
        return Step(i, 2, plus), A
    if e in D:
        return Step(i, 3, plus), A
    return Step(i, 4, minus), A


def phi_step(
    g: WeightedGraph,
    d: Sequence[int],
    D: DirectedSubgraph,
    i: int,
    *,
    solver: Solver = min_cost_flow,
) -> DirectedSubgraph:
    """Orient slot ``i`` of any feasible arc set without changing ``A(D)``."""
    step, _ = _phi_step(g, check_demand(g, d), D, i, solver)
    return step.result


def psi_step(
    g: WeightedGraph,
    d: Sequence[int],
    D: DirectedSubgraph,
    i: int,
    *,
    solver: Solver = min_cost_flow,
) -> DirectedSubgraph:
    """Make slot ``i`` pair-complete or pair-empty without changing ``A(D)``."""
    step, _ = _psi_step(g, check_demand(g, d), D, i, solver)
    return step.result


def phi(
    g: WeightedGraph,
    d: Sequence[int],
    K: DirectedSubgraph,
    *,
    solver: Solver = min_cost_flow,
    trace: list[Step] | None = None,
) -> DirectedSubgraph:
    """Map a feasible subgraph to a feasible orientation with the same ``A``.

    Uses one solve for ``A(K)`` and at most two per slot.
    """
    d = check_demand(g, d)
    if classify(K) is not Kind.SUBGRAPH:
        raise NotASubgraph(f"{K} has a slot with exactly one arc")
    D, A = K, _current(g, K, d, solver, None)
    for i in range(1, g.m + 1):
        step, A = _phi_step(g, d, D, i, solver, A)
        if trace is not None:
            trace.append(step)
        D = step.result
    return D


def psi(
    g: WeightedGraph,
    d: Sequence[int],
    L: DirectedSubgraph,
    *,
    solver: Solver = min_cost_flow,
    trace: list[Step] | None = None,
) -> DirectedSubgraph:
    """Map a feasible orientation to a feasible subgraph with the same ``A``.

    Slots are decided from ``m`` down to ``1``.
    """
    d = check_demand(g, d)
    if classify(L) is not Kind.ORIENTATION:
        raise NotAnOrientation(f"{L} is not an orientation")
    D, A = L, _current(g, L, d, solver, None)
    for i in range(g.m, 0, -1):
        step, A = _psi_step(g, d, D, i, solver, A)
        if trace is not None:
            trace.append(step)
        D = step.result
    return D
