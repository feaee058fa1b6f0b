"""Brute-force oracles and exhaustive/sampled verification of the bijection.

Everything here is exponential on purpose.  The oracle for the min-cost flow
enumerates every arc subset of ``D`` and keeps the lexicographically smallest
one that satisfies conservation; it shares nothing with the augmenting-path
solver beyond the graph types.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .bijection import (
    InfeasibleInput,
    RuleConflict,
    phi,
    phi_step,
    psi,
    psi_step,
)
from .graph_core import (
    Arc,
    DirectedSubgraph,
    Kind,
    WeightedGraph,
    classify,
    encode_orientation,
    encode_subgraph,
    orient_insert,
    orientation_from_index,
    pair_insert,
    rev,
    subgraph_from_index,
)
from .mcf_solver import (
    Demand,
    IntegralFlow,
    LexCost,
    NoFeasibleFlow,
    Solver,
    check_demand,
    min_cost_flow,
    solve_or_none,
)


class CapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class Caps:
    """Size limits for exhaustive work; configuration, not constants."""

    mask_edges: int = 20  # 2**m masks per kind
    oracle_arcs: int = 22  # 2**|D| subsets per brute-force solve
    all_arcsets_edges: int = 5  # 4**m arc sets for the stability / step-inverse sweep


DEFAULT_CAPS = Caps()


# --------------------------------------------------------------------------
# oracles


_CHUNK_BITS = 16


def _subset_rows(start: int, count: int, k: int) -> np.ndarray:
    ids = np.arange(start, start + count, dtype=np.int64)
    return ((ids[:, None] >> np.arange(k, dtype=np.int64)) & 1).astype(np.int32)


def brute_force_mcf(
    g: WeightedGraph, D: DirectedSubgraph, d: Sequence[int], caps: Caps = DEFAULT_CAPS
) -> IntegralFlow:
    """Lex-min conserving arc subset of ``D`` by full enumeration.

    Subsets are scanned in blocks of ``2**16`` to bound memory.
    """
    d = check_demand(g, d)
    idx = [i for i in range(g.num_arcs) if D.mask >> i & 1]
    k = len(idx)
    if k > caps.oracle_arcs:
        raise CapExceeded(f"{k} arcs exceeds oracle cap {caps.oracle_arcs}")
    incidence = np.zeros((k, g.n), dtype=np.int32)
    weights = np.zeros(k, dtype=np.int64)
    for row, i in enumerate(idx):
        a = g.arc(i)
        incidence[row, a.tail - 1] += 1
        incidence[row, a.head - 1] -= 1
        weights[row] = g.slots[i >> 1].weight
    target = np.asarray(d, dtype=np.int32)
    best: tuple[int, int] | None = None
    total = 1 << k
    step = 1 << _CHUNK_BITS
    for start in range(0, total, step):
        rows = _subset_rows(start, min(step, total - start), k)
        hits = np.flatnonzero(np.all(rows @ incidence == target, axis=1))
        if hits.size == 0:
            continue
        chosen = rows[hits]
        base = chosen @ weights
        cheapest = base == base.min()
        for r in chosen[cheapest]:
            key = (int(base.min()), sum(1 << i for i, bit in zip(idx, r.tolist()) if bit))
            if best is None or key < best:
                best = key
    if best is None:
        raise NoFeasibleFlow("no conserving arc subset")
    return IntegralFlow(DirectedSubgraph(g, best[1]), LexCost(*best))


def brute_force_paths(
    g: WeightedGraph, D: DirectedSubgraph, s: int, t: int, k: int
) -> tuple[int, list[tuple[int, ...]]] | None:
    """Minimum total weight of ``k`` arc-disjoint simple (s,t)-paths in ``D``.

    Enumerates all simple directed paths, then all k-combinations that are
    pairwise arc-disjoint.  Returns ``(weight, paths)`` or ``None``.
    """
    from itertools import combinations

    out: dict[int, list[Arc]] = {}
    for a in D:
        out.setdefault(a.tail, []).append(a)
    paths: list[tuple[frozenset[Arc], int, tuple[int, ...]]] = []

    def walk(u: int, seen: list[int], used: list[Arc], w: int) -> None:
        if u == t:
            paths.append((frozenset(used), w, tuple(seen)))
            return
        for a in out.get(u, ()):
            if a.head not in seen:
                seen.append(a.head)
                used.append(a)
                walk(a.head, seen, used, w + g.weight(a))
                used.pop()
                seen.pop()

    walk(s, [s], [], 0)
    best: tuple[int, list[tuple[int, ...]]] | None = None
    for combo in combinations(paths, k):
        arcs: set[Arc] = set()
        clash = False
        for used, _, _ in combo:
            if arcs & used:
                clash = True
                break
            arcs |= used
        if clash:
            continue
        w = sum(c[1] for c in combo)
        if best is None or w < best[0]:
            best = (w, sorted(c[2] for c in combo))
    return best


# --------------------------------------------------------------------------
# enumeration


def enumerate_feasible(
    g: WeightedGraph,
    d: Sequence[int],
    kind: Kind,
    *,
    solver: Solver = min_cost_flow,
    caps: Caps = DEFAULT_CAPS,
) -> list[str]:
    """All feasible subgraph or orientation masks, ascending in binary order."""
    d = check_demand(g, d)
    if g.m > caps.mask_edges:
        raise CapExceeded(f"m={g.m} exceeds mask cap {caps.mask_edges}")
    if kind is Kind.SUBGRAPH:
        build = subgraph_from_index
    elif kind is Kind.ORIENTATION:
        build = orientation_from_index
    else:
        raise ValueError("kind must be SUBGRAPH or ORIENTATION")
    found = []
    for x in range(1 << g.m):
        D = build(g, x)
        if solve_or_none(solver, g, D, d) is not None:
            found.append(format(x, f"0{g.m}b") if g.m else "")
    return found


# --------------------------------------------------------------------------
# verification


CLAIMS = (
    "solver_oracle",
    "orient_keeps_flow",
    "used_pair_keeps_flow",
    "step_inverse",
    "step_flow_preserved",
    "rules_exclusive",
    "phi_into_orientations",
    "psi_into_subgraphs",
    "phi_injective",
    "psi_phi_identity",
    "phi_psi_identity",
    "flow_preserved",
    "counts_equal",
)


@dataclass
class VerificationReport:
    graph: str
    demand: list[int]
    mode: str
    counts: tuple[int, int] | None = None
    status: dict[str, str] = field(default_factory=lambda: {c: "PASS" for c in CLAIMS})
    failures: list[tuple[str, str]] = field(default_factory=list)
    checks: dict[str, int] = field(default_factory=lambda: {c: 0 for c in CLAIMS})
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, claim: str, witness: str) -> None:
        self.status[claim] = "FAIL"
        self.failures.append((claim, witness))

    def check(self, claim: str, cond: bool, witness: Callable[[], str] | str) -> bool:
        self.checks[claim] += 1
        if not cond:
            self.fail(claim, witness() if callable(witness) else witness)
        return cond

    def skip(self, claim: str) -> None:
        if self.status[claim] == "PASS" and self.checks[claim] == 0:
            self.status[claim] = "SKIP"

    def to_text(self, timing: bool = False) -> str:
        lines = [f"graph {self.graph}", f"demand {' '.join(map(str, self.demand))}", f"mode {self.mode}"]
        if self.counts is not None:
            lines.append(f"S_f {self.counts[0]}")
            lines.append(f"O_f {self.counts[1]}")
        witnesses: dict[str, str] = {}
        for claim, w in self.failures:
            witnesses.setdefault(claim, w)
        for claim in CLAIMS:
            line = f"{claim} {self.status[claim]}"
            if claim in witnesses:
                line += f" {witnesses[claim]}"
            lines.append(line)
        if timing:
            lines.append(f"wall_time {self.wall_time:.3f}")
        return "\n".join(lines) + "\n"

    def to_json(self, timing: bool = False) -> str:
        doc = {
            "graph": self.graph,
            "demand": self.demand,
            "mode": self.mode,
            "counts": None if self.counts is None else {"S_f": self.counts[0], "O_f": self.counts[1]},
            "claims": {c: self.status[c] for c in CLAIMS},
            "checks": {c: self.checks[c] for c in CLAIMS},
            "failures": [{"claim": c, "witness": w} for c, w in self.failures],
            "ok": self.ok,
        }
        if timing:
            doc["wall_time"] = self.wall_time
        return json.dumps(doc, indent=2, sort_keys=True)


def _arcs(D: DirectedSubgraph) -> str:
    return "{" + ",".join(str(a) for a in D) + "}"


def _same(x: IntegralFlow | None, y: IntegralFlow | None) -> bool:
    if x is None or y is None:
        return x is None and y is None
    return x.support.mask == y.support.mask and x.cost == y.cost


def check_flow_stability_at(
    report: VerificationReport,
    g: WeightedGraph,
    d: Demand,
    D: DirectedSubgraph,
    A: IntegralFlow,
    slots: Iterable[int],
    solve: Callable[[DirectedSubgraph], IntegralFlow | None],
) -> None:
    """One orientation of each given slot keeps ``A``; adding the pair of any arc of ``A`` keeps ``A``."""
    for i in slots:
        e = g.slot(i).reference_arc
        plus = solve(orient_insert(D, e))
        minus = solve(orient_insert(D, rev(e)))
        report.check(
            "orient_keeps_flow",
            _same(plus, A) or _same(minus, A),
            lambda: f"D={_arcs(D)} e={e}",
        )
    for a in A.support:
        report.check(
            "used_pair_keeps_flow",
            _same(solve(pair_insert(D, a)), A),
            lambda: f"D={_arcs(D)} e={a}",
        )


def check_steps_at(
    report: VerificationReport,
    g: WeightedGraph,
    d: Demand,
    D: DirectedSubgraph,
    A: IntegralFlow,
    slots: Iterable[int],
    solver: Solver,
) -> None:
    """Step-level flow preservation and the per-step inverse property."""
    for i in slots:
        bits = D.slot_bits(i)
        try:
            first, second = (phi_step, psi_step) if bits in (0, 3) else (psi_step, phi_step)
            mid = first(g, d, D, i, solver=solver)
            back = second(g, d, mid, i, solver=solver)
        except RuleConflict as exc:
            report.check("rules_exclusive", False, f"D={_arcs(D)} i={i}: {exc}")
            continue
        report.check("rules_exclusive", True, "")
        mid_flow = solve_or_none(solver, g, mid, d)
        report.check(
            "step_flow_preserved",
            _same(mid_flow, A),
            lambda: f"D={_arcs(D)} i={i} step={first.__name__}",
        )
        report.check(
            "step_inverse",
            back == D,
            lambda: f"D={_arcs(D)} i={i} got={_arcs(back)}",
        )


def verify_bijection(
    g: WeightedGraph,
    d: Sequence[int],
    *,
    mode: str = "exhaustive",
    seed: int = 0,
    trials: int = 1000,
    caps: Caps = DEFAULT_CAPS,
    solver: Solver = min_cost_flow,
    graph_name: str = "",
) -> VerificationReport:
    """Check every claim of the construction on ``(g, d)``.

    ``mode="exhaustive"`` walks all subgraph and orientation masks, and, when
    ``m`` is within ``caps.all_arcsets_edges``, every arc set of the graph for
    the stability, oracle and per-step checks.  ``mode="sampled"`` draws
    ``trials`` uniform arc sets (rejecting infeasible ones) plus ``trials``
    subgraph and orientation masks from ``random.Random(seed)``.
    """
    d = check_demand(g, d)
    started = time.perf_counter()
    report = VerificationReport(graph_name or f"n={g.n} m={g.m}", list(d), mode)
    if mode == "exhaustive" and g.m > caps.mask_edges:
        raise CapExceeded(f"m={g.m} exceeds mask cap {caps.mask_edges}")
    if mode not in ("exhaustive", "sampled"):
        raise ValueError(f"unknown mode {mode!r}")

    # every arc set is solved at most once; phi/psi go through the same cache
    cache: dict[int, IntegralFlow | None] = {}

    def solve(D: DirectedSubgraph) -> IntegralFlow | None:
        hit = cache.get(D.mask, ...)
        if hit is ...:
            hit = cache[D.mask] = solve_or_none(solver, g, D, d)
        return hit  # type: ignore[return-value]

    def cached(_g: WeightedGraph, D: DirectedSubgraph, _d: Sequence[int]) -> IntegralFlow:
        flow = solve(D)
        if flow is None:
            raise NoFeasibleFlow(str(D))
        return flow

    def oracle_check(D: DirectedSubgraph) -> None:
        if len(D) > caps.oracle_arcs:
            return
        try:
            expect: IntegralFlow | None = brute_force_mcf(g, D, d, caps)
        except NoFeasibleFlow:
            expect = None
        report.check("solver_oracle", _same(solve(D), expect), lambda: f"D={_arcs(D)}")

    slots = range(1, g.m + 1)
    rng = random.Random(seed)

    # arc-set level claims
    if mode == "exhaustive":
        if g.m <= caps.all_arcsets_edges:
            for mask in range(1 << g.num_arcs):
                D = DirectedSubgraph(g, mask)
                oracle_check(D)
                A = solve(D)
                if A is None:
                    continue
                check_flow_stability_at(report, g, d, D, A, slots, solve)
                check_steps_at(report, g, d, D, A, slots, cached)
    else:
        drawn = 0
        for _ in range(trials):
            for _attempt in range(100):
                D = DirectedSubgraph(g, rng.getrandbits(g.num_arcs) if g.num_arcs else 0)
                A = solve(D)
                if A is not None:
                    break
            else:
                continue
            drawn += 1
            i = rng.randint(1, g.m) if g.m else None
            oracle_check(D)
            picked = [i] if i is not None else []
            check_flow_stability_at(report, g, d, D, A, picked, solve)
            check_steps_at(report, g, d, D, A, picked, cached)

    # mask level claims
    if mode == "exhaustive":
        sub_idx: Iterable[int] = range(1 << g.m)
        ori_idx: Iterable[int] = range(1 << g.m)
    else:
        sub_idx = sorted({rng.getrandbits(g.m) if g.m else 0 for _ in range(trials)})
        ori_idx = sorted({rng.getrandbits(g.m) if g.m else 0 for _ in range(trials)})

    images: dict[str, str] = {}
    n_sub = 0
    for x in sub_idx:
        K = subgraph_from_index(g, x)
        A = solve(K)
        if A is None:
            continue
        n_sub += 1
        try:
            L = phi(g, d, K, solver=cached)
            back = psi(g, d, L, solver=cached)
        except (RuleConflict, InfeasibleInput) as exc:
            report.check("rules_exclusive", False, f"K={encode_subgraph(K)}: {exc}")
            continue
        ok = report.check(
            "phi_into_orientations",
            classify(L) is Kind.ORIENTATION and solve(L) is not None,
            lambda: f"K={encode_subgraph(K)}",
        )
        report.check("flow_preserved", _same(solve(L), A), lambda: f"K={encode_subgraph(K)}")
        report.check(
            "psi_phi_identity",
            back == K,
            lambda: f"K={encode_subgraph(K)} phi={encode_orientation(L)}",
        )
        if ok:
            key = encode_orientation(L)
            report.check(
                "phi_injective",
                key not in images,
                lambda: f"K={encode_subgraph(K)} and K={images.get(key)} -> {key}",
            )
            images.setdefault(key, encode_subgraph(K))

    n_ori = 0
    for x in ori_idx:
        L = orientation_from_index(g, x)
        A = solve(L)
        if A is None:
            continue
        n_ori += 1
        try:
            K = psi(g, d, L, solver=cached)
            back = phi(g, d, K, solver=cached)
        except (RuleConflict, InfeasibleInput) as exc:
            report.check("rules_exclusive", False, f"L={encode_orientation(L)}: {exc}")
            continue
        report.check(
            "psi_into_subgraphs",
            classify(K) is Kind.SUBGRAPH and _same(solve(K), A),
            lambda: f"L={encode_orientation(L)}",
        )
        report.check(
            "phi_psi_identity",
            back == L,
            lambda: f"L={encode_orientation(L)} psi={encode_subgraph(K)}",
        )

    if mode == "exhaustive":
        report.counts = (n_sub, n_ori)
        report.check("counts_equal", n_sub == n_ori, f"S_f={n_sub} O_f={n_ori}")
    for claim in CLAIMS:
        report.skip(claim)
    report.wall_time = time.perf_counter() - started
    return report


# --------------------------------------------------------------------------
# random instances


def random_graph(
    rng: random.Random,
    n: int,
    m: int,
    *,
    max_weight: int = 100,
    connected: bool = True,
) -> WeightedGraph:
    """Simple graph on ``1..n`` with ``m`` edges and weights in ``[1, max_weight]``.

    With ``connected`` a random spanning tree is laid down first.  Edge order
    and reference directions are shuffled.
    """
    if m > n * (n - 1) // 2:
        raise ValueError(f"a simple graph on {n} vertices has at most {n * (n - 1) // 2} edges")
    if connected and m < n - 1:
        raise ValueError(f"{m} edges cannot connect {n} vertices")
    pairs: set[tuple[int, int]] = set()
    if connected:
        order = list(range(1, n + 1))
        rng.shuffle(order)
        for j in range(1, n):
            u, v = order[j], order[rng.randrange(j)]
            pairs.add((min(u, v), max(u, v)))
    while len(pairs) < m:
        u, v = rng.sample(range(1, n + 1), 2)
        pairs.add((min(u, v), max(u, v)))
    edges = []
    for u, v in sorted(pairs):
        if rng.random() < 0.5:
            u, v = v, u
        edges.append((u, v, rng.randint(1, max_weight)))
    rng.shuffle(edges)
    return WeightedGraph.from_edges(n, edges)


def random_circulation(rng: random.Random, g: WeightedGraph) -> Demand:
    """Demand realised by a random orientation of a random edge subset.

    Feasible on the full arc set by construction.
    """
    out = [0] * g.n
    for s in g.slots:
        if rng.random() < 0.5:
            continue
        a = s.reference_arc if rng.random() < 0.5 else s.reverse_arc
        out[a.tail - 1] += 1
        out[a.head - 1] -= 1
    return Demand(out)
