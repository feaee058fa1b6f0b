import random

import pytest

from orientflow.connectivity import st_demand
from orientflow.enumeration import (
    CLAIMS,
    CapExceeded,
    Caps,
    brute_force_mcf,
    enumerate_feasible,
    random_circulation,
    random_graph,
    verify_bijection,
)
from orientflow.graph_core import DirectedSubgraph, Kind
from orientflow.mcf_solver import Demand, NoFeasibleFlow, min_cost_flow


def test_enumerate_triangle(g_tri):
    subs = enumerate_feasible(g_tri, [1, 0, -1], Kind.SUBGRAPH)
    assert subs == ["011", "100", "101", "110", "111"]
    assert len(enumerate_feasible(g_tri, [1, 0, -1], Kind.ORIENTATION)) == 5


def test_enumerate_zero_demand_is_everything(g_diamond):
    for kind in (Kind.SUBGRAPH, Kind.ORIENTATION):
        found = enumerate_feasible(g_diamond, Demand.zero(4), kind)
        assert found == [format(x, "05b") for x in range(32)]


def test_enumerate_cap(g_diamond):
    with pytest.raises(CapExceeded):
        enumerate_feasible(g_diamond, Demand.zero(4), Kind.SUBGRAPH, caps=Caps(mask_edges=4))
    with pytest.raises(ValueError):
        enumerate_feasible(g_diamond, Demand.zero(4), Kind.MIXED)


def test_brute_force_examples(g_edge, g_tri):
    f = brute_force_mcf(g_edge, DirectedSubgraph.full(g_edge), [1, -1])
    assert f.arcs() == [(1, 2)] and f.cost.base == 1
    f = brute_force_mcf(g_tri, DirectedSubgraph.full(g_tri), [1, 0, -1])
    assert f.arcs() == [(1, 2), (2, 3)] and f.cost.base == 2
    f = brute_force_mcf(g_tri, DirectedSubgraph.full(g_tri), Demand.zero(3))
    assert f.arcs() == [] and f.cost == (0, 0)
    with pytest.raises(NoFeasibleFlow):
        brute_force_mcf(g_tri, DirectedSubgraph.empty(g_tri), [1, 0, -1])


def test_brute_force_cap(g_tri):
    with pytest.raises(CapExceeded):
        brute_force_mcf(g_tri, DirectedSubgraph.full(g_tri), [1, 0, -1], Caps(oracle_arcs=5))


@pytest.mark.parametrize(
    "fixture, d, counts",
    [
        ("g_tri", [1, 0, -1], (5, 5)),
        ("g_diamond", [2, 0, 0, -2], (2, 2)),
        ("g_edge", [1, -1], (1, 1)),
    ],
)
def test_verify_exhaustive(request, fixture, d, counts):
    g = request.getfixturevalue(fixture)
    report = verify_bijection(g, d)
    assert report.failures == []
    assert report.counts == counts
    assert all(report.status[c] == "PASS" for c in CLAIMS)
    assert report.checks["orient_keeps_flow"] > 0 and report.checks["solver_oracle"] == 4**g.m


def test_verify_sampled_reproducible():
    g = random_graph(random.Random(3), 7, 11)
    d = random_circulation(random.Random(4), g)
    a = verify_bijection(g, d, mode="sampled", seed=9, trials=60)
    b = verify_bijection(g, d, mode="sampled", seed=9, trials=60)
    assert a.ok and a.counts is None
    assert a.to_text() == b.to_text()
    assert a.checks == b.checks
    assert a.status["counts_equal"] == "SKIP"


def test_verify_flags_a_broken_solver(g_tri):
    def wrong(g, D, d):
        # claims everything costs the same: breaks the oracle check
        f = min_cost_flow(g, D, d)
        return type(f)(DirectedSubgraph(g, D.mask), f.cost)

    report = verify_bijection(g_tri, [1, 0, -1], solver=wrong)
    assert not report.ok
    assert report.status["solver_oracle"] == "FAIL"
    assert "solver_oracle FAIL D=" in report.to_text()


def test_report_formats(g_tri):
    report = verify_bijection(g_tri, [1, 0, -1], graph_name="tri.g")
    text = report.to_text()
    assert text.splitlines()[:5] == ["graph tri.g", "demand 1 0 -1", "mode exhaustive", "S_f 5", "O_f 5"]
    assert "wall_time" not in text and "wall_time" in report.to_text(timing=True)
    import json

    doc = json.loads(report.to_json())
    assert doc["ok"] and doc["counts"] == {"S_f": 5, "O_f": 5}
    assert set(doc["claims"]) == set(CLAIMS)


def test_exhaustive_cap(g_diamond):
    with pytest.raises(CapExceeded):
        verify_bijection(g_diamond, Demand.zero(4), caps=Caps(mask_edges=3))


def test_random_graph_shape():
    rng = random.Random(0)
    g = random_graph(rng, 8, 12)
    assert g.n == 8 and g.m == 12
    assert all(1 <= s.weight <= 100 for s in g.slots)
    d = st_demand(8, 1, 8, 1)
    # connected by construction
    assert min_cost_flow(g, DirectedSubgraph.full(g), d).cost.base > 0
    with pytest.raises(ValueError):
        random_graph(rng, 4, 7)


def test_random_circulation_feasible():
    rng = random.Random(1)
    for _ in range(20):
        g = random_graph(rng, 6, 9)
        d = random_circulation(rng, g)
        assert sum(d) == 0
        min_cost_flow(g, DirectedSubgraph.full(g), d)
