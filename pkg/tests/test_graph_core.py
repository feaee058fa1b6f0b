import pytest
from hypothesis import given
from hypothesis import strategies as st

from orientflow.graph_core import (
    Arc,
    DirectedSubgraph,
    DuplicateEdge,
    Kind,
    MalformedLine,
    MaskError,
    NonPositiveWeight,
    SelfLoop,
    VertexOutOfRange,
    ArcNotInGraph,
    chi,
    classify,
    decode_orientation,
    decode_subgraph,
    encode_orientation,
    encode_subgraph,
    orient_insert,
    pair_insert,
    pair_remove,
    parse_graph,
    rev,
)

from conftest import K4, TRI


def arcs(g, *pairs):
    return DirectedSubgraph.from_arcs(g, [Arc(u, v) for u, v in pairs])


def test_parse_smallest_graph():
    g = parse_graph("p 2 1\ne 1 2 1")
    assert g.n == 2 and g.m == 1
    assert g.slot(1).reference_arc == (1, 2)
    assert g.slot(1).weight == 1


def test_parse_keeps_file_order_and_direction(g_tri):
    assert [(s.reference_arc, s.weight) for s in g_tri.slots] == [((1, 3), 5), ((1, 2), 1), ((2, 3), 1)]
    assert [s.edge_index for s in g_tri.slots] == [1, 2, 3]


def test_parse_skips_comments_and_blank_lines():
    g = parse_graph("# tri\n\np 3 3\n# edges\ne 1 3 5\ne 1 2 1\ne 2 3 1\n")
    assert g == parse_graph(TRI)


@pytest.mark.parametrize(
    "text, exc, lineno",
    [
        ("p 2 1\ne 1 1 1", SelfLoop, 2),
        ("p 3 2\ne 1 2 1\ne 2 1 4", DuplicateEdge, 3),
        ("p 2 1\ne 1 2 0", NonPositiveWeight, 2),
        ("p 2 1\ne 1 3 1", VertexOutOfRange, 2),
        ("p 2 1\ne 1 2", MalformedLine, 2),
        ("p 2 1\ne 1 2 1.5", MalformedLine, 2),
        ("e 1 2 1", MalformedLine, 1),
        ("p 2 1\nx 1 2 1", MalformedLine, 2),
    ],
)
def test_parse_errors_name_the_line(text, exc, lineno):
    with pytest.raises(exc) as info:
        parse_graph(text)
    assert info.value.lineno == lineno
    assert f"line {lineno}" in str(info.value)


def test_parse_edge_count_mismatch():
    with pytest.raises(MalformedLine):
        parse_graph("p 3 3\ne 1 2 1")


def test_parse_is_deterministic():
    assert parse_graph(K4).slots == parse_graph(K4).slots
    assert parse_graph(K4).to_text() == K4


@pytest.mark.parametrize("a, expected", [((1, 2), (2, 1)), ((2, 1), (1, 2))])
def test_rev(a, expected):
    assert rev(Arc(*a)) == expected


@given(st.integers(1, 50), st.integers(1, 50))
def test_rev_involution(u, v):
    assert rev(rev(Arc(u, v))) == (u, v)


@pytest.mark.parametrize("a, expected", [((1, 3), (1, 3)), ((3, 1), (1, 3)), ((2, 1), (1, 2))])
def test_chi(g_tri, a, expected):
    assert chi(g_tri, Arc(*a)) == expected


def test_chi_properties(g_tri):
    for a in g_tri.arcs():
        assert chi(g_tri, a) == chi(g_tri, rev(a))
        assert chi(g_tri, chi(g_tri, a)) == chi(g_tri, a)


def test_chi_rejects_foreign_arc(g_tri):
    g = parse_graph("p 4 1\ne 1 2 1")
    with pytest.raises(ArcNotInGraph):
        chi(g, Arc(3, 4))


def test_orient_insert_examples(g_tri, g_edge):
    assert orient_insert(arcs(g_tri, (1, 3), (3, 1)), Arc(1, 3)) == arcs(g_tri, (1, 3))
    assert orient_insert(arcs(g_edge), Arc(1, 2)) == arcs(g_edge, (1, 2))
    assert orient_insert(arcs(g_edge, (2, 1)), Arc(1, 2)) == arcs(g_edge, (1, 2))


def test_pair_insert_remove_examples(g_edge):
    assert pair_insert(arcs(g_edge, (1, 2)), Arc(2, 1)) == arcs(g_edge, (1, 2), (2, 1))
    assert pair_remove(arcs(g_edge, (1, 2), (2, 1)), Arc(1, 2)) == arcs(g_edge)
    assert pair_remove(pair_insert(arcs(g_edge), Arc(1, 2)), Arc(1, 2)) == arcs(g_edge)


def test_classify_examples(g_edge, g_tri):
    assert classify(arcs(g_edge)) is Kind.SUBGRAPH
    assert classify(arcs(g_edge, (1, 2))) is Kind.ORIENTATION
    assert classify(arcs(g_tri, (1, 3), (3, 1), (1, 2))) is Kind.MIXED


def test_mask_examples(g_tri):
    assert encode_subgraph(DirectedSubgraph.full(g_tri)) == "111"
    assert encode_orientation(arcs(g_tri, (1, 3), (2, 1), (2, 3))) == "101"
    assert decode_orientation(g_tri, "000") == arcs(g_tri, (3, 1), (2, 1), (3, 2))


@pytest.mark.parametrize("bits", ["11", "1111", "1a1", ""])
def test_mask_wrong_length_or_alphabet(g_tri, bits):
    with pytest.raises(MaskError):
        decode_subgraph(g_tri, bits)
    with pytest.raises(MaskError):
        decode_orientation(g_tri, bits)


def test_encode_rejects_wrong_kind(g_tri):
    mixed = arcs(g_tri, (1, 3), (3, 1), (1, 2))
    with pytest.raises(MaskError):
        encode_subgraph(mixed)
    with pytest.raises(MaskError):
        encode_orientation(mixed)
    with pytest.raises(MaskError):
        encode_orientation(DirectedSubgraph.full(g_tri))


# -- properties over K4 (12 arcs)

k4 = parse_graph(K4)
arc_sets = st.integers(0, k4.full_mask).map(lambda m: DirectedSubgraph(k4, m))
k4_arcs = st.sampled_from(list(k4.arcs()))
masks = st.text(alphabet="01", min_size=6, max_size=6)


@given(arc_sets, k4_arcs)
def test_orient_insert_local(D, a):
    out = orient_insert(D, a)
    i = k4.slot_of(a)
    assert a in out and rev(a) not in out
    assert out.slot_bits(i) in (1, 2)
    for j in range(1, k4.m + 1):
        if j != i:
            assert out.slot_bits(j) == D.slot_bits(j)


@given(arc_sets, k4_arcs)
def test_pair_ops_idempotent(D, a):
    assert pair_insert(pair_insert(D, a), a) == pair_insert(D, a)
    assert pair_remove(pair_remove(D, a), a) == pair_remove(D, a)
    assert pair_remove(pair_insert(D, a), a) == pair_remove(D, a)


@given(arc_sets, k4_arcs)
def test_orient_insert_elsewhere_keeps_other_slots(D, a):
    # classify depends only on slot shapes; orienting slot i can only change slot i
    i = k4.slot_of(a)
    others = [j for j in range(1, k4.m + 1) if j != i]
    out = orient_insert(D, a)
    assert [out.slot_bits(j) for j in others] == [D.slot_bits(j) for j in others]


@given(masks)
def test_mask_round_trip(bits):
    assert encode_subgraph(decode_subgraph(k4, bits)) == bits
    assert encode_orientation(decode_orientation(k4, bits)) == bits


@given(arc_sets)
def test_decode_encode_identity_on_classified(D):
    kind = classify(D)
    if kind is Kind.SUBGRAPH:
        assert decode_subgraph(k4, encode_subgraph(D)) == D
    elif kind is Kind.ORIENTATION:
        assert decode_orientation(k4, encode_orientation(D)) == D


def test_arc_index_layout(g_tri):
    assert [g_tri.arc_index(a) for a in g_tri.arcs()] == list(range(6))
    assert g_tri.arc(0) == (1, 3) and g_tri.arc(1) == (3, 1)
    D = arcs(g_tri, (1, 2), (2, 3))
    assert D.mask == (1 << 2) | (1 << 4)
    assert list(D) == [(1, 2), (2, 3)]
