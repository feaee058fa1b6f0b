"""Weighted simple graphs viewed as symmetric digraphs, plus the arc algebra.

Every undirected edge ``e_i`` (1-based, in file order) owns two arcs.  The arc
written in the input file is the *reference arc* of the slot; its canonical
arc index is ``2*(i-1)``, the reverse arc gets ``2*(i-1)+1``.  Arc subsets are
stored as integer bitmasks over those indices.

The bijection built on top of this module is only canonical relative to the
edge order and the reference orientation, both taken verbatim from the input.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple


class Arc(NamedTuple):
    tail: int
    head: int

    def __str__(self) -> str:
        return f"{self.tail}>{self.head}"


def rev(a: Arc) -> Arc:
    return Arc(a.head, a.tail)


class GraphError(ValueError):
    """Base class for invalid graph input."""


class GraphParseError(GraphError):
    def __init__(self, lineno: int, line: str, reason: str):
        super().__init__(f"line {lineno}: {reason}: {line.strip()!r}")
        self.lineno = lineno
        self.line = line
        self.reason = reason


class MalformedLine(GraphParseError):
    pass


class SelfLoop(GraphParseError):
    pass


class DuplicateEdge(GraphParseError):
    pass


class NonPositiveWeight(GraphParseError):
    pass


class VertexOutOfRange(GraphParseError):
    pass


class ArcNotInGraph(GraphError, KeyError):
    def __str__(self) -> str:
        return f"arc {self.args[0]} is not an arc of the graph"


class MaskError(GraphError):
    pass


@dataclass(frozen=True)
class EdgeSlot:
    edge_index: int
    reference_arc: Arc
    weight: int

    @property
    def reverse_arc(self) -> Arc:
        return rev(self.reference_arc)


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Immutable simple graph with a fixed edge order and reference orientation.

    Vertices are ``1..n``.  Build through :func:`parse_graph` or
    :meth:`from_edges`; both validate the simple-graph invariants.
    """

    n: int
    slots: tuple[EdgeSlot, ...]
    _arc_index: dict[Arc, int] = field(repr=False, compare=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int, int]]) -> WeightedGraph:
        slots = []
        arc_index: dict[Arc, int] = {}
        if n < 1:
            raise GraphError(f"vertex count must be positive, got {n}")
        for i, (u, v, w) in enumerate(edges, start=1):
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphError(f"edge {i}: vertex out of range 1..{n}: ({u}, {v})")
            if u == v:
                raise GraphError(f"edge {i}: self-loop at {u}")
            if w < 1 or int(w) != w:
                raise GraphError(f"edge {i}: weight must be a positive integer, got {w}")
            a = Arc(u, v)
            if a in arc_index or rev(a) in arc_index:
                raise GraphError(f"edge {i}: duplicate edge {{{u}, {v}}}")
            arc_index[a] = 2 * (i - 1)
            arc_index[rev(a)] = 2 * (i - 1) + 1
            slots.append(EdgeSlot(i, a, int(w)))
        return cls(n, tuple(slots), arc_index)

    @property
    def m(self) -> int:
        return len(self.slots)

    @property
    def num_arcs(self) -> int:
        return 2 * len(self.slots)

    @property
    def full_mask(self) -> int:
        return (1 << self.num_arcs) - 1

    def slot(self, i: int) -> EdgeSlot:
        """Edge slot ``e_i`` with 1-based ``i``."""
        if not 1 <= i <= self.m:
            raise IndexError(f"edge index {i} outside 1..{self.m}")
        return self.slots[i - 1]

    def arc_index(self, a: Arc) -> int:
        try:
            return self._arc_index[Arc(*a)]
        except KeyError:
            raise ArcNotInGraph(a) from None

    def arc(self, index: int) -> Arc:
        s = self.slots[index >> 1]
        return s.reverse_arc if index & 1 else s.reference_arc

    def arcs(self) -> Iterator[Arc]:
        for s in self.slots:
            yield s.reference_arc
            yield s.reverse_arc

    def slot_of(self, a: Arc) -> int:
        return self.arc_index(a) // 2 + 1

    def weight(self, a: Arc) -> int:
        return self.slots[self.arc_index(a) >> 1].weight

    def has_arc(self, a: Arc) -> bool:
        return Arc(*a) in self._arc_index

    def to_text(self) -> str:
        lines = [f"p {self.n} {self.m}"]
        lines += [f"e {s.reference_arc.tail} {s.reference_arc.head} {s.weight}" for s in self.slots]
        return "\n".join(lines) + "\n"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self.n == other.n and self.slots == other.slots

    def __hash__(self) -> int:
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.n, self.slots))
            object.__setattr__(self, "_hash", h)
        return h


def parse_graph(text: str) -> WeightedGraph:
    """Parse the ``p n m`` / ``e u v w`` line format.

    Lines starting with ``#`` and blank lines are ignored.  The edge order and
    reference direction are exactly those of the ``e`` lines.
    """
    n = m = None
    edges: list[tuple[int, int, int]] = []
    seen: set[frozenset[int]] = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        tokens = line.split()
        if not tokens or tokens[0].startswith("#"):
            continue
        if tokens[0] == "p":
            if n is not None:
                raise MalformedLine(lineno, line, "second header line")
            try:
                n, m = (int(t) for t in tokens[1:])
            except ValueError:
                raise MalformedLine(lineno, line, "expected 'p <n> <m>'") from None
            if n < 1 or m < 0:
                raise MalformedLine(lineno, line, "header counts out of range")
        elif tokens[0] == "e":
            if n is None:
                raise MalformedLine(lineno, line, "edge line before header")
            try:
                u, v, w = (int(t) for t in tokens[1:])
            except ValueError:
                raise MalformedLine(lineno, line, "expected 'e <u> <v> <w>' with integers") from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise VertexOutOfRange(lineno, line, f"vertex outside 1..{n}")
            if u == v:
                raise SelfLoop(lineno, line, "self-loop")
            if w < 1:
                raise NonPositiveWeight(lineno, line, "weight must be >= 1")
            key = frozenset((u, v))
            if key in seen:
                raise DuplicateEdge(lineno, line, "duplicate undirected edge")
            seen.add(key)
            edges.append((u, v, w))
        else:
            raise MalformedLine(lineno, line, f"unknown record type {tokens[0]!r}")
    if n is None:
        raise MalformedLine(0, "", "missing 'p' header")
    if len(edges) != m:
        raise MalformedLine(0, "", f"header announces {m} edges, found {len(edges)}")
    return WeightedGraph.from_edges(n, edges)


def chi(g: WeightedGraph, a: Arc) -> Arc:
    """Reference arc of the edge slot that ``a`` belongs to."""
    return g.slots[g.arc_index(a) >> 1].reference_arc


class Kind(enum.Enum):
    SUBGRAPH = "subgraph"
    ORIENTATION = "orientation"
    MIXED = "mixed"


_EVEN_BITS_CACHE: dict[int, int] = {}


def _even_bits(m: int) -> int:
    # 0b...010101 with m ones: the reference-arc positions
    mask = _EVEN_BITS_CACHE.get(m)
    if mask is None:
        mask = int("01" * m, 2) if m else 0
        _EVEN_BITS_CACHE[m] = mask
    return mask


@dataclass(frozen=True)
class DirectedSubgraph:
    """An arbitrary subset of the 2m arcs of ``graph``, stored as a bitmask.

    Bit ``2(i-1)`` is the reference arc of ``e_i``, bit ``2(i-1)+1`` its
    reverse.  Equality is by graph and mask.
    """

    graph: WeightedGraph = field(repr=False)
    mask: int

    def __post_init__(self) -> None:
        if self.mask < 0 or self.mask >> self.graph.num_arcs:
            raise MaskError(f"mask {self.mask:#x} has bits outside the {self.graph.num_arcs} arcs")

    @classmethod
    def from_arcs(cls, g: WeightedGraph, arcs: Iterable[Arc]) -> DirectedSubgraph:
        mask = 0
        for a in arcs:
            mask |= 1 << g.arc_index(a)
        return cls(g, mask)

    @classmethod
    def empty(cls, g: WeightedGraph) -> DirectedSubgraph:
        return cls(g, 0)

    @classmethod
    def full(cls, g: WeightedGraph) -> DirectedSubgraph:
        return cls(g, g.full_mask)

    def __contains__(self, a: object) -> bool:
        if not isinstance(a, tuple) or not self.graph.has_arc(a):  # type: ignore[arg-type]
            return False
        return bool(self.mask >> self.graph.arc_index(a) & 1)  # type: ignore[arg-type]

    def __iter__(self) -> Iterator[Arc]:
        mask, g = self.mask, self.graph
        while mask:
            low = mask & -mask
            yield g.arc(low.bit_length() - 1)
            mask ^= low
        return

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __le__(self, other: DirectedSubgraph) -> bool:
        return self.mask & ~other.mask == 0

    def slot_bits(self, i: int) -> int:
        """The two bits of slot ``i`` as ``0..3`` (bit 0 = reference arc)."""
        return self.mask >> (2 * (i - 1)) & 3

    def arcs(self) -> frozenset[Arc]:
        return frozenset(self)

    def __str__(self) -> str:
        return "{" + ", ".join(str(a) for a in self) + "}"


def _slot_mask(g: WeightedGraph, a: Arc) -> tuple[int, int]:
    idx = g.arc_index(a)
    return 1 << idx, 1 << (idx ^ 1)


def orient_insert(D: DirectedSubgraph, a: Arc) -> DirectedSubgraph:
    """``D ⊕ a``: add ``a`` and drop its reverse."""
    bit, rbit = _slot_mask(D.graph, a)
    return DirectedSubgraph(D.graph, (D.mask | bit) & ~rbit)


def pair_insert(D: DirectedSubgraph, e: Arc) -> DirectedSubgraph:
    """``D + e``: add both arcs of ``e``'s slot."""
    bit, rbit = _slot_mask(D.graph, e)
    return DirectedSubgraph(D.graph, D.mask | bit | rbit)


def pair_remove(D: DirectedSubgraph, e: Arc) -> DirectedSubgraph:
    """``D - e``: remove both arcs of ``e``'s slot."""
    bit, rbit = _slot_mask(D.graph, e)
    return DirectedSubgraph(D.graph, D.mask & ~(bit | rbit))


def classify(D: DirectedSubgraph) -> Kind:
    even = _even_bits(D.graph.m)
    ref = D.mask & even
    back = (D.mask >> 1) & even
    single = ref ^ back
    if single == 0:
        return Kind.SUBGRAPH
    if single == even:
        return Kind.ORIENTATION
    return Kind.MIXED


def _check_mask(g: WeightedGraph, bits: str) -> None:
    if len(bits) != g.m or any(c not in "01" for c in bits):
        raise MaskError(f"mask must be {g.m} characters over {{0,1}}, got {bits!r}")


def decode_subgraph(g: WeightedGraph, bits: str) -> DirectedSubgraph:
    _check_mask(g, bits)
    mask = 0
    for i, c in enumerate(bits):
        if c == "1":
            mask |= 3 << (2 * i)
    return DirectedSubgraph(g, mask)


def decode_orientation(g: WeightedGraph, bits: str) -> DirectedSubgraph:
    _check_mask(g, bits)
    mask = 0
    for i, c in enumerate(bits):
        mask |= (1 if c == "1" else 2) << (2 * i)
    return DirectedSubgraph(g, mask)


def encode_subgraph(D: DirectedSubgraph) -> str:
    if classify(D) is not Kind.SUBGRAPH:
        raise MaskError(f"{D} is not a subgraph (some slot holds exactly one arc)")
    return "".join("1" if D.slot_bits(i) else "0" for i in range(1, D.graph.m + 1))


def encode_orientation(D: DirectedSubgraph) -> str:
    if classify(D) is not Kind.ORIENTATION:
        raise MaskError(f"{D} is not an orientation (some slot does not hold exactly one arc)")
    return "".join("1" if D.slot_bits(i) == 1 else "0" for i in range(1, D.graph.m + 1))


def subgraph_from_index(g: WeightedGraph, x: int) -> DirectedSubgraph:
    """Subgraph whose mask string is the m-bit binary form of ``x``."""
    return decode_subgraph(g, format(x, f"0{g.m}b") if g.m else "")


def orientation_from_index(g: WeightedGraph, x: int) -> DirectedSubgraph:
    return decode_orientation(g, format(x, f"0{g.m}b") if g.m else "")
