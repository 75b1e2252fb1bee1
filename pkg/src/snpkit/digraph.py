"""Loop-free digraphs over dense integer vertex ids, with exact vertex weights.

Adjacency is kept as one out-bitmask and one in-bitmask per vertex, so arc
tests and neighbourhood unions are integer operations.  Weights are
``fractions.Fraction`` throughout; nothing here ever rounds.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

Arc = tuple[int, int]
MissingEdge = tuple[int, int]  # normalised so that u < v
Weights = tuple[Fraction, ...]


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def edge(u: int, v: int) -> MissingEdge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Digraph:
    """A digraph on vertices ``0..n-1`` without loops.

    With ``oriented=True`` (the default) digons are rejected as well.
    """

    n: int
    arcs: frozenset[Arc]
    oriented: bool = True
    out_mask: tuple[int, ...] = field(init=False, repr=False, compare=False)
    in_mask: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError(f"vertex count must be non-negative, got {self.n}")
        arcs = frozenset((int(u), int(v)) for u, v in self.arcs)
        out = [0] * self.n
        inn = [0] * self.n
        for u, v in arcs:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"arc ({u}, {v}) has an endpoint outside 0..{self.n - 1}")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            out[u] |= 1 << v
            inn[v] |= 1 << u
        if self.oriented:
            for u, v in arcs:
                if (v, u) in arcs:
                    raise ValueError(f"digon between {u} and {v} in an oriented graph")
        object.__setattr__(self, "arcs", arcs)
        object.__setattr__(self, "out_mask", tuple(out))
        object.__setattr__(self, "in_mask", tuple(inn))

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[Arc], oriented: bool = True) -> Digraph:
        return cls(n, frozenset(arcs), oriented)

    def has_arc(self, u: int, v: int) -> bool:
        return bool(self.out_mask[u] >> v & 1)

    def adjacent(self, u: int, v: int) -> bool:
        return bool((self.out_mask[u] | self.in_mask[u]) >> v & 1)

    def vertices(self) -> range:
        return range(self.n)

    def _check(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise IndexError(f"vertex {v} out of range 0..{self.n - 1}")

    def second_out_mask(self, v: int) -> int:
        self._check(v)
        reach = 0
        for u in bits(self.out_mask[v]):
            reach |= self.out_mask[u]
        return reach & ~self.out_mask[v] & ~(1 << v)

    def second_in_mask(self, v: int) -> int:
        self._check(v)
        reach = 0
        for u in bits(self.in_mask[v]):
            reach |= self.in_mask[u]
        return reach & ~self.in_mask[v] & ~(1 << v)

    def closed_reach_mask(self, v: int) -> int:
        """N+(v) | N++(v) as a bitmask."""
        reach = self.out_mask[v]
        for u in bits(self.out_mask[v]):
            reach |= self.out_mask[u]
        return reach & ~(1 << v)

    def with_arcs(self, add: Iterable[Arc] = (), remove: Iterable[Arc] = ()) -> Digraph:
        arcs = (set(self.arcs) - set(remove)) | set(add)
        return Digraph(self.n, frozenset(arcs), self.oriented)

    def reversed(self) -> Digraph:
        return Digraph(self.n, frozenset((v, u) for u, v in self.arcs), self.oriented)

    def induced(self, vertices: Sequence[int]) -> tuple[Digraph, list[int]]:
        """Induced subdigraph relabelled to ``0..k-1``; also returns new-to-old ids."""
        old = list(vertices)
        new = {v: i for i, v in enumerate(old)}
        arcs = frozenset(
            (new[u], new[v]) for u, v in self.arcs if u in new and v in new
        )
        return Digraph(len(old), arcs, self.oriented), old


# -- weights -------------------------------------------------------------


def unit_weights(n: int) -> Weights:
    return (Fraction(1),) * n


def as_weights(w: Sequence[Fraction | int] | None, n: int) -> Weights:
    """Validate a weight sequence for an ``n``-vertex digraph (``None`` means unit)."""
    if w is None:
        return unit_weights(n)
    if len(w) != n:
        raise ValueError(f"expected {n} weights, got {len(w)}")
    out = tuple(Fraction(x) for x in w)
    for i, x in enumerate(out):
        if x <= 0:
            raise ValueError(f"weight of vertex {i} must be positive, got {x}")
    return out


def weight_of(w: Weights, mask: int) -> Fraction:
    return sum((w[v] for v in bits(mask)), Fraction(0))


def integer_weights(w: Weights) -> tuple[list[int], int]:
    """Scale weights to integers; returns (scaled, scale).

    Every comparison between sums of weights (or of products of two weights)
    is preserved under a common positive scale.
    """
    scale = math.lcm(*(x.denominator for x in w)) if w else 1
    return [int(x * scale) for x in w], scale


# -- neighbourhoods ------------------------------------------------------


def out_neighbors(d: Digraph, v: int) -> frozenset[int]:
    d._check(v)
    return frozenset(bits(d.out_mask[v]))


def in_neighbors(d: Digraph, v: int) -> frozenset[int]:
    d._check(v)
    return frozenset(bits(d.in_mask[v]))


def second_out_neighbors(d: Digraph, v: int) -> frozenset[int]:
    """Vertices at directed distance exactly two from ``v``."""
    return frozenset(bits(d.second_out_mask(v)))


def second_in_neighbors(d: Digraph, v: int) -> frozenset[int]:
    return frozenset(bits(d.second_in_mask(v)))


def is_whole(d: Digraph, v: int) -> bool:
    d._check(v)
    return (d.out_mask[v] | d.in_mask[v]) == ((1 << d.n) - 1) & ~(1 << v)


def is_sink(d: Digraph, v: int) -> bool:
    d._check(v)
    return d.out_mask[v] == 0


def sinks(d: Digraph) -> list[int]:
    return [v for v in d.vertices() if d.out_mask[v] == 0]


def missing_edges(d: Digraph) -> list[MissingEdge]:
    return [
        (u, v)
        for u in range(d.n)
        for v in range(u + 1, d.n)
        if not d.adjacent(u, v)
    ]


def missing_graph(d: Digraph) -> tuple[frozenset[MissingEdge], frozenset[int]]:
    """Missing edges and the non-whole vertices that carry them."""
    edges = missing_edges(d)
    return frozenset(edges), frozenset(x for e in edges for x in e)


def is_matching(edges: Iterable[MissingEdge]) -> bool:
    seen: set[int] = set()
    for u, v in edges:
        if u in seen or v in seen:
            return False
        seen.update((u, v))
    return True


def is_tournament(d: Digraph) -> bool:
    return d.oriented and len(d.arcs) == d.n * (d.n - 1) // 2


# -- second neighbourhood property --------------------------------------


def has_snp(d: Digraph, w: Sequence[Fraction | int] | None, v: int) -> bool:
    """Weighted SNP: w(N+(v)) <= w(N++(v)), compared exactly."""
    w = as_weights(w, d.n)
    return weight_of(w, d.out_mask[v]) <= weight_of(w, d.second_out_mask(v))


def snp_oracle(d: Digraph, w: Sequence[Fraction | int] | None = None) -> frozenset[int]:
    """Brute force: every vertex with the (weighted) SNP."""
    w = as_weights(w, d.n)
    return frozenset(v for v in d.vertices() if has_snp(d, w, v))
