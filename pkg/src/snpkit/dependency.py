"""Missing-edge dependency digraph and the block structure built on it."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

from .digraph import Digraph, MissingEdge, bits, is_whole, missing_edges
from .errors import NotMissingEdge


def _require_missing(d: Digraph, u: int, v: int) -> None:
    if u == v or d.adjacent(u, v):
        raise NotMissingEdge(f"{{{u}, {v}}} is not a missing edge")


def loses_to(d: Digraph, e1: tuple[int, int], e2: tuple[int, int]) -> bool:
    """Does missing edge x1y1 lose to x2y2 under the pairing x1->x2, y1->y2?

    Requires x1 -> x2 and y1 -> y2, with y2 out of reach of x1 and x2 out of
    reach of y1 within two steps.
    """
    x1, y1 = e1
    x2, y2 = e2
    _require_missing(d, x1, y1)
    _require_missing(d, x2, y2)
    return (
        d.has_arc(x1, x2)
        and d.has_arc(y1, y2)
        and not d.closed_reach_mask(x1) >> y2 & 1
        and not d.closed_reach_mask(y1) >> x2 & 1
    )


@dataclass(frozen=True)
class DeltaArc:
    source: MissingEdge
    target: MissingEdge
    pairing: tuple[tuple[int, int], tuple[int, int]]  # ((x1, x2), (y1, y2))

    def image(self, x: int) -> int:
        for a, b in self.pairing:
            if a == x:
                return b
        raise KeyError(x)


@dataclass(frozen=True)
class DependencyDigraph:
    nodes: tuple[MissingEdge, ...]
    arcs: tuple[DeltaArc, ...]

    def out_arcs(self, e: MissingEdge) -> list[DeltaArc]:
        return [a for a in self.arcs if a.source == e]

    def in_arcs(self, e: MissingEdge) -> list[DeltaArc]:
        return [a for a in self.arcs if a.target == e]

    def in_degree(self, e: MissingEdge) -> int:
        return sum(1 for a in self.arcs if a.target == e)

    def out_degree(self, e: MissingEdge) -> int:
        return sum(1 for a in self.arcs if a.source == e)


def dependency_digraph(d: Digraph) -> DependencyDigraph:
    nodes = tuple(missing_edges(d))
    reach = [d.closed_reach_mask(v) for v in range(d.n)]
    arcs = []
    for e1 in nodes:
        for e2 in nodes:
            if e1 == e2:
                continue
            a, b = e1
            for x2, y2 in (e2, e2[::-1]):
                if (d.has_arc(a, x2) and d.has_arc(b, y2)
                        and not reach[a] >> y2 & 1 and not reach[b] >> x2 & 1):
                    arcs.append(DeltaArc(e1, e2, ((a, x2), (b, y2))))
    return DependencyDigraph(nodes, tuple(arcs))


def convenient_orientations(d: Digraph, e: MissingEdge) -> frozenset[tuple[int, int]]:
    """Orientations (a, b) of a missing edge such that every in-neighbour of
    ``a`` reaches ``b`` in one or two steps."""
    a, b = e
    _require_missing(d, a, b)
    found = set()
    for x, y in ((a, b), (b, a)):
        if all(d.closed_reach_mask(v) >> y & 1 for v in bits(d.in_mask[x])):
            found.add((x, y))
    return frozenset(found)


def is_good_missing_edge(d: Digraph, e: MissingEdge) -> bool:
    return bool(convenient_orientations(d, e))


def good_edge_lemma_check(d: Digraph, delta: DependencyDigraph | None = None) -> bool:
    """A missing edge is good exactly when nothing loses to it."""
    delta = delta or dependency_digraph(d)
    return all(
        is_good_missing_edge(d, e) == (delta.in_degree(e) == 0) for e in delta.nodes
    )


# -- components, K sets and J blocks --------------------------------------


@dataclass(frozen=True)
class DeltaComponent:
    edges: tuple[MissingEdge, ...]
    kind: str  # "path", "cycle" or "other"
    vertices: frozenset[int]  # K(C)


@dataclass(frozen=True)
class IntervalStructure:
    components: tuple[DeltaComponent, ...]
    blocks: tuple[frozenset[int], ...]  # K(xi) for each component xi of the interval graph
    block_components: tuple[tuple[int, ...], ...]  # indices into ``components`` per block
    j: tuple[frozenset[int], ...]  # J(v) for every vertex

    def J(self, v: int) -> frozenset[int]:
        return self.j[v]


def _weak_components(nodes: Iterable[MissingEdge], arcs: Iterable[DeltaArc]) -> list[list[MissingEdge]]:
    parent = {e: e for e in nodes}

    def find(e: MissingEdge) -> MissingEdge:
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    for a in arcs:
        ra, rb = find(a.source), find(a.target)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[MissingEdge, list[MissingEdge]] = {}
    for e in parent:
        groups.setdefault(find(e), []).append(e)
    return [sorted(g) for _, g in sorted(groups.items())]


def _component_kind(edges: list[MissingEdge], delta: DependencyDigraph) -> str:
    members = set(edges)
    arcs = [a for a in delta.arcs if a.source in members]
    indeg = {e: 0 for e in edges}
    outdeg = {e: 0 for e in edges}
    for a in arcs:
        outdeg[a.source] += 1
        indeg[a.target] += 1
    if any(indeg[e] > 1 or outdeg[e] > 1 for e in edges):
        return "other"
    if all(indeg[e] == 1 and outdeg[e] == 1 for e in edges):
        return "cycle"
    if len(arcs) == len(edges) - 1:
        return "path"
    return "other"


def interval_structure(d: Digraph, delta: DependencyDigraph | None = None) -> IntervalStructure:
    delta = delta or dependency_digraph(d)
    comps = []
    for group in _weak_components(delta.nodes, delta.arcs):
        comps.append(DeltaComponent(
            tuple(group),
            _component_kind(group, delta),
            frozenset(x for e in group for x in e),
        ))

    # components of the intersection graph of the K(C) sets
    parent = list(range(len(comps)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owner: dict[int, int] = {}
    for i, c in enumerate(comps):
        for v in c.vertices:
            if v in owner:
                ri, rj = find(i), find(owner[v])
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
            else:
                owner[v] = i
    grouped: dict[int, list[int]] = {}
    for i in range(len(comps)):
        grouped.setdefault(find(i), []).append(i)
    block_components = tuple(tuple(g) for _, g in sorted(grouped.items()))
    blocks = tuple(
        frozenset().union(*(comps[i].vertices for i in g)) for g in block_components
    )

    j = []
    for v in range(d.n):
        if is_whole(d, v):
            j.append(frozenset((v,)))
        else:
            j.append(next(b for b in blocks if v in b))
    return IntervalStructure(tuple(comps), blocks, block_components, tuple(j))


def is_interval(d: Digraph, block: Iterable[int]) -> bool:
    """All members see the same out- and in-neighbours outside ``block``."""
    members = list(block)
    if not members:
        return True
    inside = 0
    for v in members:
        inside |= 1 << v
    outside = ~inside
    out0 = d.out_mask[members[0]] & outside
    in0 = d.in_mask[members[0]] & outside
    return all(
        d.out_mask[v] & outside == out0 and d.in_mask[v] & outside == in0
        for v in members[1:]
    )


def is_good_digraph(d: Digraph, structure: IntervalStructure | None = None) -> bool:
    structure = structure or interval_structure(d)
    return all(is_interval(d, b) for b in structure.blocks)

