"""Oriented graphs missing a matching: chain labels, cycle checks, the
orientation of path components, and the two SNP certificates."""

from __future__ import annotations

from dataclasses import dataclass, field

from .dependency import (
    DeltaComponent,
    DependencyDigraph,
    convenient_orientations,
    dependency_digraph,
    interval_structure,
    is_good_digraph,
    is_interval,
    loses_to,
)
from .digraph import (
    Arc,
    Digraph,
    MissingEdge,
    bits,
    has_snp,
    is_matching,
    mask_of,
    missing_edges,
    sinks,
)
from .errors import Finding, PreconditionError
from .good_orders import (
    good_median_order,
    good_median_orders,
    is_good_median_order,
    sed_classify,
)
from .orders import Ordering, SubsetDP, classify_order

SWEEP_LIMIT = 8


def require_matching(d: Digraph) -> list[MissingEdge]:
    edges = missing_edges(d)
    if not d.oriented:
        raise PreconditionError("expected an oriented graph")
    if not is_matching(edges):
        raise PreconditionError(f"missing graph {edges} is not a matching")
    return edges


def delta_structure_check(d: Digraph, delta: DependencyDigraph | None = None) -> bool:
    """Every node of the dependency digraph has in- and out-degree at most one."""
    require_matching(d)
    delta = delta or dependency_digraph(d)
    return all(delta.in_degree(e) <= 1 and delta.out_degree(e) <= 1 for e in delta.nodes)


# -- chain labels ---------------------------------------------------------------


@dataclass(frozen=True)
class ChainLabeling:
    """Edges e_1..e_k of a path or cycle of the dependency digraph, with
    endpoints named so that every losing arc sends a_i to a_{i+1} and b_i
    to b_{i+1}.  For a cycle, ``wrap`` is the image of a_k under the arc
    from e_k back to e_1."""

    kind: str
    a: tuple[int, ...]
    b: tuple[int, ...]
    wrap: int | None = None

    @property
    def k(self) -> int:
        return len(self.a)

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self.a) | frozenset(self.b)

    def rotated(self, i: int) -> list[tuple[int, int]]:
        """Pairs (A_t, B_t), t = 0..k-1, starting at e_{i+1} (0-based ``i``).

        Past the end of an even cycle the roles of a and b swap.
        """
        k = self.k
        out = []
        for t in range(k):
            idx = i + t
            a, b = self.a[idx % k], self.b[idx % k]
            if idx >= k and k % 2 == 0:
                a, b = b, a
            out.append((a, b))
        return out


def chain_labeling(delta: DependencyDigraph, comp: DeltaComponent,
                   first: tuple[int, int] | None = None) -> ChainLabeling:
    """Label a path or cycle component by walking the stored arc pairings.

    Paths start at their edge of in-degree zero, cycles at their smallest
    edge.  ``first`` fixes (a_1, b_1); by default a_1 is the smaller id.
    """
    if comp.kind not in ("path", "cycle"):
        raise PreconditionError(f"component of kind {comp.kind!r} has no chain labeling")
    members = set(comp.edges)
    succ = {a.source: a for a in delta.arcs if a.source in members}
    if comp.kind == "path":
        targets = {a.target for a in succ.values()}
        start = next(e for e in comp.edges if e not in targets)
    else:
        start = comp.edges[0]
    a1, b1 = first or start
    if {a1, b1} != set(start):
        raise PreconditionError(f"{first} does not orient the first edge {start}")
    a, b = [a1], [b1]
    e = start
    for _ in range(len(comp.edges) - 1):
        arc = succ[e]
        a.append(arc.image(a[-1]))
        b.append(arc.image(b[-1]))
        e = arc.target
    wrap = succ[e].image(a[-1]) if comp.kind == "cycle" else None
    return ChainLabeling(comp.kind, tuple(a), tuple(b), wrap)


# -- cycle lemmas -----------------------------------------------------------------


@dataclass
class CycleReport:
    k: int
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def cycle_lemmas_check(d: Digraph, lab: ChainLabeling) -> CycleReport:
    """Verify the structure forced on K(C) by a k-cycle C of the dependency digraph.

    Checks the parity of the wrap-around arc, that K(C) is an interval of
    ``d``, the alternating neighbourhoods of every a_i and b_i inside
    D[K(C)], the second out-neighbourhoods there, and that all in-, out- and
    second out-degrees there equal k-1.  Failures carry a witness.
    """
    k = lab.k
    rep = CycleReport(k)
    if lab.kind != "cycle" or k < 2:
        rep.failures.append(f"not a cycle of length >= 2: {lab}")
        return rep
    fail = rep.failures.append

    ak, bk = lab.a[-1], lab.b[-1]
    a1, b1 = lab.a[0], lab.b[0]
    if k % 2:
        expected, target = a1, (a1, b1)
    else:
        expected, target = b1, (b1, a1)
    if lab.wrap != expected:
        fail(f"wrap-around sends a_k={ak} to {lab.wrap}, expected {expected}")
    if not loses_to(d, (ak, bk), target):
        fail(f"{(ak, bk)} does not lose to {target}")

    block = sorted(lab.vertices)
    if not is_interval(d, block):
        fail(f"K(C)={block} is not an interval")

    sub, old = d.induced(block)
    new = {v: i for i, v in enumerate(old)}

    def nbrs(mask: int) -> frozenset[int]:
        return frozenset(old[i] for i in bits(mask))

    def out_(v):
        return nbrs(sub.out_mask[new[v]])

    def in_(v):
        return nbrs(sub.in_mask[new[v]])

    def second(v):
        return nbrs(sub.second_out_mask(new[v]))

    for i in range(k):
        rot = lab.rotated(i)
        (a, b), (a_next, b_next) = rot[0], rot[1]
        fwd = frozenset(rot[t][0] if t % 2 else rot[t][1] for t in range(1, k))
        back = frozenset(rot[t][1] if t % 2 else rot[t][0] for t in range(1, k))
        if out_(a) != fwd or in_(b) != fwd:
            fail(f"i={i + 1}: N+(a)={sorted(out_(a))}, N-(b)={sorted(in_(b))}, expected {sorted(fwd)}")
        if in_(a) != back or out_(b) != back:
            fail(f"i={i + 1}: N-(a)={sorted(in_(a))}, N+(b)={sorted(out_(b))}, expected {sorted(back)}")
        want_a = (in_(a) | {b}) - {b_next}
        want_b = (in_(b) | {a}) - {a_next}
        if second(a) != want_a:
            fail(f"i={i + 1}: N++({a})={sorted(second(a))}, expected {sorted(want_a)}")
        if second(b) != want_b:
            fail(f"i={i + 1}: N++({b})={sorted(second(b))}, expected {sorted(want_b)}")

    for v in block:
        degs = (len(out_(v)), len(in_(v)), len(second(v)))
        if degs != (k - 1,) * 3:
            fail(f"vertex {v}: (d+, d-, d++) = {degs}, expected {k - 1}")
    return rep


def cycle_labelings(d: Digraph, delta: DependencyDigraph | None = None) -> list[ChainLabeling]:
    delta = delta or dependency_digraph(d)
    structure = interval_structure(d, delta)
    return [chain_labeling(delta, c) for c in structure.components if c.kind == "cycle"]


# -- orienting path components ------------------------------------------------


@dataclass(frozen=True)
class OrientationResult:
    added: frozenset[Arc]  # F
    dprime: Digraph
    paths: tuple[ChainLabeling, ...]  # one per path component, oriented a_i -> b_i


def orient_paths(d: Digraph) -> OrientationResult:
    """Orient every missing edge on a path component of the dependency digraph.

    The first edge of a path is good, so it has a convenient orientation
    (a_1, b_1); the whole chain is then oriented a_i -> b_i.  When both
    orientations are convenient a_1 is the smaller id.
    """
    require_matching(d)
    delta = dependency_digraph(d)
    if not delta_structure_check(d, delta):
        raise Finding("dependency digraph of a matching has a vertex of degree > 1")
    structure = interval_structure(d, delta)
    added: set[Arc] = set()
    paths = []
    for comp in structure.components:
        if comp.kind != "path":
            continue
        start = chain_labeling(delta, comp)
        e1 = (start.a[0], start.b[0])
        conv = convenient_orientations(d, e1)
        if not conv:
            raise Finding(f"first edge {e1} of a path has no convenient orientation")
        first = min(conv)
        lab = chain_labeling(delta, comp, first)
        paths.append(lab)
        added.update(zip(lab.a, lab.b))
    dprime = d.with_arcs(add=added)
    new_structure = interval_structure(dprime)
    if any(c.kind != "cycle" for c in new_structure.components):
        raise Finding(f"after orienting paths the dependency digraph still has non-cycles: {d}")
    if not is_good_digraph(dprime, new_structure):
        raise Finding("oriented digraph D' is not good")
    return OrientationResult(frozenset(added), dprime, tuple(paths))


# -- the feed vertex certificate ---------------------------------------------


@dataclass
class FeedSnpReport:
    order: Ordering
    feeds: tuple[int, ...]
    failures: list[str] = field(default_factory=list)
    nongood_failures: list[str] = field(default_factory=list)
    reorientation: dict[str, bool] | None = None

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def proof_steps_ok(self) -> bool:
        return self.reorientation is None or all(self.reorientation.values())


def _reorientation_step(d: Digraph, orient: OrientationResult, order: Ordering) -> dict[str, bool] | None:
    """When the feed is the tail a_k of the last arc of an oriented path, the
    argument reverses that arc to get D''.  Check what it relies on."""
    f = order[-1]
    for lab in orient.paths:
        if lab.a[-1] != f:
            continue
        g = lab.b[-1]
        d2 = orient.dprime.with_arcs(add=[(g, f)], remove=[(f, g)])
        s2 = interval_structure(d2)
        good = is_good_digraph(d2, s2)
        return {
            "median_in_D2": SubsetDP(d2).is_optimal(order),
            "D2_good": good,
            "good_median_in_D2": good and is_good_median_order(d2, None, order, s2),
            "same_out_as_D": d2.out_mask[f] == d.out_mask[f],
            "second_out_within_D": d2.second_out_mask(f) & ~d.second_out_mask(f) == 0,
            "snp_in_D2": has_snp(d2, None, f),
        }
    return None


def feed_snp_theorem_check(d: Digraph, sweep: bool | None = None) -> FeedSnpReport:
    """Every feed vertex of a good median order of D' has the SNP in D and D'.

    With ``sweep`` (default for n <= 8) every good median order of D' is
    enumerated; otherwise the canonical one is certified.  Feed vertices of
    median orders that are not good are checked separately and reported in
    ``nongood_failures`` only.
    """
    orient = orient_paths(d)
    dp_graph = orient.dprime
    structure = interval_structure(dp_graph)
    order = good_median_order(dp_graph, None, structure)
    if sweep is None:
        sweep = d.n <= SWEEP_LIMIT
    if sweep:
        dp = SubsetDP(dp_graph)
        feeds = sorted({o[-1] for o in good_median_orders(dp_graph, None, structure, dp)})
        others = sorted(dp.feeds() - set(feeds))
    else:
        feeds, others = [order[-1]], []
    rep = FeedSnpReport(order, tuple(feeds))
    for f in feeds:
        if not has_snp(dp_graph, None, f):
            rep.failures.append(f"feed {f} lacks the SNP in D'")
        if not has_snp(d, None, f):
            rep.failures.append(f"feed {f} lacks the SNP in D")
    for f in others:
        if not (has_snp(dp_graph, None, f) and has_snp(d, None, f)):
            rep.nongood_failures.append(f"feed {f} of a non-good median order lacks the SNP")
    rep.reorientation = _reorientation_step(d, orient, order)
    return rep


# -- two vertices with the SNP ----------------------------------------------------


@dataclass
class TwoSnpReport:
    first: int
    second: int
    route: str  # "block", "stable" or "periodic"
    rank: int | None = None
    notes: list[str] = field(default_factory=list)
    confirmed: tuple[bool, bool] = (False, False)

    @property
    def vertices(self) -> tuple[int, int]:
        return self.first, self.second

    @property
    def ok(self) -> bool:
        return self.first != self.second and all(self.confirmed)


def two_snp_check(d: Digraph) -> TwoSnpReport:
    """Produce two distinct SNP vertices of a sink-free D whose dependency
    digraph has no path components, following the sedimentation argument."""
    require_matching(d)
    if d.n < 2:
        raise PreconditionError("need at least two vertices")
    if sinks(d):
        raise PreconditionError(f"digraph has sinks {sinks(d)}")
    delta = dependency_digraph(d)
    structure = interval_structure(d, delta)
    if any(c.kind != "cycle" for c in structure.components):
        raise PreconditionError("dependency digraph has path components (F is not empty)")

    order = good_median_order(d, None, structure)
    xn = order[-1]
    if len(structure.J(xn)) > 1:
        # every vertex of a cycle block has the SNP; the block ends the order
        rep = TwoSnpReport(xn, order[-2], "block")
        rep.confirmed = (has_snp(d, None, xn), has_snp(d, None, order[-2]))
        return rep

    d1, old = d.induced(sorted(order[:-1]))
    new = {v: i for i, v in enumerate(old)}
    prefix = tuple(new[v] for v in order[:-1])
    s1 = interval_structure(d1)
    if not is_good_digraph(d1, s1):
        raise Finding("D minus its whole feed vertex is not good")
    outcome = sed_classify(d1, None, prefix, s1)

    if outcome.kind == "stable":
        y = old[outcome.trace[outcome.rank][-1]]
        rep = TwoSnpReport(xn, y, "stable", outcome.rank)
    else:
        xj = max(bits(d.out_mask[xn]), key=order.index)
        for q, o in enumerate(outcome.trace):
            cls = classify_order(d1, o)
            if new[xj] in cls.bad:
                break
        else:
            raise Finding(f"out-neighbour {xj} of {xn} is never bad during sedimentation")
        y = old[o[-1]]
        rep = TwoSnpReport(xn, y, "periodic", q)
        witness = mask_of(old[v] for v in cls.good) | 1 << xj
        if witness & ~d.second_out_mask(y):
            rep.notes.append(f"G u {{x_j}} not inside N++({y})")
    if not d.has_arc(rep.second, xn):
        rep.notes.append(f"{rep.second} does not point to the whole feed {xn}")
    rep.confirmed = (has_snp(d, None, xn), has_snp(d, None, rep.second))
    return rep
