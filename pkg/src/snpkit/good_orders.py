"""Good median orders, the feed-block inequality and sedimentation."""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .dependency import IntervalStructure, interval_structure, is_good_digraph, is_interval
from .digraph import Digraph, as_weights, has_snp, mask_of, weight_of
from .errors import Finding, NotAnInterval, NotGoodDigraph, NotMedianOrder
from .orders import (
    Ordering,
    SubsetDP,
    check_permutation,
    classify_order,
    order_weight,
)


def is_contiguous(order: Sequence[int], block: Iterable[int]) -> bool:
    block = set(block)
    pos = [i for i, v in enumerate(order) if v in block]
    return not pos or pos[-1] - pos[0] == len(pos) - 1


def contract_intervals(
    d: Digraph,
    w: Sequence[Fraction | int] | None,
    order: Sequence[int],
    intervals: Iterable[Iterable[int]],
    check_optimal: bool = True,
) -> Ordering:
    """Make every given interval of ``d`` contiguous in a median order.

    Repeatedly takes two members of one interval with only non-members
    between them and moves the earlier one to sit just before the later
    one.  On a median order such a move never changes the weight, and the
    last vertex is never moved past.
    """
    w = as_weights(w, d.n)
    order = check_permutation(order, d.n)
    blocks = [frozenset(b) for b in intervals]
    seen: set[int] = set()
    for b in blocks:
        if seen & b:
            raise NotAnInterval("intervals must be pairwise disjoint")
        seen |= b
        if not is_interval(d, b):
            raise NotAnInterval(f"{sorted(b)} is not an interval of the digraph")
    if check_optimal and not SubsetDP(d, w).is_optimal(order):
        raise NotMedianOrder(f"{order} is not a maximum-weight ordering")

    seq = list(order)
    for b in blocks:
        while True:
            pos = [i for i, v in enumerate(seq) if v in b]
            gap = next((k for k in range(len(pos) - 1) if pos[k + 1] > pos[k] + 1), None)
            if gap is None:
                break
            i, j = pos[gap], pos[gap + 1]
            seq.insert(j - 1, seq.pop(i))
    result = tuple(seq)
    if check_optimal and order_weight(d, w, result) != order_weight(d, w, order):
        raise Finding(f"contraction changed the weight of median order {order}")
    return result


def is_good_median_order(
    d: Digraph,
    w: Sequence[Fraction | int] | None,
    order: Sequence[int],
    structure: IntervalStructure | None = None,
    dp: SubsetDP | None = None,
) -> bool:
    structure = structure or interval_structure(d)
    dp = dp or SubsetDP(d, w)
    return dp.is_optimal(order) and all(is_contiguous(order, b) for b in structure.blocks)


def good_median_order(
    d: Digraph,
    w: Sequence[Fraction | int] | None = None,
    structure: IntervalStructure | None = None,
) -> Ordering:
    """Lexicographically smallest median order with every K(xi) block made contiguous."""
    structure = structure or interval_structure(d)
    if not is_good_digraph(d, structure):
        raise NotGoodDigraph("some K(xi) block is not an interval of the digraph")
    dp = SubsetDP(d, w)
    order = contract_intervals(d, w, dp.lexmin_order(), structure.blocks, check_optimal=False)
    if not dp.is_optimal(order):
        raise Finding(f"contraction lost optimality: {order}")
    return order


def good_median_orders(
    d: Digraph,
    w: Sequence[Fraction | int] | None = None,
    structure: IntervalStructure | None = None,
    dp: SubsetDP | None = None,
):
    """Every median order in which all K(xi) blocks are contiguous."""
    structure = structure or interval_structure(d)
    dp = dp or SubsetDP(d, w)
    for order in dp.all_orders():
        if all(is_contiguous(order, b) for b in structure.blocks):
            yield order


# -- the inequality on the feed block ------------------------------------


@dataclass(frozen=True)
class InequalityRow:
    vertex: int
    outside_out: Fraction  # w(N+(x) \ J(f))
    outside_good: Fraction  # w(G_L \ J(f))
    snp_in_block: bool
    snp_in_digraph: bool

    @property
    def holds(self) -> bool:
        return self.outside_out <= self.outside_good

    @property
    def lifts(self) -> bool:
        return self.snp_in_digraph or not self.snp_in_block


@dataclass(frozen=True)
class InequalityReport:
    order: Ordering
    feed: int
    block: frozenset[int]
    rows: tuple[InequalityRow, ...]

    @property
    def ok(self) -> bool:
        return all(r.holds and r.lifts for r in self.rows)


def check_main_inequality(
    d: Digraph,
    w: Sequence[Fraction | int] | None,
    order: Sequence[int],
    structure: IntervalStructure | None = None,
    verify_order: bool = True,
) -> InequalityReport:
    """For every x in J(f): w(N+(x) \\ J(f)) <= w(G_L \\ J(f)).

    Also records whether the SNP of x inside D[J(f)] carries over to D.
    """
    w = as_weights(w, d.n)
    order = check_permutation(order, d.n)
    structure = structure or interval_structure(d)
    if not is_good_digraph(d, structure):
        raise NotGoodDigraph("some K(xi) block is not an interval of the digraph")
    if verify_order and not is_good_median_order(d, w, order, structure):
        raise NotMedianOrder(f"{order} is not a good median order")

    cls = classify_order(d, order)
    block = structure.J(cls.feed)
    outside = ~mask_of(block)
    good_out = weight_of(w, cls.good_mask & outside)
    sub, old = d.induced(sorted(block))
    sub_w = [w[v] for v in old]
    rows = []
    for k, x in enumerate(old):
        rows.append(InequalityRow(
            x,
            weight_of(w, d.out_mask[x] & outside),
            good_out,
            has_snp(sub, sub_w, k),
            has_snp(d, w, x),
        ))
    return InequalityReport(order, cls.feed, block, tuple(rows))


# -- sedimentation ----------------------------------------------------------


def _feed_sides(d: Digraph, w, order: Ordering, structure: IntervalStructure):
    cls = classify_order(d, order)
    block = structure.J(cls.feed)
    outside = ~mask_of(block)
    lhs = weight_of(w, d.out_mask[cls.feed] & outside)
    rhs = weight_of(w, cls.good_mask & outside)
    return cls, block, lhs, rhs


def sed(
    d: Digraph,
    w: Sequence[Fraction | int] | None,
    order: Sequence[int],
    structure: IntervalStructure | None = None,
) -> Ordering:
    """One sedimentation step.

    If the feed's outside out-weight is strictly below the outside good
    weight the order is returned unchanged.  On equality the result is: bad
    vertices outside J(f), then the block J(f), then everything else, each
    part keeping its order from ``order``.
    """
    w = as_weights(w, d.n)
    order = check_permutation(order, d.n)
    structure = structure or interval_structure(d)
    cls, block, lhs, rhs = _feed_sides(d, w, order, structure)
    if lhs > rhs:
        raise NotMedianOrder(
            f"input not a good median order: outside out-weight {lhs} exceeds good weight {rhs}"
        )
    if lhs < rhs:
        return order
    bads = [v for v in order if v in cls.bad and v not in block]
    bad_set = set(bads)
    for b in bads:
        if not structure.J(b) <= bad_set:
            raise Finding(f"bad vertex {b} shares its block with a non-bad vertex in {order}")
    rest = [v for v in order if v not in bad_set and v not in block]
    return tuple(bads) + tuple(v for v in order if v in block) + tuple(rest)


@dataclass(frozen=True)
class SedOutcome:
    kind: str  # "stable" or "periodic"
    rank: int | None  # first strict rank when stable
    cycle: tuple[Ordering, ...]  # repeating orders when periodic
    trace: tuple[Ordering, ...] = field(repr=False)

    @property
    def final(self) -> Ordering:
        return self.trace[-1]


def sed_classify(
    d: Digraph,
    w: Sequence[Fraction | int] | None,
    order: Sequence[int],
    structure: IntervalStructure | None = None,
    dp: SubsetDP | None = None,
    cap: int | None = None,
) -> SedOutcome:
    """Iterate sedimentation until a strict rank (stable) or a repeat (periodic).

    Every order visited is checked to be a good median order of ``d``; a
    failure is a :class:`Finding`.
    """
    w = as_weights(w, d.n)
    order = check_permutation(order, d.n)
    structure = structure or interval_structure(d)
    dp = dp or SubsetDP(d, w)
    if not is_good_median_order(d, w, order, structure, dp):
        raise NotMedianOrder(f"{order} is not a good median order")
    if cap is None:
        cap = 10 * math.factorial(d.n)

    trace = [order]
    index = {order: 0}
    current = order
    for _ in range(cap):
        _, _, lhs, rhs = _feed_sides(d, w, current, structure)
        if lhs < rhs:
            return SedOutcome("stable", len(trace) - 1, (), tuple(trace))
        nxt = sed(d, w, current, structure)
        if not is_good_median_order(d, w, nxt, structure, dp):
            raise Finding(f"sedimentation of {current} gave {nxt}, not a good median order")
        if nxt in index:
            start = index[nxt]
            return SedOutcome("periodic", None, tuple(trace[start:]), tuple(trace))
        index[nxt] = len(trace)
        trace.append(nxt)
        current = nxt
    raise Finding(f"sedimentation did not settle within {cap} steps")
