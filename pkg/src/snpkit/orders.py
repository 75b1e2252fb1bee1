"""Weighted median orders.

An ordering is a tuple of vertex ids; position 0 comes first and the last
entry is the feed vertex.  The weight of an ordering is the total weight of
its forward arcs, an arc (x, y) weighing w(x) * w(y).
"""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .digraph import Digraph, as_weights, bits, integer_weights
from .errors import InstanceTooLarge

Ordering = tuple[int, ...]

EXACT_LIMIT = 20


def check_permutation(order: Sequence[int], n: int) -> Ordering:
    order = tuple(order)
    if len(order) != n or set(order) != set(range(n)):
        raise ValueError(f"{order!r} is not a permutation of 0..{n - 1}")
    return order


def order_weight(d: Digraph, w: Sequence[Fraction | int] | None, order: Sequence[int]) -> Fraction:
    w = as_weights(w, d.n)
    pos = {v: i for i, v in enumerate(check_permutation(order, d.n))}
    return sum(
        (w[x] * w[y] for x, y in d.arcs if pos[x] < pos[y]), Fraction(0)
    )


class SubsetDP:
    """Subset dynamic programme for the maximum forward weight.

    ``best[R]`` is the largest forward weight of an ordering of the vertex set
    ``R`` counting only arcs inside ``R``.  It is filled by choosing the
    first vertex ``v`` of the ordering:

        best[R] = max_v  w(v) * w(N+(v) & R) + best[R - v]

    which is the usual "last vertex" recursion read from the other end.  Reading
    it this way makes greedy reconstruction with the smallest feasible first
    vertex return the lexicographically smallest optimal ordering.
    Weights are scaled to integers first, so all comparisons are exact.
    """

    def __init__(self, d: Digraph, w: Sequence[Fraction | int] | None = None,
                 limit: int = EXACT_LIMIT) -> None:
        if d.n > limit:
            raise InstanceTooLarge(f"n={d.n} exceeds the exact solver limit {limit}")
        self.d = d
        self.w = as_weights(w, d.n)
        wi, scale = integer_weights(self.w)
        self.wi = wi
        self.scale = scale
        n = d.n
        size = 1 << n
        wsum = [0] * size
        for m in range(1, size):
            low = m & -m
            wsum[m] = wsum[m ^ low] + wi[low.bit_length() - 1]
        best = [0] * size
        out = d.out_mask
        for r in range(1, size):
            top = -1
            rest = r
            while rest:
                low = rest & -rest
                v = low.bit_length() - 1
                val = wi[v] * wsum[out[v] & r] + best[r ^ low]
                if val > top:
                    top = val
                rest ^= low
            best[r] = top
        self.wsum = wsum
        self.best = best
        self.full = size - 1

    def _gain(self, v: int, r: int) -> int:
        return self.wi[v] * self.wsum[self.d.out_mask[v] & r]

    def _choices(self, r: int) -> Iterator[int]:
        target = self.best[r]
        for v in bits(r):
            if self._gain(v, r) + self.best[r & ~(1 << v)] == target:
                yield v

    @property
    def optimum(self) -> Fraction:
        return Fraction(self.best[self.full], self.scale * self.scale)

    def lexmin_order(self) -> Ordering:
        r = self.full
        seq = []
        while r:
            v = next(self._choices(r))
            seq.append(v)
            r &= ~(1 << v)
        return tuple(seq)

    def all_orders(self) -> Iterator[Ordering]:
        """Every maximum-weight ordering, in lexicographic order."""
        seq: list[int] = []

        def walk(r: int) -> Iterator[Ordering]:
            if not r:
                yield tuple(seq)
                return
            for v in list(self._choices(r)):
                seq.append(v)
                yield from walk(r & ~(1 << v))
                seq.pop()

        yield from walk(self.full)

    def feeds(self) -> frozenset[int]:
        """Vertices that end at least one maximum-weight ordering."""
        d, full = self.d, self.full
        return frozenset(
            f for f in range(d.n)
            if self.best[full & ~(1 << f)] + self.wi[f] * self.wsum[d.in_mask[f]]
            == self.best[full]
        )

    def is_optimal(self, order: Sequence[int]) -> bool:
        return order_weight(self.d, self.w, order) == self.optimum


def exact_median_order(d: Digraph, w: Sequence[Fraction | int] | None = None,
                       limit: int = EXACT_LIMIT) -> Ordering:
    """Lexicographically smallest maximum-weight ordering."""
    return SubsetDP(d, w, limit).lexmin_order()


def all_median_orders(d: Digraph, w: Sequence[Fraction | int] | None = None,
                      limit: int = EXACT_LIMIT) -> Iterator[Ordering]:
    return SubsetDP(d, w, limit).all_orders()


def median_weight(d: Digraph, w: Sequence[Fraction | int] | None = None,
                  limit: int = EXACT_LIMIT) -> Fraction:
    return SubsetDP(d, w, limit).optimum


# -- feedback property ----------------------------------------------------


@dataclass(frozen=True)
class FeedbackResult:
    """Outcome of a feedback-property check.

    ``violation`` is the lexicographically first 0-based position pair (i, j)
    that fails; ``kind`` says which side fails there: ``"start"`` when the
    first vertex of the interval has more in- than out-weight inside it,
    ``"end"`` when the last vertex has more out- than in-weight.
    """

    holds: bool
    violation: tuple[int, int] | None = None
    kind: str | None = None

    def __bool__(self) -> bool:
        return self.holds


def feedback_property_holds(d: Digraph, w: Sequence[Fraction | int] | None,
                            order: Sequence[int]) -> FeedbackResult:
    w = as_weights(w, d.n)
    order = check_permutation(order, d.n)
    wi, _ = integer_weights(w)
    n = d.n
    found: list[tuple[int, int, str]] = []

    for i in range(n):
        vi = order[i]
        balance = 0  # out-weight minus in-weight of vi inside [i, j]
        for j in range(i + 1, n):
            u = order[j]
            if d.out_mask[vi] >> u & 1:
                balance += wi[u]
            if d.in_mask[vi] >> u & 1:
                balance -= wi[u]
            if balance < 0:
                found.append((i, j, "start"))
                break
        if found:
            break

    for j in range(n):
        vj = order[j]
        balance = 0  # in-weight minus out-weight of vj inside [i, j]
        for i in range(j - 1, -1, -1):
            u = order[i]
            if d.in_mask[vj] >> u & 1:
                balance += wi[u]
            if d.out_mask[vj] >> u & 1:
                balance -= wi[u]
            if balance < 0:
                found.append((i, j, "end"))

    if not found:
        return FeedbackResult(True)
    i, j, kind = min(found)
    return FeedbackResult(False, (i, j), kind)


def local_median_order(d: Digraph, w: Sequence[Fraction | int] | None,
                       start: Sequence[int]) -> Ordering:
    """Insertion local search until the feedback property holds.

    Heuristic: the result need not be a maximum-weight ordering.  Each move
    strictly increases the weight, so the loop terminates.
    """
    w = as_weights(w, d.n)
    order = list(check_permutation(start, d.n))
    while True:
        res = feedback_property_holds(d, w, order)
        if res.holds:
            return tuple(order)
        i, j = res.violation
        if res.kind == "start":
            v = order.pop(i)
            order.insert(j, v)
        else:
            v = order.pop(j)
            order.insert(i, v)


# -- classification ------------------------------------------------------


@dataclass(frozen=True)
class OrderClassification:
    feed: int
    out_of_feed: frozenset[int]
    good: frozenset[int]
    bad: frozenset[int]

    @property
    def good_mask(self) -> int:
        return sum(1 << v for v in self.good)


def classify_order(d: Digraph, order: Sequence[int]) -> OrderClassification:
    """Split the vertices other than the feed into out-neighbours, good and bad.

    ``v`` is good when it is not an out-neighbour of the feed ``f`` and some
    out-neighbour of ``f`` sits no later than ``v`` and points to it.  The
    feed itself is in none of the three classes.
    """
    order = check_permutation(order, d.n)
    if not order:
        raise ValueError("cannot classify the empty ordering")
    feed = order[-1]
    fout = d.out_mask[feed]
    seen_out = 0  # out-neighbours of the feed met so far
    good, bad = [], []
    for v in order[:-1]:
        if fout >> v & 1:
            seen_out |= 1 << v
        elif d.in_mask[v] & seen_out:
            good.append(v)
        else:
            bad.append(v)
    return OrderClassification(feed, frozenset(bits(fout)), frozenset(good), frozenset(bad))
