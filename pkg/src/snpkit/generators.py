"""Instance sources: named fixtures, the cycle gadget, seeded random
instances and exhaustive enumeration."""

from __future__ import annotations

import itertools
import random
from collections.abc import Iterator
from dataclasses import dataclass
from fractions import Fraction

from .digraph import Digraph, Weights, unit_weights

CLASSES = ("tournament", "missing-matching", "good-oriented", "oriented")


def fixtures() -> dict[str, Digraph]:
    def g(n, arcs):
        return Digraph.from_arcs(n, arcs)

    return {
        "C3": g(3, [(0, 1), (1, 2), (2, 0)]),
        "TT3": g(3, [(0, 1), (0, 2), (1, 2)]),
        "G4": g(4, [(0, 2), (2, 1), (1, 3), (3, 0)]),
        "D1": g(4, [(0, 2), (0, 3), (1, 2), (1, 3)]),
        "P5": g(5, [(0, 2), (2, 1), (1, 3), (3, 0), (2, 4), (4, 0), (4, 1), (3, 4)]),
    }


def gadget_labels(k: int) -> list[tuple[int, int]]:
    """(a_i, b_i) vertex ids of :func:`cycle_gadget`, i = 1..k."""
    return [(2 * i, 2 * i + 1) for i in range(k)]


def cycle_gadget(k: int) -> Digraph:
    """Oriented graph on 2k vertices missing the matching {a_i b_i} whose
    dependency digraph is a single k-cycle.

    Let s map a_i -> a_{i+1}, b_i -> b_{i+1}, wrapping a_k -> a_1 for odd k
    and a_k -> b_1 for even k, and let p swap a_i and b_i.  Then
    N+(x) = {s^t(x) : t odd} | {p(s^t(x)) : t even}, for 1 <= t <= k-1.
    """
    if k < 2:
        raise ValueError(f"cycle gadget needs k >= 2, got {k}")

    def step(v: int) -> int:
        i, side = divmod(v, 2)
        if i < k - 1:
            return 2 * (i + 1) + side
        return side if k % 2 else 1 - side

    arcs = set()
    for x in range(2 * k):
        y = x
        for t in range(1, k):
            y = step(y)
            arcs.add((x, y) if t % 2 else (x, y ^ 1))
    return Digraph.from_arcs(2 * k, arcs)


# -- random instances ---------------------------------------------------------


def random_tournament(n: int, seed: int) -> Digraph:
    rng = random.Random(seed)
    arcs = []
    for u, v in itertools.combinations(range(n), 2):
        arcs.append((u, v) if rng.random() < 0.5 else (v, u))
    return Digraph.from_arcs(n, arcs)


def random_missing_matching(n: int, m: int, seed: int) -> Digraph:
    """Tournament minus a seeded random matching of size ``m``."""
    if m < 0 or 2 * m > n:
        raise ValueError(f"cannot place a matching of size {m} on {n} vertices")
    rng = random.Random(seed)
    perm = list(range(n))
    rng.shuffle(perm)
    matched = {frozenset(perm[2 * i:2 * i + 2]) for i in range(m)}
    arcs = []
    for u, v in itertools.combinations(range(n), 2):
        if frozenset((u, v)) in matched:
            continue
        arcs.append((u, v) if rng.random() < 0.5 else (v, u))
    return Digraph.from_arcs(n, arcs)


def random_oriented(n: int, seed: int, density: float = 0.7) -> Digraph:
    """Each pair becomes an arc with probability ``density``, in a random direction."""
    rng = random.Random(seed)
    arcs = []
    for u, v in itertools.combinations(range(n), 2):
        if rng.random() < density:
            arcs.append((u, v) if rng.random() < 0.5 else (v, u))
    return Digraph.from_arcs(n, arcs)


def random_weights(n: int, seed: int, bounds: tuple[int, int] = (1, 10)) -> Weights:
    lo, hi = bounds
    if lo < 1 or hi < lo:
        raise ValueError(f"bad weight bounds {bounds}")
    rng = random.Random(seed)
    return tuple(Fraction(rng.randint(lo, hi), rng.randint(lo, hi)) for _ in range(n))


@dataclass(frozen=True)
class GenSpec:
    cls: str
    n: int
    m: int = 0
    seed: int = 0
    weights: str = "unit"  # "unit" or "rational"
    bounds: tuple[int, int] = (1, 10)

    def __post_init__(self) -> None:
        if self.cls not in CLASSES:
            raise ValueError(f"unknown instance class {self.cls!r}")
        if self.weights not in ("unit", "rational"):
            raise ValueError(f"unknown weight mode {self.weights!r}")
        if self.m < 0 or 2 * self.m > self.n:
            raise ValueError(f"matching size {self.m} does not fit {self.n} vertices")


def generate(spec: GenSpec) -> tuple[Digraph, Weights]:
    if spec.cls == "tournament":
        d = random_tournament(spec.n, spec.seed)
    elif spec.cls == "oriented":
        d = random_oriented(spec.n, spec.seed)
    else:
        d = random_missing_matching(spec.n, spec.m, spec.seed)
        if spec.cls == "good-oriented":
            from .matching import orient_paths

            d = orient_paths(d).dprime
    if spec.weights == "unit":
        w = unit_weights(spec.n)
    else:
        # weights use a derived stream so the digraph does not depend on the mode
        w = random_weights(spec.n, spec.seed * 7919 + 1, spec.bounds)
    return d, w


# -- exhaustive enumeration ---------------------------------------------------


def enumerate_instances(cls: str, n: int, m: int = 0, dedup: bool = False,
                        max_instances: int = 1 << 15) -> Iterator[Digraph]:
    """Every orientation of K_n minus the matching {0,1}, {2,3}, ... of size m.

    Streams lazily.  With ``dedup`` only the first member of each
    isomorphism class is yielded (canonical form by brute force).
    """
    if cls == "tournament":
        m = 0
    elif cls != "missing-matching":
        raise ValueError(f"cannot enumerate class {cls!r}")
    if 2 * m > n:
        raise ValueError(f"matching size {m} does not fit {n} vertices")
    matched = {(2 * i, 2 * i + 1) for i in range(m)}
    pairs = [p for p in itertools.combinations(range(n), 2) if p not in matched]
    total = 1 << len(pairs)
    if total > max_instances:
        raise ValueError(f"{total} instances exceed the cap {max_instances}")
    seen: set[tuple] = set()
    for code in range(total):
        arcs = [(u, v) if code >> k & 1 else (v, u) for k, (u, v) in enumerate(pairs)]
        d = Digraph.from_arcs(n, arcs)
        if dedup:
            key = canonical_form(d)
            if key in seen:
                continue
            seen.add(key)
        yield d


def canonical_form(d: Digraph) -> tuple[tuple[int, int], ...]:
    return min(
        tuple(sorted((p[u], p[v]) for u, v in d.arcs))
        for p in itertools.permutations(range(d.n))
    )
