"""Brute-force references, kept independent of the subset DP.

``brute_force_optimum`` enumerates permutations with Fraction arithmetic.
``batch_optimum`` does the same enumeration vectorised with numpy over
integer-scaled weights, for sweeping thousands of small instances.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Sequence
from fractions import Fraction

import numpy as np

from .digraph import Digraph, Weights, as_weights

_INT64_SAFE = 1 << 62


def brute_force_optimum(d: Digraph, w: Sequence[Fraction | int] | None = None) -> Fraction:
    w = as_weights(w, d.n)
    best = Fraction(-1)
    for perm in itertools.permutations(range(d.n)):
        pos = {v: i for i, v in enumerate(perm)}
        total = sum((w[x] * w[y] for x, y in d.arcs if pos[x] < pos[y]), Fraction(0))
        best = max(best, total)
    return best


def brute_force_median_orders(d: Digraph, w: Sequence[Fraction | int] | None = None) -> list[tuple[int, ...]]:
    w = as_weights(w, d.n)
    scored = []
    for perm in itertools.permutations(range(d.n)):
        pos = {v: i for i, v in enumerate(perm)}
        scored.append((sum((w[x] * w[y] for x, y in d.arcs if pos[x] < pos[y]), Fraction(0)), perm))
    top = max(s for s, _ in scored)
    return sorted(p for s, p in scored if s == top)


_PERM_CACHE: dict[int, np.ndarray] = {}


def _pair_index(n: int) -> np.ndarray:
    """Flat (x*n + y) index of every pair placed x-before-y, per permutation."""
    if n not in _PERM_CACHE:
        perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)
        i, j = np.triu_indices(n, k=1)
        _PERM_CACHE[n] = perms[:, i] * n + perms[:, j]
    return _PERM_CACHE[n]


def batch_optimum(digraphs: Sequence[Digraph],
                  weights: Sequence[Weights] | None = None) -> list[Fraction]:
    """Maximum forward weight of each digraph by full permutation enumeration."""
    weights = weights or [None] * len(digraphs)
    results: list[Fraction] = [Fraction(0)] * len(digraphs)
    by_n: dict[int, list[int]] = {}
    for k, d in enumerate(digraphs):
        by_n.setdefault(d.n, []).append(k)
    for n, idx in by_n.items():
        if n < 2:
            continue
        index = _pair_index(n)
        chunk = max(1, 2_000_000 // index.size)
        for start in range(0, len(idx), chunk):
            part = idx[start:start + chunk]
            mats, scales, big = [], [], False
            for k in part:
                d, w = digraphs[k], as_weights(weights[k], digraphs[k].n)
                scale = math.lcm(*(x.denominator for x in w))
                wi = [int(x * scale) for x in w]
                m = [[0] * n for _ in range(n)]
                for x, y in d.arcs:
                    m[x][y] = wi[x] * wi[y]
                big = big or sum(map(sum, m)) >= _INT64_SAFE
                mats.append(m)
                scales.append(scale)
            arr = np.array(mats, dtype=object if big else np.int64).reshape(len(part), n * n)
            best = arr[:, index].sum(axis=2).max(axis=1)
            for k, b, s in zip(part, best, scales):
                results[k] = Fraction(int(b), s * s)
    return results
