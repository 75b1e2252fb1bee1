from __future__ import annotations

import itertools
from collections import deque
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from snpkit.digraph import Digraph
from snpkit.generators import fixtures

settings.register_profile(
    "default",
    max_examples=150,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def fx() -> dict[str, Digraph]:
    return fixtures()


def distances(d: Digraph, v: int) -> dict[int, int]:
    """Breadth-first directed distances from v; independent of the bitmask code."""
    succ = {u: [y for x, y in d.arcs if x == u] for u in range(d.n)}
    dist = {v: 0}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        for y in succ[u]:
            if y not in dist:
                dist[y] = dist[u] + 1
                queue.append(y)
    return dist


@st.composite
def oriented_graphs(draw, min_n: int = 1, max_n: int = 7, density: float | None = None) -> Digraph:
    n = draw(st.integers(min_n, max_n))
    arcs = []
    for u, v in itertools.combinations(range(n), 2):
        choice = draw(st.sampled_from(["none", "fwd", "back"] if density is None else ["fwd", "back"]))
        if choice == "fwd":
            arcs.append((u, v))
        elif choice == "back":
            arcs.append((v, u))
    return Digraph.from_arcs(n, arcs)


def tournaments(min_n: int = 1, max_n: int = 7):
    return oriented_graphs(min_n, max_n, density=1.0)


@st.composite
def missing_matchings(draw, min_n: int = 2, max_n: int = 8) -> Digraph:
    n = draw(st.integers(min_n, max_n))
    perm = draw(st.permutations(range(n)))
    m = draw(st.integers(0, n // 2))
    matched = {frozenset(perm[2 * i:2 * i + 2]) for i in range(m)}
    arcs = []
    for u, v in itertools.combinations(range(n), 2):
        if frozenset((u, v)) in matched:
            continue
        arcs.append((u, v) if draw(st.booleans()) else (v, u))
    return Digraph.from_arcs(n, arcs)


def weight_lists(n: int):
    return st.lists(
        st.builds(Fraction, st.integers(1, 9), st.integers(1, 9)), min_size=n, max_size=n
    )


@st.composite
def weighted(draw, graphs):
    d = draw(graphs)
    return d, tuple(draw(weight_lists(d.n)))
