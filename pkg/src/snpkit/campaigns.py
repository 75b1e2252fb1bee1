"""Verification campaigns: named checks applied to streams of instances.

A check maps an instance to ``(verdict, witness)`` where the verdict is
True (holds), False (violated) or None (not applicable).  Checks are pure,
so instances can be farmed out to worker processes; results come back in
submission order, which keeps the merged log deterministic.
"""

from __future__ import annotations

import random
import time
from collections.abc import Callable, Iterable, Iterator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any

from .dependency import dependency_digraph, good_edge_lemma_check, interval_structure, is_good_digraph
from .digraph import Digraph, Weights, has_snp, is_matching, is_tournament, missing_edges, snp_oracle, unit_weights, weight_of
from .errors import Finding, PreconditionError
from .generators import (
    GenSpec,
    cycle_gadget,
    enumerate_instances,
    generate,
    random_oriented,
    random_tournament,
    random_weights,
)
from .good_orders import check_main_inequality, good_median_order, sed_classify
from .matching import (
    cycle_labelings,
    cycle_lemmas_check,
    delta_structure_check,
    feed_snp_theorem_check,
    orient_paths,
    two_snp_check,
)
from .oracles import brute_force_optimum
from .orders import SubsetDP, classify_order, feedback_property_holds, local_median_order, order_weight
from .serialize import InstanceFile

BRUTE_FORCE_LIMIT = 8

Verdict = tuple[bool | None, dict[str, Any]]


@dataclass(frozen=True)
class Instance:
    name: str
    digraph: Digraph
    weights: Weights
    cls: str
    seed: int | None = None

    def to_file(self) -> InstanceFile:
        meta: dict[str, Any] = {"name": self.name, "class": self.cls}
        if self.seed is not None:
            meta["seed"] = self.seed
        weights = None if all(x == 1 for x in self.weights) else self.weights
        return InstanceFile(self.digraph, weights, meta)


def _matching(inst: Instance) -> bool:
    return inst.digraph.oriented and is_matching(missing_edges(inst.digraph))


# -- checks ----------------------------------------------------------------------


def check_snc(inst: Instance) -> Verdict:
    if not inst.digraph.oriented:
        return None, {}
    found = sorted(snp_oracle(inst.digraph, inst.weights))
    return bool(found), {"snp": found}


def check_solver(inst: Instance) -> Verdict:
    d = inst.digraph
    if d.n > BRUTE_FORCE_LIMIT:
        return None, {}
    dp = SubsetDP(d, inst.weights)
    brute = brute_force_optimum(d, inst.weights)
    order = dp.lexmin_order()
    ok = dp.optimum == brute == order_weight(d, inst.weights, order)
    return ok, {"order": list(order), "weight": str(dp.optimum), "brute": str(brute)}


def check_feedback(inst: Instance) -> Verdict:
    d, w = inst.digraph, inst.weights
    exact = SubsetDP(d, w).lexmin_order()
    start = list(range(d.n))
    random.Random(inst.seed or 0).shuffle(start)
    local = local_median_order(d, w, start)
    r1, r2 = feedback_property_holds(d, w, exact), feedback_property_holds(d, w, local)
    ok = r1.holds and r2.holds and order_weight(d, w, local) >= order_weight(d, w, start)
    return ok, {"exact": list(exact), "local": list(local)}


def check_corollary(inst: Instance) -> Verdict:
    d, w = inst.digraph, inst.weights
    if not is_tournament(d) or d.n == 0:
        return None, {}
    order = SubsetDP(d, w).lexmin_order()
    cls = classify_order(d, order)
    lhs, rhs = weight_of(w, d.out_mask[cls.feed]), weight_of(w, cls.good_mask)
    ok = lhs <= rhs and has_snp(d, w, cls.feed)
    return ok, {"order": list(order), "out": str(lhs), "good": str(rhs)}


def check_sed(inst: Instance) -> Verdict:
    d, w = inst.digraph, inst.weights
    if d.n == 0 or not d.oriented:
        return None, {}
    structure = interval_structure(d)
    if not is_good_digraph(d, structure):
        return None, {}
    dp = SubsetDP(d, w)
    order = good_median_order(d, w, structure)
    try:
        out = sed_classify(d, w, order, structure, dp)
    except Finding as exc:
        return False, {"order": list(order), "finding": str(exc)}
    ok = all(order_weight(d, w, o) == dp.optimum for o in out.trace)
    return ok, {"kind": out.kind, "rank": out.rank, "cycle": len(out.cycle), "steps": len(out.trace)}


def check_good_edge(inst: Instance) -> Verdict:
    if not inst.digraph.oriented:
        return None, {}
    return good_edge_lemma_check(inst.digraph), {}


def check_delta(inst: Instance) -> Verdict:
    if not _matching(inst):
        return None, {}
    delta = dependency_digraph(inst.digraph)
    return delta_structure_check(inst.digraph, delta), {"delta_arcs": len(delta.arcs)}


def check_main_inequality_on_dprime(inst: Instance) -> Verdict:
    if not _matching(inst) or inst.digraph.n == 0:
        return None, {}
    try:
        dprime = orient_paths(inst.digraph).dprime
        structure = interval_structure(dprime)
        order = good_median_order(dprime, inst.weights, structure)
        rep = check_main_inequality(dprime, inst.weights, order, structure, verify_order=False)
    except Finding as exc:
        return False, {"finding": str(exc)}
    bad = [r.vertex for r in rep.rows if not (r.holds and r.lifts)]
    return rep.ok, {"order": list(order), "block": sorted(rep.block), "violations": bad}


def check_feed_snp(inst: Instance) -> Verdict:
    if not _matching(inst) or inst.digraph.n == 0:
        return None, {}
    try:
        rep = feed_snp_theorem_check(inst.digraph)
    except Finding as exc:
        return False, {"finding": str(exc)}
    snc_prime = bool(snp_oracle(orient_paths(inst.digraph).dprime))
    return rep.ok and snc_prime, {
        "order": list(rep.order),
        "feeds": list(rep.feeds),
        "failures": rep.failures,
        "nongood_failures": rep.nongood_failures,
        "reorientation": rep.reorientation,
    }


def check_two_snp(inst: Instance) -> Verdict:
    if not _matching(inst):
        return None, {}
    try:
        rep = two_snp_check(inst.digraph)
    except PreconditionError:
        return None, {}
    except Finding as exc:
        return False, {"finding": str(exc)}
    return rep.ok, {"vertices": list(rep.vertices), "route": rep.route, "notes": rep.notes}


def check_cycles(inst: Instance) -> Verdict:
    if not _matching(inst):
        return None, {}
    labs = cycle_labelings(inst.digraph)
    if not labs:
        return None, {}
    failures = [f for lab in labs for f in cycle_lemmas_check(inst.digraph, lab).failures]
    return not failures, {"cycles": [lab.k for lab in labs], "failures": failures}


CHECKS: dict[str, Callable[[Instance], Verdict]] = {
    "snc": check_snc,
    "solver": check_solver,
    "feedback": check_feedback,
    "corollary": check_corollary,
    "sed": check_sed,
    "good_edge": check_good_edge,
    "delta": check_delta,
    "main_inequality": check_main_inequality_on_dprime,
    "feed_snp": check_feed_snp,
    "two_snp": check_two_snp,
    "cycles": check_cycles,
}


# -- running ------------------------------------------------------------------


@dataclass
class InstanceResult:
    instance: Instance
    verdicts: dict[str, bool | None]
    witnesses: dict[str, Any]
    wall_time: float

    @property
    def failed(self) -> list[str]:
        return [k for k, v in self.verdicts.items() if v is False]

    def record(self, command: str, spec: dict[str, Any]) -> dict[str, Any]:
        return {
            "command": command,
            "spec": spec,
            "instance": self.instance.name,
            "hash": self.instance.to_file().digest(),
            "checks": list(self.verdicts),
            "verdicts": self.verdicts,
            "witnesses": self.witnesses,
            "wall_time": round(self.wall_time, 6),
        }


def run_instance(inst: Instance, checks: tuple[str, ...]) -> InstanceResult:
    start = time.perf_counter()
    verdicts: dict[str, bool | None] = {}
    witnesses: dict[str, Any] = {}
    for name in checks:
        try:
            verdict, witness = CHECKS[name](inst)
        except Finding as exc:
            verdict, witness = False, {"finding": str(exc)}
        except PreconditionError as exc:
            verdict, witness = None, {"skipped": str(exc)}
        verdicts[name] = verdict
        if witness:
            witnesses[name] = witness
    return InstanceResult(inst, verdicts, witnesses, time.perf_counter() - start)


def _run_packed(args: tuple[Instance, tuple[str, ...]]) -> InstanceResult:
    return run_instance(*args)


def run_campaign(instances: Iterable[Instance], checks: tuple[str, ...],
                 parallel: int = 1) -> Iterator[InstanceResult]:
    """Yield results in instance order whatever the degree of parallelism."""
    if parallel <= 1:
        for inst in instances:
            yield run_instance(inst, checks)
        return
    with ProcessPoolExecutor(max_workers=parallel) as pool:
        yield from pool.map(_run_packed, ((i, checks) for i in instances), chunksize=16)


# -- suites ------------------------------------------------------------------------


TOURNAMENT_CHECKS = ("snc", "solver", "feedback", "corollary", "sed", "two_snp")
MATCHING_CHECKS = ("snc", "good_edge", "delta", "cycles", "main_inequality", "feed_snp", "two_snp")
WEIGHTED_CHECKS = ("snc", "solver", "feedback", "good_edge")
ALL_CHECKS = tuple(CHECKS)


@dataclass(frozen=True)
class Suite:
    name: str
    checks: tuple[str, ...]
    build: Callable[[int, int | None, int], Iterator[Instance]] = field(repr=False)


def _tournaments(n: int, trials: int | None, seed: int) -> Iterator[Instance]:
    if trials is None:
        for k, d in enumerate(enumerate_instances("tournament", n)):
            yield Instance(f"T{n}-{k}", d, unit_weights(n), "tournament")
        return
    for t in range(trials):
        s = seed + t
        yield Instance(f"T{n}-s{s}", random_tournament(n, s), random_weights(n, s), "tournament", s)


def _matchings(n: int, trials: int | None, seed: int) -> Iterator[Instance]:
    if trials is None:
        for m in range(n // 2 + 1):
            for k, d in enumerate(enumerate_instances("missing-matching", n, m)):
                yield Instance(f"M{n}.{m}-{k}", d, unit_weights(n), "missing-matching")
        return
    for t in range(trials):
        s = seed + t
        m = random.Random(s).randint(0, n // 2)
        d, w = generate(GenSpec("missing-matching", n, m, s))
        yield Instance(f"M{n}.{m}-s{s}", d, w, "missing-matching", s)


def _weighted(n: int, trials: int | None, seed: int) -> Iterator[Instance]:
    for t in range(trials or 100):
        s = seed + t
        yield Instance(f"W{n}-s{s}", random_oriented(n, s), random_weights(n, s), "oriented", s)


def _gadgets(n: int, trials: int | None, seed: int) -> Iterator[Instance]:
    for k in range(2, n + 1):
        yield Instance(f"gadget{k}", cycle_gadget(k), unit_weights(2 * k), "missing-matching")


SUITES: dict[str, Suite] = {
    "tournaments": Suite("tournaments", TOURNAMENT_CHECKS, _tournaments),
    "matching": Suite("matching", MATCHING_CHECKS, _matchings),
    "weighted": Suite("weighted", WEIGHTED_CHECKS, _weighted),
    "gadgets": Suite("gadgets", MATCHING_CHECKS, _gadgets),
}


def hunt_instances(cls: str, n_lo: int, n_hi: int, trials: int, seed: int) -> Iterator[Instance]:
    """Seeded random instances with n cycling through ``n_lo..n_hi``."""
    span = n_hi - n_lo + 1
    for t in range(trials):
        s = seed + t
        n = n_lo + t % span
        m = random.Random(s).randint(0, n // 2) if cls in ("missing-matching", "good-oriented") else 0
        weights = "rational" if cls in ("tournament", "oriented") else "unit"
        d, w = generate(GenSpec(cls, n, m, s, weights))
        yield Instance(f"{cls}-n{n}-s{s}", d, w, cls, s)
