"""Command line: ``snpkit analyze | verify | hunt | gadget``.

Exit codes: 0 everything held, 1 a property failed (a finding), 2 usage or
input error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .campaigns import ALL_CHECKS, SUITES, hunt_instances, run_campaign
from .dependency import dependency_digraph, interval_structure, is_good_digraph
from .digraph import has_snp, missing_graph, snp_oracle
from .errors import PreconditionError
from .generators import CLASSES, cycle_gadget
from .matching import cycle_labelings, cycle_lemmas_check
from .orders import EXACT_LIMIT, SubsetDP, classify_order, local_median_order, order_weight
from .serialize import (
    InstanceFile,
    InstanceFormatError,
    append_record,
    dump_finding,
    export_dot,
    load_instance,
)

PARALLEL_ENV = "SNPKIT_PARALLEL"


def _default_parallel() -> int:
    try:
        return max(1, int(os.environ.get(PARALLEL_ENV, "1")))
    except ValueError:
        return 1


def _n_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        a, b = int(lo), int(hi if sep else lo)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a..b, got {text!r}") from None
    if a < 1 or b < a:
        raise argparse.ArgumentTypeError(f"empty or invalid range {text!r}")
    return a, b


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="snpkit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="median order, dependency digraph and SNP vertices of one instance")
    a.add_argument("file")
    a.add_argument("--dot", metavar="PATH", help="also write a DOT rendering")

    v = sub.add_parser("verify", help="run a named verification suite")
    v.add_argument("--suite", required=True, choices=sorted(SUITES))
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--trials", type=int, help="random trials instead of exhaustive enumeration")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--parallel", type=int, default=_default_parallel())
    v.add_argument("--log", help="append one JSON record per instance")
    v.add_argument("--findings", default="findings", help="directory for failing instances")

    h = sub.add_parser("hunt", help="random counterexample search through every checker")
    h.add_argument("--class", dest="cls", required=True, choices=CLASSES)
    h.add_argument("--n-range", type=_n_range, required=True)
    h.add_argument("--seed", type=int, default=0)
    h.add_argument("--trials", type=int, default=200)
    h.add_argument("--parallel", type=int, default=_default_parallel())
    h.add_argument("--log")
    h.add_argument("--findings", default="findings")

    g = sub.add_parser("gadget", help="emit the k-cycle gadget as an instance file")
    g.add_argument("--k", type=int, required=True)
    g.add_argument("-o", "--output")
    return p


def cmd_analyze(args: argparse.Namespace) -> int:
    inst = load_instance(args.file)
    d, w = inst.digraph, inst.weights
    if d.n == 0:
        print("empty digraph")
        return 0
    if d.n <= EXACT_LIMIT:
        dp = SubsetDP(d, w)
        order, label = dp.lexmin_order(), "median order"
    else:
        order, label = local_median_order(d, w, range(d.n)), "local median order (heuristic)"
    cls = classify_order(d, order)
    edges, nonwhole = missing_graph(d)
    delta = dependency_digraph(d)
    structure = interval_structure(d, delta)
    f = cls.feed
    print(f"{label}: {' '.join(map(str, order))}  weight {order_weight(d, w, order)}")
    print(f"feed {f}: d+ = {len(cls.out_of_feed)}, d++ = {bin(d.second_out_mask(f)).count('1')}, "
          f"SNP {'yes' if has_snp(d, w, f) else 'no'}")
    print(f"out-neighbours of feed {sorted(cls.out_of_feed)}; good {sorted(cls.good)}; bad {sorted(cls.bad)}")
    print(f"missing edges {sorted(edges)}; non-whole {sorted(nonwhole)}")
    print("dependency digraph: " + (", ".join(f"{a.source}->{a.target}" for a in delta.arcs) or "no arcs"))
    for c in structure.components:
        print(f"  component {list(c.edges)} ({c.kind}), K = {sorted(c.vertices)}")
    print(f"blocks K(xi): {[sorted(b) for b in structure.blocks]}; good digraph: {is_good_digraph(d, structure)}")
    print(f"J(feed) = {sorted(structure.J(f))}")
    print(f"SNP vertices: {sorted(snp_oracle(d, w))}")
    if args.dot:
        Path(args.dot).write_text(export_dot(d, delta, order), encoding="utf-8")
    return 0


def _run(command: str, spec: dict, instances, checks, args) -> int:
    total, failures = 0, 0
    for res in run_campaign(instances, checks, args.parallel):
        total += 1
        if args.log:
            append_record(args.log, res.record(command, spec))
        if res.failed:
            failures += 1
            path = dump_finding(args.findings, res.instance.to_file(), ",".join(res.failed))
            print(f"FAIL {res.instance.name}: {res.failed} -> {path}", file=sys.stderr)
    print(f"{command}: {total} instances, {failures} with failures")
    return 1 if failures else 0


def cmd_verify(args: argparse.Namespace) -> int:
    suite = SUITES[args.suite]
    spec = {"suite": args.suite, "n": args.n, "trials": args.trials, "seed": args.seed}
    return _run("verify", spec, suite.build(args.n, args.trials, args.seed), suite.checks, args)


def cmd_hunt(args: argparse.Namespace) -> int:
    lo, hi = args.n_range
    spec = {"class": args.cls, "n_range": [lo, hi], "trials": args.trials, "seed": args.seed}
    return _run("hunt", spec, hunt_instances(args.cls, lo, hi, args.trials, args.seed), ALL_CHECKS, args)


def cmd_gadget(args: argparse.Namespace) -> int:
    g = cycle_gadget(args.k)
    failures = [f for lab in cycle_labelings(g) for f in cycle_lemmas_check(g, lab).failures]
    text = InstanceFile(g, None, {"name": f"gadget{args.k}", "class": "missing-matching"}).dumps()
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    for f in failures:
        print(f"cycle lemma failure: {f}", file=sys.stderr)
    return 1 if failures else 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"analyze": cmd_analyze, "verify": cmd_verify, "hunt": cmd_hunt, "gadget": cmd_gadget}
    try:
        return handler[args.command](args)
    except (InstanceFormatError, PreconditionError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
