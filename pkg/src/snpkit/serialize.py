"""Instance files (JSON), run-record lines and DOT export."""

from __future__ import annotations

import hashlib
import json
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .dependency import DependencyDigraph
from .digraph import Digraph, Weights, as_weights, missing_edges


class InstanceFormatError(ValueError):
    pass


@dataclass(frozen=True)
class InstanceFile:
    digraph: Digraph
    weights: Weights | None = None
    meta: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "n": self.digraph.n,
            "arcs": [list(a) for a in sorted(self.digraph.arcs)],
        }
        if not self.digraph.oriented:
            out["oriented"] = False
        if self.weights is not None:
            out["weights"] = [[x.numerator, x.denominator] for x in self.weights]
        if self.meta:
            out["meta"] = self.meta
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=None) + "\n"

    def digest(self) -> str:
        core = self.to_json()
        core.pop("meta", None)
        return hashlib.sha256(json.dumps(core, sort_keys=True).encode()).hexdigest()[:16]


def parse_instance(text: str) -> InstanceFile:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise InstanceFormatError("top level must be an object")
    n = raw.get("n")
    if not isinstance(n, int) or n < 0:
        raise InstanceFormatError(f"n: expected a non-negative integer, got {n!r}")
    arcs = []
    for k, a in enumerate(raw.get("arcs", [])):
        if not (isinstance(a, list) and len(a) == 2 and all(isinstance(x, int) for x in a)):
            raise InstanceFormatError(f"arcs[{k}]: expected [u, v], got {a!r}")
        arcs.append(tuple(a))
    try:
        d = Digraph.from_arcs(n, arcs, oriented=bool(raw.get("oriented", True)))
    except ValueError as exc:
        raise InstanceFormatError(f"arcs: {exc}") from exc
    weights = None
    if "weights" in raw:
        ws = []
        for k, pair in enumerate(raw["weights"]):
            if isinstance(pair, int):
                pair = [pair, 1]
            if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(x, int) for x in pair)):
                raise InstanceFormatError(f"weights[{k}]: expected [numerator, denominator], got {pair!r}")
            if pair[1] == 0:
                raise InstanceFormatError(f"weights[{k}]: zero denominator")
            x = Fraction(pair[0], pair[1])
            if x <= 0:
                raise InstanceFormatError(f"weights[{k}]: weight must be positive, got {x}")
            ws.append(x)
        try:
            weights = as_weights(ws, n)
        except ValueError as exc:
            raise InstanceFormatError(f"weights: {exc}") from exc
    meta = raw.get("meta", {})
    if not isinstance(meta, dict):
        raise InstanceFormatError("meta: expected an object")
    return InstanceFile(d, weights, meta)


def load_instance(path: str | Path) -> InstanceFile:
    path = Path(path)
    try:
        return parse_instance(path.read_text(encoding="utf-8"))
    except InstanceFormatError as exc:
        raise InstanceFormatError(f"{path}: {exc}") from exc


def save_instance(path: str | Path, inst: InstanceFile) -> None:
    Path(path).write_text(inst.dumps(), encoding="utf-8")


def dump_finding(directory: str | Path, inst: InstanceFile, reason: str) -> Path:
    """Write a counterexample candidate for replay; returns its path."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    meta = dict(inst.meta, finding=reason)
    target = directory / f"finding-{inst.digest()}.json"
    save_instance(target, InstanceFile(inst.digraph, inst.weights, meta))
    return target


def append_record(path: str | Path, record: dict[str, Any]) -> None:
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(json.dumps(record, sort_keys=True) + "\n")


def export_dot(d: Digraph, delta: DependencyDigraph | None = None,
               order: Sequence[int] | None = None, name: str = "D") -> str:
    """DOT text: arcs solid, missing edges dashed, the dependency digraph in
    its own cluster, and an ordering as invisible left-to-right edges."""
    lines = [f"digraph {name} {{"]
    if order is not None:
        lines.append("  rankdir=LR;")
    lines.append("  node [shape=circle];")
    for v in range(d.n):
        lines.append(f"  {v};")
    for u, v in sorted(d.arcs):
        lines.append(f"  {u} -> {v};")
    for u, v in missing_edges(d):
        lines.append(f"  {u} -> {v} [style=dashed, dir=none, color=gray];")
    if delta is not None and delta.nodes:
        lines.append("  subgraph cluster_delta {")
        lines.append('    label="dependency digraph";')
        for u, v in delta.nodes:
            lines.append(f'    "e{u}_{v}" [shape=box, label="{u}{v}"];')
        for a in delta.arcs:
            (s1, s2), (t1, t2) = a.source, a.target
            lines.append(f'    "e{s1}_{s2}" -> "e{t1}_{t2}";')
        lines.append("  }")
    if order is not None:
        for u, v in zip(order, order[1:]):
            lines.append(f"  {u} -> {v} [style=invis, weight=100];")
    lines.append("}")
    return "\n".join(lines) + "\n"
