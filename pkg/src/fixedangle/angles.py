"""Fixed-angle registry and the conjecture sweep over graph ensembles.

Registry files are JSON, keyed by degree then depth::

    {"3": {"1": {"gamma": [0.616], "beta": [0.393], "guarantee": 0.6925,
                 "provenance": {"kind": "embedded-table"}}}}

Angles are in radians with the cost layer ``exp(-i gamma C)`` and mixer
``exp(-i beta sum_j X_j)``.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

from .classical import MAXCUT_CAP, approximation_ratio, maxcut_exact
from .engine import Evaluator
from .errors import CapacityError, NotAvailableError, RejectedGraphError, ValidationError
from .graphs import Graph, TreeSpec, tree_subgraph, validate_regular
from .statevec import QaoaAngles
from .table import CUBIC_FIXED_ANGLES

VIOLATION_TOL = 1e-6
TREE_THRESHOLD_MAX_VERTICES = 300

EMBEDDED = {"kind": "embedded-table"}


@dataclass(frozen=True)
class FixedAngleEntry:
    degree: int
    p: int
    angles: QaoaAngles
    guarantee: float
    provenance: Mapping = field(default_factory=lambda: dict(EMBEDDED))

    def __post_init__(self):
        where = f"{self.degree}.{self.p}"
        if self.degree < 2:
            raise ValidationError(f"degree must be >= 2, got {self.degree}", f"{where}.degree")
        if self.p < 1:
            raise ValidationError(f"p must be >= 1, got {self.p}", f"{where}.p")
        if self.angles.p != self.p:
            raise ValidationError(f"expected {self.p} angles per layer type, got {self.angles.p}", f"{where}.gamma")
        g = float(self.guarantee)
        if not (0.5 < g < 1.0):
            raise ValidationError(f"must lie in (0.5, 1), got {g}", f"{where}.guarantee")
        object.__setattr__(self, "guarantee", g)
        object.__setattr__(self, "provenance", dict(self.provenance))

    @property
    def key(self) -> tuple[int, int]:
        return (self.degree, self.p)

    def to_json(self) -> dict:
        return {
            "gamma": list(self.angles.gamma),
            "beta": list(self.angles.beta),
            "guarantee": self.guarantee,
            "provenance": dict(self.provenance),
        }


class Registry(Mapping):
    """Fixed-angle entries keyed by ``(degree, p)``."""

    def __init__(self, entries: Iterable[FixedAngleEntry] = ()):
        self._entries: dict[tuple[int, int], FixedAngleEntry] = {}
        for e in entries:
            self.add(e)

    @classmethod
    def builtin(cls) -> "Registry":
        return cls(_embedded_entry(p) for p in sorted(CUBIC_FIXED_ANGLES))

    def add(self, entry: FixedAngleEntry, replace: bool = False) -> None:
        if entry.key in self._entries and not replace:
            raise ValidationError(f"duplicate entry for degree {entry.degree}, p={entry.p}", f"{entry.degree}.{entry.p}")
        self._entries[entry.key] = entry

    def __getitem__(self, key: tuple[int, int]) -> FixedAngleEntry:
        return self._entries[key]

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(sorted(self._entries))

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, Registry) and self._entries == other._entries

    def to_json(self) -> dict:
        out: dict[str, dict] = {}
        for d, p in self:
            out.setdefault(str(d), {})[str(p)] = self._entries[(d, p)].to_json()
        return out


def _embedded_entry(p: int) -> FixedAngleEntry:
    row = CUBIC_FIXED_ANGLES[p]
    return FixedAngleEntry(3, p, QaoaAngles(tuple(row["gamma"]), tuple(row["beta"])), row["guarantee"], EMBEDDED)


def builtin_table(d: int, p: int, registry: Registry | None = None) -> FixedAngleEntry:
    """Stored entry for ``(d, p)``: ``registry`` first, then the embedded 3-regular table."""
    if registry is not None and (d, p) in registry:
        return registry[(d, p)]
    if d == 3 and p in CUBIC_FIXED_ANGLES:
        return _embedded_entry(p)
    keys = sorted(set((3, q) for q in CUBIC_FIXED_ANGLES) | set(registry or ()))
    raise NotAvailableError(f"no fixed angles for degree {d}, p={p}; available: {keys}")


def _no_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise ValidationError(f"duplicate key {k!r}")
        out[k] = v
    return out


def _float_list(value, where: str) -> list[float]:
    if not isinstance(value, list) or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value):
        raise ValidationError("must be a list of numbers", where)
    if not all(math.isfinite(x) for x in value):
        raise ValidationError("must be finite", where)
    return [float(x) for x in value]


def registry_from_json(data) -> Registry:
    if not isinstance(data, dict):
        raise ValidationError("top level must be an object keyed by degree")
    reg = Registry()
    for dkey, rows in data.items():
        if not str(dkey).isdigit():
            raise ValidationError("degree keys must be integers", str(dkey))
        if not isinstance(rows, dict):
            raise ValidationError("must be an object keyed by p", str(dkey))
        for pkey, rec in rows.items():
            where = f"{dkey}.{pkey}"
            if not str(pkey).isdigit():
                raise ValidationError("p keys must be integers", where)
            if not isinstance(rec, dict):
                raise ValidationError("must be an object", where)
            missing = {"gamma", "beta", "guarantee"} - set(rec)
            if missing:
                raise ValidationError(f"missing fields {sorted(missing)}", where)
            extra = set(rec) - {"gamma", "beta", "guarantee", "provenance"}
            if extra:
                raise ValidationError(f"unknown fields {sorted(extra)}", where)
            gamma = _float_list(rec["gamma"], f"{where}.gamma")
            beta = _float_list(rec["beta"], f"{where}.beta")
            if len(gamma) != len(beta):
                raise ValidationError("gamma and beta lengths differ", f"{where}.beta")
            g = rec["guarantee"]
            if not isinstance(g, (int, float)) or isinstance(g, bool):
                raise ValidationError("must be a number", f"{where}.guarantee")
            prov = rec.get("provenance", dict(EMBEDDED))
            if not isinstance(prov, dict) or "kind" not in prov:
                raise ValidationError("must be an object with a 'kind'", f"{where}.provenance")
            if not gamma:
                raise ValidationError("must not be empty", f"{where}.gamma")
            reg.add(FixedAngleEntry(int(dkey), int(pkey), QaoaAngles(tuple(gamma), tuple(beta)), g, prov))
    return reg


def save_entries(path: str | Path, registry: Registry) -> None:
    Path(path).write_text(json.dumps(registry.to_json(), indent=2, sort_keys=False) + "\n")


def load_entries(path: str | Path) -> Registry:
    try:
        data = json.loads(Path(path).read_text(), object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}") from None
    return registry_from_json(data)


@dataclass(frozen=True)
class ConjectureRow:
    graph_id: str
    num_vertices: int
    expectation: float | None
    cmax: int | None
    ratio: float | None
    error: str | None = None


@dataclass(frozen=True)
class ConjectureReport:
    ensemble_id: str
    degree: int
    p: int
    guarantee: float
    per_graph: tuple[ConjectureRow, ...]
    min_ratio: float
    argmin: str | None
    violations: tuple[str, ...]
    threshold: float = float("nan")
    threshold_source: str = "stored"

    @property
    def ok(self) -> bool:
        return not self.violations

    def ratios(self) -> list[float]:
        return [r.ratio for r in self.per_graph if r.ratio is not None]

    def summary(self) -> str:
        r = self.ratios()
        mean = sum(r) / len(r) if r else float("nan")
        mx = max(r) if r else float("nan")
        verdict = "no violations" if self.ok else f"{len(self.violations)} VIOLATIONS"
        return (
            f"{self.ensemble_id} d={self.degree} p={self.p}: {len(r)} graphs, "
            f"ratio min {self.min_ratio:.6f} mean {mean:.6f} max {mx:.6f} vs guarantee {self.guarantee:.4f} "
            f"(threshold {self.threshold:.6f}, {self.threshold_source}): {verdict}"
        )

    def to_json(self) -> dict:
        return {
            "ensemble_id": self.ensemble_id,
            "degree": self.degree,
            "p": self.p,
            "guarantee": self.guarantee,
            "threshold": self.threshold,
            "threshold_source": self.threshold_source,
            "min_ratio": self.min_ratio,
            "argmin": self.argmin,
            "violations": list(self.violations),
            "per_graph": [r.__dict__ for r in self.per_graph],
        }

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["graph_id", "N", "F_p", "C_max", "C_p", "error"])
            for r in self.per_graph:
                w.writerow([
                    r.graph_id,
                    r.num_vertices,
                    "" if r.expectation is None else repr(r.expectation),
                    "" if r.cmax is None else r.cmax,
                    "" if r.ratio is None else repr(r.ratio),
                    r.error or "",
                ])

    def write_json(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2) + "\n")


def _as_items(ensemble: Sequence) -> list[tuple[str, Graph]]:
    items = []
    for k, item in enumerate(ensemble):
        if isinstance(item, Graph):
            items.append((f"g{k}", item))
        else:
            gid, g = item
            items.append((str(gid), g))
    return items


def verify_conjecture(
    ensemble: Sequence,
    d: int,
    p: int,
    entry: FixedAngleEntry | None = None,
    ensemble_id: str = "ensemble",
    evaluator: Evaluator | None = None,
    maxcut_cap: int = MAXCUT_CAP,
    tol: float = VIOLATION_TOL,
    threshold: str = "tree",
) -> ConjectureReport:
    """Approximation ratio of every graph at the fixed angles, against the guarantee.

    ``ensemble`` holds graphs or ``(id, graph)`` pairs. A non ``d``-regular
    graph rejects the whole ensemble; capacity failures are recorded on the
    graph's row and the sweep continues.

    The guarantee is the tree-subgraph value at the fixed angles. Stored
    guarantees carry four decimals, up to 5e-5 away from that value, and
    graphs that saturate the bound sit exactly on it. With
    ``threshold="tree"`` the bound is therefore recomputed at the entry's
    angles (trees up to ``TREE_THRESHOLD_MAX_VERTICES`` vertices; larger
    ones fall back to the stored number). ``threshold="stored"`` compares
    against the stored number directly.
    """
    if threshold not in ("tree", "stored"):
        raise ValidationError(f"unknown threshold {threshold!r}", "threshold")
    entry = entry or builtin_table(d, p)
    if entry.p != p:
        raise ValidationError(f"entry is for p={entry.p}, sweep asks for p={p}", "p")
    items = _as_items(ensemble)
    for gid, g in items:
        if not validate_regular(g, d):
            raise RejectedGraphError(f"graph {gid} is not {d}-regular", gid)
    ev = evaluator or Evaluator()
    bound, source = entry.guarantee, "stored"
    if threshold == "tree" and TreeSpec(d, p).vertex_count <= TREE_THRESHOLD_MAX_VERTICES:
        bound, _ = ev.edge_value(tree_subgraph(TreeSpec(d, p)), entry.angles)
        source = "tree"
    rows = []
    for gid, g in items:
        try:
            report = ev.evaluate(g, entry.angles)
            cmax = maxcut_exact(g, cap=maxcut_cap).value
        except CapacityError as exc:
            rows.append(ConjectureRow(gid, g.num_vertices, None, None, None, str(exc)))
            continue
        rows.append(ConjectureRow(gid, g.num_vertices, report.total_expectation, cmax,
                                  approximation_ratio(report.total_expectation, cmax)))
    scored = [r for r in rows if r.ratio is not None]
    worst = min(scored, key=lambda r: r.ratio) if scored else None
    violations = tuple(r.graph_id for r in scored if r.ratio < bound - tol)
    return ConjectureReport(
        ensemble_id,
        d,
        p,
        entry.guarantee,
        tuple(rows),
        worst.ratio if worst else float("nan"),
        worst.graph_id if worst else None,
        violations,
        bound,
        source,
    )
