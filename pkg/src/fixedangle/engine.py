"""Whole-graph QAOA expectation values by lightcone decomposition.

The expected cut is a sum of per-edge cut probabilities, and each one only
depends on the edge's lightcone. Lightcones are grouped into classes by
:func:`canonical_key` so every class is simulated once.
"""

from __future__ import annotations

import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Hashable, Literal

from . import statevec, tensornet
from .classical import approximation_ratio
from .errors import CapacityError, DataError, NotAvailableError
from .graphs import EdgeSubgraph, Graph, TreeSpec, edge_lightcone, girth, tree_subgraph
from .statevec import STATEVECTOR_CAP, QaoaAngles
from .table import CUBIC_FIXED_ANGLES

Backend = Literal["auto", "statevector", "tensor"]


@dataclass(frozen=True)
class EvalReport:
    total_expectation: float
    cut_fraction: float
    approximation_ratio: float | None
    per_edge: tuple[float, ...]
    subgraph_classes: int
    backend_used: tuple[str, ...]
    cmax: int | None = None


def _rooted_code(adj: list[list[int]], root: int, parent: int) -> str:
    stack = [(root, parent, False)]
    codes: dict[int, str] = {}
    while stack:
        v, par, done = stack.pop()
        kids = [w for w in adj[v] if w != par]
        if done:
            codes[v] = "(" + "".join(sorted(codes[w] for w in kids)) + ")"
        else:
            stack.append((v, par, True))
            stack.extend((w, v, False) for w in kids)
    return codes[root]


def canonical_key(sub: EdgeSubgraph) -> Hashable:
    """Class label for a lightcone.

    Trees get an isomorphism-invariant code: the sorted pair of rooted
    canonical codes hanging off the two central vertices. Other subgraphs
    fall back to their BFS labeling, which may split isomorphic classes
    but never merges distinct ones.
    """
    g = sub.graph
    a, b = sub.central_pair
    if g.num_edges == g.num_vertices - 1 and girth(g) == "acyclic":
        adj = [list(x) for x in g.adjacency]
        pair = sorted((_rooted_code(adj, a, b), _rooted_code(adj, b, a)))
        return ("tree", pair[0], pair[1])
    return ("bfs", g.num_vertices, (a, b), g.edges)


class Evaluator:
    """Lightcone evaluator with an in-memory class cache.

    Reuse one instance across an ensemble: graphs of the same degree share
    a handful of lightcone classes. The cache is keyed by
    ``(canonical_key, angles, backend)`` and is safe to share between threads.
    """

    def __init__(
        self,
        backend: Backend = "auto",
        statevector_cap: int = STATEVECTOR_CAP,
        dedup: bool = True,
        shortcut: bool = True,
        jobs: int = 1,
        order_cache: tensornet.OrderCache | None = None,
    ):
        if backend not in ("auto", "statevector", "tensor"):
            raise DataError(f"unknown backend {backend!r}")
        self.backend = backend
        self.statevector_cap = statevector_cap
        self.dedup = dedup
        self.shortcut = shortcut
        self.jobs = max(1, int(jobs))
        self.orders = tensornet.OrderCache() if order_cache is None else order_cache
        self._cache: dict[tuple, float] = {}
        self._lock = threading.Lock()

    def _pick(self, sub: EdgeSubgraph) -> str:
        if self.backend != "auto":
            return self.backend
        return "statevector" if sub.graph.num_vertices <= self.statevector_cap else "tensor"

    def edge_value(self, sub: EdgeSubgraph, angles: QaoaAngles, key: Hashable | None = None) -> tuple[float, str]:
        tag = self._pick(sub)
        ck = None
        if key is not None:
            ck = (key, angles.digest(), tag)
            with self._lock:
                hit = self._cache.get(ck)
            if hit is not None:
                return hit, tag
        try:
            if tag == "statevector":
                value = statevec.edge_zz_expectation(sub.graph, angles, sub.central_pair, cap=self.statevector_cap)
            else:
                value = tensornet.edge_expectation_tn(sub, angles, cache=self.orders)
        except CapacityError as exc:
            raise CapacityError(f"lightcone class with {sub.graph.num_vertices} vertices: {exc}") from None
        if ck is not None:
            with self._lock:
                value = self._cache.setdefault(ck, value)
        return value, tag

    def evaluate(self, g: Graph, angles: QaoaAngles, cmax: int | None = None) -> EvalReport:
        if g.num_edges == 0:
            raise DataError("graph has no edges")
        p = angles.p
        degrees = set(g.degrees())
        if self.shortcut and len(degrees) == 1:
            d = degrees.pop()
            gi = girth(g)
            if d >= 3 and (gi == "acyclic" or gi > 2 * p + 1):
                tree = tree_subgraph(TreeSpec(d, p))
                f, tag = self.edge_value(tree, angles, canonical_key(tree))
                return _report(g, [f] * g.num_edges, 1, (tag,), cmax)

        subs = [edge_lightcone(g, e, p) for e in g.edges]
        if self.dedup:
            keys = [canonical_key(s) for s in subs]
        else:
            keys = list(range(len(subs)))
        first: dict[Hashable, int] = {}
        for idx, k in enumerate(keys):
            first.setdefault(k, idx)
        reps = list(first.items())

        def run(item):
            k, idx = item
            return self.edge_value(subs[idx], angles, k if self.dedup else None)

        if self.jobs > 1 and len(reps) > 1:
            with ThreadPoolExecutor(self.jobs) as pool:
                results = list(pool.map(run, reps))
        else:
            results = [run(item) for item in reps]
        value_of = {k: res[0] for (k, _), res in zip(reps, results)}
        per_edge = [value_of[k] for k in keys]
        return _report(g, per_edge, len(reps), tuple(tag for _, tag in results), cmax)


def _report(g: Graph, per_edge: list[float], classes: int, tags: tuple[str, ...], cmax: int | None) -> EvalReport:
    total = math.fsum(per_edge)
    ratio = None
    if cmax is not None:
        ratio = approximation_ratio(total, cmax)
    return EvalReport(total, total / g.num_edges, ratio, tuple(per_edge), classes, tags, cmax)


def evaluate(
    g: Graph,
    angles: QaoaAngles,
    backend: Backend = "auto",
    cmax: int | None = None,
    dedup: bool = True,
    evaluator: Evaluator | None = None,
) -> EvalReport:
    ev = evaluator or Evaluator(backend=backend, dedup=dedup)
    return ev.evaluate(g, angles, cmax)


def guarantee(d: int, p: int, registry=None) -> float:
    """Tree-subgraph optimum for degree ``d`` at depth ``p``.

    Looks in ``registry`` (an :class:`fixedangle.angles.Registry`) first,
    then the embedded 3-regular table.
    """
    if registry is not None and (d, p) in registry:
        return registry[(d, p)].guarantee
    if d == 3 and p in CUBIC_FIXED_ANGLES:
        return CUBIC_FIXED_ANGLES[p]["guarantee"]
    raise NotAvailableError(f"no guarantee stored for degree {d}, p={p}")
