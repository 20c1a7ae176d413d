"""Angle optimization: RMSprop ascent on finite-difference gradients.

Objectives are callables on angle vectors ``[gamma_1..gamma_p, beta_1..beta_p]``.
Those with a ``batch`` method (``(B, 2p) -> (B,)``) are evaluated a whole
finite-difference stencil, or a whole multistart population, per call.
"""

from __future__ import annotations

import csv
import datetime as _dt
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import statevec, tensornet
from .angles import FixedAngleEntry, Registry, builtin_table
from .errors import DataError, DivergenceError, FixedAngleError, NotAvailableError
from .graphs import Graph, TreeSpec, tree_subgraph
from .statevec import QaoaAngles

GAMMA_BOX = math.pi
BETA_BOX = math.pi / 2
P1_INIT = (0.5, 0.5)
WARM_TOL = 1e-4


class ObjectiveError(FixedAngleError):
    def __init__(self, message: str, coordinate: int | None = None):
        self.coordinate = coordinate
        super().__init__(message)


@dataclass(frozen=True)
class OptimizerConfig:
    learning_rate: float = 0.01
    decay: float = 0.99
    epsilon: float = 1e-8
    max_iters: int = 2000
    grad_tol: float = 1e-6
    fd_step: float = 1e-4
    plateau_window: int = 50
    plateau_tol: float = 1e-10

    def __post_init__(self):
        for name in ("learning_rate", "epsilon", "grad_tol", "fd_step", "plateau_tol"):
            if not getattr(self, name) > 0:
                raise DataError(f"{name} must be positive, got {getattr(self, name)}")
        if not 0 < self.decay < 1:
            raise DataError(f"decay must lie in (0, 1), got {self.decay}")
        if self.max_iters < 1 or self.plateau_window < 1:
            raise DataError("max_iters and plateau_window must be positive")


@dataclass
class OptResult:
    angles: QaoaAngles
    value: float
    iterations: int
    converged: bool
    trace: list[tuple[int, float]] | None = None
    start: np.ndarray | None = field(default=None, repr=False)
    grad_norm: float = float("nan")
    diverged: bool = False


def evaluate_points(objective: Callable, points: np.ndarray) -> np.ndarray:
    points = np.atleast_2d(points)
    batch = getattr(objective, "batch", None)
    if batch is not None:
        return np.asarray(batch(points), dtype=float)
    return np.array([float(objective(x)) for x in points])


def _stencil(x: np.ndarray, h: float) -> np.ndarray:
    """Rows ``x``, then ``x + h e_k`` and ``x - h e_k`` for every coordinate."""
    b, dim = x.shape
    eye = h * np.eye(dim)
    plus = x[:, None, :] + eye[None]
    minus = x[:, None, :] - eye[None]
    return np.concatenate([x[:, None, :], plus, minus], axis=1).reshape(b * (2 * dim + 1), dim)


def _value_and_grad(objective, x: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray]:
    b, dim = x.shape
    vals = evaluate_points(objective, _stencil(x, h)).reshape(b, 2 * dim + 1)
    grad = (vals[:, 1:dim + 1] - vals[:, dim + 1:]) / (2 * h)
    return vals[:, 0], grad


def finite_diff_gradient(objective: Callable, point: Sequence[float], h: float = 1e-4) -> np.ndarray:
    """Central differences ``(f(x + h e_k) - f(x - h e_k)) / 2h``."""
    if not h > 0:
        raise DataError(f"finite-difference step must be positive, got {h}")
    x = np.asarray(point, dtype=float)
    grad = np.empty(x.size)
    for k in range(x.size):
        e = np.zeros(x.size)
        e[k] = h
        try:
            hi, lo = float(objective(x + e)), float(objective(x - e))
        except Exception as exc:
            raise ObjectiveError(f"objective failed at coordinate {k}: {exc}", k) from exc
        grad[k] = (hi - lo) / (2 * h)
    return grad


def rmsprop_batch(
    objective: Callable,
    starts: np.ndarray,
    cfg: OptimizerConfig = OptimizerConfig(),
    record_trace: bool = True,
) -> list[OptResult]:
    """Independent RMSprop ascents from every row of ``starts``, run in lockstep.

    A run stops when its gradient norm drops below ``grad_tol``, when its
    value moves less than ``plateau_tol`` over ``plateau_window``
    iterations, or at ``max_iters``. Each run returns its best iterate, so
    the final value is never below the starting value. A run whose value
    or gradient turns non-finite is marked ``diverged``.
    """
    x = np.array(np.atleast_2d(starts), dtype=float)
    b, dim = x.shape
    if dim % 2 or dim == 0:
        raise DataError(f"angle vectors need even nonzero length, got {dim}")
    h = cfg.fd_step
    avg = np.zeros_like(x)
    active = np.ones(b, dtype=bool)
    converged = np.zeros(b, dtype=bool)
    diverged = np.zeros(b, dtype=bool)
    iters = np.zeros(b, dtype=int)
    history: list[list[float]] = [[] for _ in range(b)]
    traces: list[list[tuple[int, float]]] = [[] for _ in range(b)]

    val, grad = _value_and_grad(objective, x, h)
    bad = ~(np.isfinite(val) & np.all(np.isfinite(grad), axis=1))
    if np.any(bad):
        raise DivergenceError("objective is not finite at the starting point", last_good=None)
    best_x, best_val = x.copy(), val.copy()
    gnorm = np.linalg.norm(grad, axis=1)
    best_g = gnorm.copy()
    for r in range(b):
        history[r].append(val[r])
        if record_trace:
            traces[r].append((0, float(val[r])))

    for it in range(1, cfg.max_iters + 1):
        gnorm = np.linalg.norm(grad, axis=1)
        for r in np.flatnonzero(active):
            if gnorm[r] < cfg.grad_tol:
                active[r] = False
                converged[r] = True
            elif len(history[r]) > cfg.plateau_window and abs(
                history[r][-1] - history[r][-1 - cfg.plateau_window]
            ) < cfg.plateau_tol:
                active[r] = False
                converged[r] = gnorm[r] <= 10 * cfg.grad_tol
        rows = np.flatnonzero(active)
        if rows.size == 0:
            break
        g = grad[rows]
        avg[rows] = cfg.decay * avg[rows] + (1 - cfg.decay) * g * g
        x[rows] = x[rows] + cfg.learning_rate * g / np.sqrt(avg[rows] + cfg.epsilon)
        iters[rows] = it
        v_new, g_new = _value_and_grad(objective, x[rows], h)
        ok = np.isfinite(v_new) & np.all(np.isfinite(g_new), axis=1)
        for k, r in enumerate(rows):
            if not ok[k]:
                active[r] = False
                diverged[r] = True
                continue
            val[r] = v_new[k]
            grad[r] = g_new[k]
            history[r].append(v_new[k])
            if record_trace:
                traces[r].append((it, float(v_new[k])))
            if v_new[k] > best_val[r]:
                best_val[r] = v_new[k]
                best_x[r] = x[r]
                best_g[r] = np.linalg.norm(g_new[k])

    results = []
    for r in range(b):
        results.append(
            OptResult(
                angles=QaoaAngles.from_vector(best_x[r]),
                value=float(best_val[r]),
                iterations=int(iters[r]),
                converged=bool(converged[r] and best_g[r] <= 10 * cfg.grad_tol),
                trace=traces[r] if record_trace else None,
                start=np.array(starts[r] if np.ndim(starts) == 2 else starts, dtype=float),
                grad_norm=float(best_g[r]),
                diverged=bool(diverged[r]),
            )
        )
    return results


def rmsprop_maximize(
    objective: Callable,
    init: Sequence[float] | QaoaAngles,
    cfg: OptimizerConfig = OptimizerConfig(),
    record_trace: bool = True,
) -> OptResult:
    """Single RMSprop ascent; raises :class:`DivergenceError` on a non-finite step."""
    x0 = init.to_vector() if isinstance(init, QaoaAngles) else np.asarray(init, dtype=float)
    res = rmsprop_batch(objective, x0[None, :], cfg, record_trace)[0]
    if res.diverged:
        raise DivergenceError("objective or gradient became non-finite", last_good=res.angles)
    return res


def random_starts(p: int, n_starts: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    gamma = rng.uniform(0.0, GAMMA_BOX, size=(n_starts, p))
    beta = rng.uniform(0.0, BETA_BOX, size=(n_starts, p))
    return np.hstack([gamma, beta])


def multistart(
    objective: Callable,
    p: int,
    n_starts: int,
    seed: int,
    cfg: OptimizerConfig = OptimizerConfig(),
    chunk: int = 256,
    record_trace: bool = False,
) -> OptResult:
    """Best of ``n_starts`` RMSprop runs from uniform starts in ``(0, pi) x (0, pi/2)``.

    The returned result carries every run in ``result.runs``.
    """
    if n_starts < 1:
        raise DataError(f"n_starts must be >= 1, got {n_starts}")
    starts = random_starts(p, n_starts, seed)
    runs: list[OptResult] = []
    for lo in range(0, n_starts, chunk):
        runs.extend(rmsprop_batch(objective, starts[lo:lo + chunk], cfg, record_trace))
    good = [r for r in runs if not r.diverged]
    if not good:
        raise DivergenceError(f"all {n_starts} starts diverged")
    best = max(good, key=lambda r: r.value)
    best.runs = runs  # type: ignore[attr-defined]
    return best


def interp_extend(angles: QaoaAngles) -> QaoaAngles:
    """Resample the ``p`` angles as a piecewise-linear schedule at ``p + 1`` points."""
    p = angles.p
    if p == 1:
        return QaoaAngles(angles.gamma * 2, angles.beta * 2)
    old = np.linspace(0.0, 1.0, p)
    new = np.linspace(0.0, 1.0, p + 1)
    return QaoaAngles(tuple(np.interp(new, old, angles.gamma)), tuple(np.interp(new, old, angles.beta)))


def canonical_angles(angles: QaoaAngles) -> QaoaAngles:
    """Representative under the exact symmetries ``beta_k -> beta_k + pi/2`` and ``(gamma, beta) -> -(gamma, beta)``.

    Each ``beta_k`` is folded into ``[-pi/4, pi/4)``, then the overall sign
    is chosen to make the first nonzero ``gamma`` positive.
    """
    beta = [((b + math.pi / 4) % (math.pi / 2)) - math.pi / 4 for b in angles.beta]
    gamma = list(angles.gamma)
    lead = next((g for g in gamma if abs(g) > 1e-12), 0.0)
    if lead < 0:
        gamma = [-g for g in gamma]
        beta = [-b for b in beta]
        beta = [((b + math.pi / 4) % (math.pi / 2)) - math.pi / 4 for b in beta]
    return QaoaAngles(tuple(gamma), tuple(beta))


def angle_distance(a: QaoaAngles, b: QaoaAngles) -> float:
    """Euclidean distance between canonical representatives."""
    return float(np.linalg.norm(canonical_angles(a).to_vector() - canonical_angles(b).to_vector()))


class TreeObjective:
    """Central-edge cut probability on the ``(d, p)`` tree subgraph."""

    def __init__(self, d: int, p: int, backend: str = "auto", statevector_max: int = 12):
        self.d, self.p = d, p
        self.tree = tree_subgraph(TreeSpec(d, p))
        if backend == "auto":
            backend = "statevector" if self.tree.graph.num_vertices <= statevector_max else "tensor"
        if backend not in ("statevector", "tensor"):
            raise DataError(f"unknown backend {backend!r}")
        self.backend = backend
        self.orders = tensornet.OrderCache()

    def batch(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(points)
        if points.shape[1] != 2 * self.p:
            raise DataError(f"expected {2 * self.p} angles per row, got {points.shape[1]}")
        if self.backend == "statevector":
            return statevec.expectation_batch(self.tree.graph, points, edge=self.tree.central_pair)
        return tensornet.edge_expectation_tn_batch(self.tree, points, cache=self.orders)

    def __call__(self, x: Sequence[float]) -> float:
        return float(self.batch(np.asarray(x, dtype=float)[None, :])[0])


class GraphObjective:
    """Expected cut of a whole graph, divided by ``cmax`` (or by ``M`` when absent)."""

    def __init__(self, g: Graph, p: int, cmax: int | None = None):
        self.g, self.p = g, p
        self.scale = float(cmax if cmax else g.num_edges)

    def batch(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(points)
        if points.shape[1] != 2 * self.p:
            raise DataError(f"expected {2 * self.p} angles per row, got {points.shape[1]}")
        return statevec.expectation_batch(self.g, points) / self.scale

    def __call__(self, x: Sequence[float]) -> float:
        return float(self.batch(np.asarray(x, dtype=float)[None, :])[0])


def _today() -> str:
    return _dt.date.today().isoformat()


def optimize_tree_angles(
    d: int,
    p: int,
    strategy: str = "interp",
    cfg: OptimizerConfig = OptimizerConfig(),
    seed: int = 0,
    n_starts: int = 200,
    registry: Registry | None = None,
    backend: str = "auto",
    date: str | None = None,
) -> FixedAngleEntry:
    """Optimal tree-subgraph angles for ``(d, p)``.

    ``interp`` ascends from the interpolated ``p - 1`` entry (registry,
    then embedded table, else computed recursively; ``p = 1`` starts from
    a fixed point). ``multistart`` uses ``n_starts`` random starts.
    ``both`` runs the two and keeps the better.
    """
    if strategy not in ("interp", "multistart", "both"):
        raise DataError(f"unknown strategy {strategy!r}")
    objective = TreeObjective(d, p, backend=backend)
    results: dict[str, OptResult] = {}
    if strategy in ("interp", "both"):
        if p == 1:
            init = QaoaAngles((P1_INIT[0],), (P1_INIT[1],))
        else:
            try:
                prev = builtin_table(d, p - 1, registry).angles
            except NotAvailableError:
                prev = optimize_tree_angles(d, p - 1, "interp", cfg, seed, registry=registry, backend=backend).angles
            init = interp_extend(prev)
        results["interp"] = rmsprop_maximize(objective, init, cfg, record_trace=False)
    if strategy in ("multistart", "both"):
        results["multistart"] = multistart(objective, p, n_starts, seed, cfg)
    name, best = max(results.items(), key=lambda kv: kv[1].value)
    provenance = {
        "kind": "computed",
        "strategy": strategy,
        "selected": name,
        "seed": seed,
        "date": date or _today(),
        "backend": objective.backend,
        "iterations": best.iterations,
        "converged": best.converged,
        "values": {k: r.value for k, r in results.items()},
    }
    if strategy in ("multistart", "both"):
        provenance["n_starts"] = n_starts
    return FixedAngleEntry(d, p, best.angles, best.value, provenance)


@dataclass(frozen=True)
class WarmStartRecord:
    fixed_value: float
    warm_value: float
    global_value: float
    euclid_distance: float
    reached_global: bool
    warm_angles: QaoaAngles
    global_angles: QaoaAngles


def warm_start_compare(
    g: Graph,
    p: int,
    fixed: QaoaAngles,
    cfg: OptimizerConfig = OptimizerConfig(),
    multistart_budget: int = 20,
    seed: int = 0,
    cmax: int | None = None,
) -> WarmStartRecord:
    """Ascend from the fixed angles and compare with a multistart optimum.

    Values are approximation ratios when ``cmax`` is given, cut fractions
    otherwise. The distance is measured in raw angle coordinates, since
    the warm run starts at ``fixed`` and stays in its basin.
    """
    objective = GraphObjective(g, p, cmax)
    fixed_value = objective(fixed.to_vector())
    warm = rmsprop_maximize(objective, fixed, cfg, record_trace=False)
    best = multistart(objective, p, multistart_budget, seed, cfg)
    return WarmStartRecord(
        fixed_value=fixed_value,
        warm_value=warm.value,
        global_value=best.value,
        euclid_distance=float(np.linalg.norm(warm.angles.to_vector() - fixed.to_vector())),
        reached_global=warm.value >= best.value - WARM_TOL,
        warm_angles=warm.angles,
        global_angles=best.angles,
    )


def write_trace_csv(result: OptResult, path: str | Path) -> None:
    if result.trace is None:
        raise DataError("result carries no trace; rerun with record_trace=True")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["iteration", "value"])
        for it, v in result.trace:
            w.writerow([it, repr(v)])
