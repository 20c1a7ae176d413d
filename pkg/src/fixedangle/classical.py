"""Classical baselines: exact MaxCut, Goemans-Williamson, and the ratios built on them."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import kernels
from .errors import CapacityError, DataError
from .graphs import Graph

MAXCUT_CAP = 28
GW_RESTARTS = 50
GW_SAMPLES = 100
GW_RATIO = 0.8786


@dataclass(frozen=True)
class MaxCutResult:
    value: int
    witness: int
    optimal: bool = True


@dataclass(frozen=True)
class GwResult:
    relaxation_value: float
    embedding: np.ndarray
    cut_samples: tuple[int, ...] = ()
    average_cut: float = float("nan")
    converged: bool = True

    def sample_stderr(self) -> float:
        """Standard error of ``average_cut`` over the drawn samples."""
        k = len(self.cut_samples)
        if k < 2:
            return float("inf")
        return float(np.std(self.cut_samples, ddof=1) / math.sqrt(k))


def maxcut_exact(g: Graph, cap: int = MAXCUT_CAP) -> MaxCutResult:
    """Exhaustive MaxCut. Vertex 0 stays on side 0, halving the search."""
    if g.num_vertices > cap:
        raise CapacityError(
            f"exact MaxCut enumerates 2^{g.num_vertices - 1} cuts; cap is {cap} vertices (report cut fraction instead)"
        )
    if not g.edges:
        return MaxCutResult(0, 0, True)
    value, mask = kernels.maxcut_gray(g.num_vertices, g.edge_array())
    return MaxCutResult(int(value), int(mask), True)


def maxcut_naive(g: Graph) -> int:
    """Plain enumeration of every bipartition; the oracle for :func:`maxcut_exact`."""
    if g.num_vertices > 20:
        raise CapacityError("naive enumeration is limited to 20 vertices")
    return max(g.cut_size(m) for m in range(1 << g.num_vertices))


def default_rank(n: int) -> int:
    return max(3, math.ceil(math.sqrt(2 * n)))


def gw_solve(
    g: Graph,
    rank: int | None = None,
    iters: int = 3000,
    seed: int = 0,
    restarts: int = GW_RESTARTS,
    tol: float = 1e-12,
) -> GwResult:
    """Low-rank factorization of the MaxCut semidefinite relaxation.

    Maximizes ``sum_edges (1 - v_i . v_j) / 2`` over unit vectors in
    ``R^rank`` by gradient ascent with row renormalization, from
    ``restarts`` seeded random starts run side by side; the best is kept.
    """
    n = g.num_vertices
    rank = default_rank(n) if rank is None else int(rank)
    if rank < 2:
        raise DataError(f"GW embedding rank must be >= 2, got {rank}")
    if not g.edges:
        v = np.zeros((n, rank))
        v[:, 0] = 1.0
        return GwResult(0.0, v)
    rng = np.random.default_rng(seed)
    adj = np.zeros((n, n))
    for i, j in g.edges:
        adj[i, j] = adj[j, i] = 1.0
    step = 1.0 / max(g.degrees())
    v = rng.standard_normal((restarts, n, rank))
    v /= np.linalg.norm(v, axis=2, keepdims=True)

    def objective(v):
        return 0.25 * np.einsum("rik,ij,rjk->r", v, -adj, v) + 0.5 * g.num_edges

    value = objective(v)
    converged = False
    for _ in range(iters):
        grad = -0.5 * np.einsum("ij,rjk->rik", adj, v)
        v = v + step * grad
        v /= np.linalg.norm(v, axis=2, keepdims=True)
        new = objective(v)
        if np.max(np.abs(new - value)) < tol:
            value = new
            converged = True
            break
        value = new
    best = int(np.argmax(value))
    return GwResult(float(value[best]), v[best].copy(), converged=converged)


def gw_round(res: GwResult, g: Graph, n_samples: int = GW_SAMPLES, seed: int = 0) -> GwResult:
    """Random-hyperplane rounding: each sample cuts by the sign of ``v_i . r``."""
    if n_samples < 1:
        raise DataError(f"need at least one rounding sample, got {n_samples}")
    rng = np.random.default_rng(seed)
    planes = rng.standard_normal((res.embedding.shape[1], n_samples))
    sides = res.embedding @ planes >= 0
    e = g.edge_array()
    cuts = np.count_nonzero(sides[e[:, 0]] != sides[e[:, 1]], axis=0) if len(e) else np.zeros(n_samples, int)
    samples = tuple(int(c) for c in cuts)
    return replace(res, cut_samples=samples, average_cut=float(np.mean(cuts)))


def gw_expected_cut(res: GwResult, g: Graph) -> float:
    """Infinite-sample rounding average: each edge is cut with probability ``angle(v_i, v_j) / pi``."""
    e = g.edge_array()
    if not len(e):
        return 0.0
    dots = np.einsum("ij,ij->i", res.embedding[e[:, 0]], res.embedding[e[:, 1]])
    return float(math.fsum(np.arccos(np.clip(dots, -1.0, 1.0)) / math.pi))


def goemans_williamson(g: Graph, n_samples: int = GW_SAMPLES, seed: int = 0, **solve_kw) -> GwResult:
    return gw_round(gw_solve(g, seed=seed, **solve_kw), g, n_samples, seed=seed + 1)


def approximation_ratio(expected_cut: float, cmax: int) -> float:
    if cmax <= 0:
        raise ZeroDivisionError("approximation ratio needs a positive MaxCut value")
    return expected_cut / cmax


def performance_ratio(expected_cut: float, avg_classical: float) -> float:
    if avg_classical <= 0:
        raise ZeroDivisionError("performance ratio needs a positive classical average cut")
    return expected_cut / avg_classical
