"""Dense statevector QAOA simulation, used as the exact reference."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .errors import CapacityError, DataError
from .graphs import Graph

STATEVECTOR_CAP = 24


@dataclass(frozen=True)
class QaoaAngles:
    """Cost angles ``gamma`` and mixer angles ``beta``, one of each per layer.

    Layer ``k`` applies ``exp(-i gamma[k] C)`` with ``C`` the cut-count
    operator, then ``exp(-i beta[k] X)`` on every qubit.
    """

    gamma: tuple[float, ...]
    beta: tuple[float, ...]

    def __post_init__(self):
        gamma = tuple(float(x) for x in np.atleast_1d(self.gamma))
        beta = tuple(float(x) for x in np.atleast_1d(self.beta))
        if len(gamma) != len(beta) or not gamma:
            raise DataError(f"gamma and beta need equal nonzero length, got {len(gamma)} and {len(beta)}")
        if not all(math.isfinite(x) for x in gamma + beta):
            raise DataError("angles must be finite")
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "beta", beta)

    @property
    def p(self) -> int:
        return len(self.gamma)

    def to_vector(self) -> np.ndarray:
        return np.array(self.gamma + self.beta)

    @classmethod
    def from_vector(cls, x: Sequence[float]) -> "QaoaAngles":
        x = np.asarray(x, dtype=float)
        if x.ndim != 1 or x.size % 2:
            raise DataError(f"angle vector must have even length, got shape {x.shape}")
        p = x.size // 2
        return cls(tuple(x[:p]), tuple(x[p:]))

    @classmethod
    def zeros(cls, p: int) -> "QaoaAngles":
        return cls((0.0,) * p, (0.0,) * p)

    def digest(self) -> tuple[float, ...]:
        return self.gamma + self.beta


@dataclass(frozen=True)
class ExpectationResult:
    total: float
    per_edge: tuple[float, ...]


def _check_size(g: Graph, cap: int) -> None:
    if g.num_vertices > cap:
        raise CapacityError(
            f"statevector needs 2^{g.num_vertices} amplitudes; cap is {cap} vertices (use the tensor backend)"
        )


def qaoa_state(g: Graph, angles: QaoaAngles, cap: int = STATEVECTOR_CAP, check_norm: bool = False) -> np.ndarray:
    """Amplitudes of ``|gamma, beta>`` with vertex ``i`` on bit ``i``."""
    _check_size(g, cap)
    n = g.num_vertices
    diag = kernels.cut_diagonal(n, g.edge_array())
    levels = np.arange(g.num_edges + 1)
    state = np.full(1 << n, 2.0 ** (-n / 2), dtype=np.complex128)
    for gamma, beta in zip(angles.gamma, angles.beta):
        kernels.apply_phase(state, diag, np.exp(-1j * gamma * levels))
        kernels.apply_mixer(state, n, beta)
        if check_norm:
            norm = float(np.vdot(state, state).real)
            if abs(norm - 1.0) > 1e-12:
                raise ArithmeticError(f"state norm drifted to {norm!r}")
    return state


def simulate_expectation(g: Graph, angles: QaoaAngles, cap: int = STATEVECTOR_CAP) -> ExpectationResult:
    """Expected cut size and the cut probability of every edge."""
    state = qaoa_state(g, angles, cap)
    probs = np.abs(state) ** 2
    zz = kernels.edge_zz(probs, g.edge_array())
    per_edge = np.clip((1.0 - zz) / 2.0, 0.0, 1.0)
    return ExpectationResult(float(math.fsum(per_edge)), tuple(per_edge.tolist()))


def edge_zz_expectation(g: Graph, angles: QaoaAngles, edge: Sequence[int], cap: int = STATEVECTOR_CAP) -> float:
    """Cut probability ``(1 - <Z_i Z_j>) / 2`` of a single edge."""
    e = g.find_edge(edge)
    state = qaoa_state(g, angles, cap)
    probs = np.abs(state) ** 2
    zz = kernels.edge_zz(probs, g.edge_array()[e:e + 1])
    return float(np.clip((1.0 - zz[0]) / 2.0, 0.0, 1.0))


def expectation_batch(
    g: Graph,
    points: np.ndarray,
    edge: Sequence[int] | None = None,
    cap: int = STATEVECTOR_CAP,
    max_amplitudes: int = 1 << 22,
) -> np.ndarray:
    """Expected cut (or one edge's cut probability) at every row of a ``(B, 2p)`` angle array.

    Rows are simulated side by side in numpy, in chunks of at most
    ``max_amplitudes`` amplitudes.
    """
    _check_size(g, cap)
    x = np.atleast_2d(np.asarray(points, dtype=float))
    if x.shape[1] % 2 or x.shape[1] == 0:
        raise DataError(f"angle rows must have even nonzero length, got shape {x.shape}")
    p = x.shape[1] // 2
    n = g.num_vertices
    diag = kernels.cut_diagonal(n, g.edge_array())
    if edge is None:
        weight = diag.astype(float)
    else:
        i, j = g.edges[g.find_edge(edge)]
        idx = np.arange(1 << n)
        weight = (((idx >> i) ^ (idx >> j)) & 1).astype(float)
    chunk = max(1, max_amplitudes >> n)
    out = np.empty(x.shape[0])
    for lo in range(0, x.shape[0], chunk):
        rows = x[lo:lo + chunk]
        b = rows.shape[0]
        state = np.full((b, 1 << n), 2.0 ** (-n / 2), dtype=np.complex128)
        for k in range(p):
            state *= np.exp(-1j * np.outer(rows[:, k], diag))
            c = np.cos(rows[:, p + k])[:, None, None]
            ms = (-1j * np.sin(rows[:, p + k]))[:, None, None]
            for q in range(n):
                view = state.reshape(b, -1, 2, 1 << q)
                a0 = view[:, :, 0, :].copy()
                a1 = view[:, :, 1, :]
                view[:, :, 0, :] = c * a0 + ms * a1
                view[:, :, 1, :] = ms * a0 + c * a1
        out[lo:lo + b] = (np.abs(state) ** 2) @ weight
    return out
