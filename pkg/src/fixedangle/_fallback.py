"""Pure numpy versions of the compiled kernels in ``_kernels.pyx``."""

from __future__ import annotations

import numpy as np


def cut_diagonal(n: int, edges: np.ndarray) -> np.ndarray:
    """Cut size of every bitstring, vertex ``i`` on bit ``i``.

    Built by doubling: appending vertex ``k`` on side 1 adds one cut per
    lower neighbour still on side 0 and removes one per neighbour on side 1.
    """
    out = np.zeros(1, dtype=np.int32)
    lower = [[] for _ in range(n)]
    for i, j in np.asarray(edges).reshape(-1, 2).tolist():
        lower[max(i, j)].append(min(i, j))
    for k in range(n):
        if lower[k]:
            idx = np.arange(out.size, dtype=np.int64)
            ones = np.zeros(out.size, dtype=np.int32)
            for j in lower[k]:
                ones += ((idx >> j) & 1).astype(np.int32)
            out = np.concatenate([out + ones, out + len(lower[k]) - ones])
        else:
            out = np.concatenate([out, out])
    return out


def apply_phase(state: np.ndarray, diag: np.ndarray, table: np.ndarray) -> None:
    state *= table[diag]


def apply_mixer(state: np.ndarray, n: int, beta: float) -> None:
    c, ms = np.cos(beta), -1j * np.sin(beta)
    for q in range(n):
        view = state.reshape(-1, 2, 1 << q)
        a = view[:, 0, :].copy()
        b = view[:, 1, :]
        view[:, 0, :] = c * a + ms * b
        view[:, 1, :] = ms * a + c * b


def edge_zz(probs: np.ndarray, edges: np.ndarray) -> np.ndarray:
    idx = np.arange(probs.size, dtype=np.int64)
    out = np.empty(len(edges))
    for e, (i, j) in enumerate(np.asarray(edges).reshape(-1, 2).tolist()):
        par = ((idx >> i) ^ (idx >> j)) & 1
        out[e] = probs.sum() - 2.0 * probs[par == 1].sum()
    return out


def maxcut_gray(n: int, edges: np.ndarray) -> tuple[int, int]:
    """Exhaustive MaxCut with vertex 0 pinned to side 0.

    Enumerates the cut table of vertices ``1..n-1`` by doubling, in chunks
    of the top vertices so memory stays bounded.
    """
    if n <= 1:
        return 0, 0
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    low = min(n - 1, 22)  # vertices 1..low enumerated densely
    high = n - 1 - low
    best, best_mask = -1, 0
    for top in range(1 << high):
        fixed = top << (low + 1)  # assignment of vertices low+1..n-1
        # per-vertex linear term from edges to pinned vertices
        lin = np.zeros(low, dtype=np.int64)
        const = 0
        inner = []
        for i, j in edges.tolist():
            si = i == 0 or i > low
            sj = j == 0 or j > low
            if si and sj:
                const += ((fixed >> i) ^ (fixed >> j)) & 1
            elif si or sj:
                free, pinned = (j, i) if si else (i, j)
                side = (fixed >> pinned) & 1
                # cut iff free side differs from pinned side
                if side:
                    const += 1
                    lin[free - 1] -= 1
                else:
                    lin[free - 1] += 1
            else:
                inner.append((i - 1, j - 1))
        table = cut_diagonal(low, np.asarray(inner, dtype=np.int64)).astype(np.int64)
        for k in range(low):
            if lin[k]:
                table += lin[k] * ((np.arange(table.size) >> k) & 1)
        arg = int(np.argmax(table))
        val = int(table[arg]) + const
        if val > best:
            best, best_mask = val, fixed | (arg << 1)
    return best, best_mask
