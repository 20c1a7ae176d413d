"""Tensor-network evaluation of single-edge QAOA expectation values.

A network for ``<gamma,beta| Z_a Z_b |gamma,beta>`` is built from the
ket circuit, its mirrored conjugate, and the two ``Z`` tensors joining them
at the top. It is contracted by bucket elimination along a greedy
elimination order.
"""

from __future__ import annotations

import math
import string
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .errors import CapacityError, ConsistencyError, DataError
from .graphs import EdgeSubgraph
from .statevec import QaoaAngles

MEMORY_CAP = 2**30
WIDTH_CAP = 30
IMAG_TOL = 1e-9

Strategy = Literal["greedy-degree", "greedy-fill"]
STRATEGIES: tuple[str, ...] = ("greedy-degree", "greedy-fill")

_LETTERS = string.ascii_letters

_PLUS = np.full(2, 1 / math.sqrt(2), dtype=np.complex128)
_Z = np.array([1.0, -1.0], dtype=np.complex128)


@dataclass
class TensorNetwork:
    """Dense binary tensors; ``tensors[k] = (indices, table)`` with ``table.shape == (2,) * len(indices)``."""

    tensors: list[tuple[tuple[int, ...], np.ndarray]]
    index_count: int
    open_indices: tuple[int, ...] = ()
    batch: int | None = None

    def structure(self) -> tuple[tuple[int, ...], ...]:
        return tuple(ix for ix, _ in self.tensors)

    def validate(self) -> None:
        seen = set()
        lead = () if self.batch is None else (self.batch,)
        for ix, t in self.tensors:
            if t.shape not in ((2,) * len(ix), lead + (2,) * len(ix)):
                raise ConsistencyError(f"tensor over {ix} has shape {t.shape}")
            if len(set(ix)) != len(ix):
                raise ConsistencyError(f"repeated index in tensor {ix}")
            seen.update(ix)
        if seen != set(range(self.index_count)):
            raise ConsistencyError("indices are not exactly 0..index_count-1")


@dataclass(frozen=True)
class ContractionOrder:
    sequence: tuple[int, ...]
    width: int
    strategy: str = field(default="greedy-fill", compare=False)


def causal_layers(sub: EdgeSubgraph, p: int, prune: bool = True) -> tuple[list[int], list[list[tuple[int, int]]]]:
    """Top mixer layer of every qubit and the cost gates kept in every layer.

    Walking down from the observable, a mixer at layer ``k`` matters only
    on qubits already in the support, and a cost gate only when it touches
    the support; everything else cancels against its conjugate. Qubits
    that never enter the support get ``-1``.
    """
    g = sub.graph
    n = g.num_vertices
    if not prune:
        return [p] * n, [list(g.edges) for _ in range(p)]
    a, b = sub.central_pair
    top = [-1] * n
    support = {a, b}
    gates: list[list[tuple[int, int]]] = [[] for _ in range(p)]
    for k in range(p, 0, -1):
        for q in support:
            if top[q] < 0:
                top[q] = k
        kept = [e for e in g.edges if e[0] in support or e[1] in support]
        gates[k - 1] = kept
        for i, j in kept:
            support.add(i)
            support.add(j)
    for q in support:
        if top[q] < 0:
            top[q] = 0
    return top, gates


def _mixer(beta) -> np.ndarray:
    """``exp(-i beta X)``; a leading batch axis follows ``beta``."""
    c = np.cos(np.asarray(beta, dtype=float))
    s = np.sin(np.asarray(beta, dtype=float))
    out = np.empty(c.shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = out[..., 1, 1] = c
    out[..., 0, 1] = out[..., 1, 0] = -1j * s
    return out


def _phase_matrix(gamma) -> np.ndarray:
    w = np.exp(-1j * np.asarray(gamma, dtype=float))
    out = np.empty(w.shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = out[..., 1, 1] = 1.0
    out[..., 0, 1] = out[..., 1, 0] = w
    return out


def _phase_rank4(gamma) -> np.ndarray:
    d = _phase_matrix(gamma)
    t = np.zeros(d.shape[:-2] + (2, 2, 2, 2), dtype=np.complex128)
    for x in range(2):
        for y in range(2):
            t[..., x, y, x, y] = d[..., x, y]
    return t


def build_edge_network(
    sub: EdgeSubgraph,
    angles: QaoaAngles | np.ndarray,
    diagonal: bool = True,
    prune: bool = True,
) -> TensorNetwork:
    """Closed network whose value is ``<Z_a Z_b>`` on the central edge.

    ``angles`` may also be a ``(B, 2p)`` array of angle vectors; the
    angle-dependent tensors then carry a leading batch axis and the network
    evaluates all ``B`` points in one contraction. Index layout is a pure
    function of ``(sub, p, diagonal, prune)``, so contraction orders can be
    reused across angle values.
    """
    if isinstance(angles, QaoaAngles):
        batch = None
        gammas, betas = np.array(angles.gamma), np.array(angles.beta)
        p = angles.p
    else:
        x = np.asarray(angles, dtype=float)
        if x.ndim != 2 or x.shape[1] % 2 or x.shape[1] == 0:
            raise DataError(f"batched angles must have shape (B, 2p), got {x.shape}")
        batch = x.shape[0]
        p = x.shape[1] // 2
        gammas, betas = x[:, :p].T, x[:, p:].T
    top, gates = causal_layers(sub, p, prune)
    a, b = sub.central_pair
    n = sub.graph.num_vertices
    counter = iter(range(10**9))
    tensors: list[tuple[tuple[int, ...], np.ndarray]] = []

    def half(conj: bool) -> list[int]:
        cur = [-1] * n
        for q in range(n):
            if top[q] >= 0:
                cur[q] = next(counter)
                tensors.append(((cur[q],), _PLUS))
        for k in range(1, p + 1):
            gamma, beta = gammas[k - 1], betas[k - 1]
            for i, j in gates[k - 1]:
                if diagonal:
                    m = _phase_matrix(gamma)
                    tensors.append(((cur[i], cur[j]), m.conj() if conj else m))
                else:
                    t = _phase_rank4(gamma)
                    oi, oj = next(counter), next(counter)
                    tensors.append(((oi, oj, cur[i], cur[j]), t.conj() if conj else t))
                    cur[i], cur[j] = oi, oj
            r = _mixer(beta)
            for q in range(n):
                if top[q] >= k:
                    new = next(counter)
                    tensors.append(((new, cur[q]), r.conj() if conj else r))
                    cur[q] = new
        return cur

    ket_top = half(conj=False)
    split = len(tensors)
    bra_top = half(conj=True)
    # the observable is diagonal: ket and bra top indices coincide
    rename = {bra_top[q]: ket_top[q] for q in range(n) if top[q] >= 0}
    for k in range(split, len(tensors)):
        ix, t = tensors[k]
        tensors[k] = (tuple(rename.get(i, i) for i in ix), t)
    tensors.append(((ket_top[a],), _Z))
    tensors.append(((ket_top[b],), _Z))

    used = sorted({i for ix, _ in tensors for i in ix})
    compact = {old: new for new, old in enumerate(used)}
    tensors = [(tuple(compact[i] for i in ix), t) for ix, t in tensors]
    return TensorNetwork(tensors, len(used), batch=batch)


def _adjacency(net: TensorNetwork) -> list[set[int]]:
    adj: list[set[int]] = [set() for _ in range(net.index_count)]
    for ix, _ in net.tensors:
        for i in ix:
            adj[i].update(j for j in ix if j != i)
    return adj


def _fill_in(adj: list[set[int]], v: int) -> int:
    nb = list(adj[v])
    missing = 0
    for x in range(len(nb)):
        ax = adj[nb[x]]
        for y in range(x + 1, len(nb)):
            if nb[y] not in ax:
                missing += 1
    return missing


def find_order(net: TensorNetwork, strategy: str = "greedy-fill", seed: int | None = 0) -> ContractionOrder:
    """Greedy elimination order on the index interaction graph.

    Two indices are adjacent when some tensor carries both. At each step the
    index with the fewest neighbours (``greedy-degree``) or the fewest
    missing neighbour pairs (``greedy-fill``) is eliminated and its
    neighbours joined into a clique. Ties go to a seeded permutation
    (identity for ``seed=None``).
    """
    if strategy not in STRATEGIES:
        raise DataError(f"unknown ordering strategy {strategy!r}; choose from {STRATEGIES}")
    adj = _adjacency(net)
    count = net.index_count
    if seed is None:
        tie = list(range(count))
    else:
        tie = np.random.default_rng(seed).permutation(count).tolist()
    alive = set(range(count))
    width = max((len(ix) for ix, _ in net.tensors), default=0)
    sequence = []
    while alive:
        if strategy == "greedy-degree":
            v = min(alive, key=lambda x: (len(adj[x]), tie[x]))
        else:
            v = min(alive, key=lambda x: (_fill_in(adj, x), len(adj[x]), tie[x]))
        nb = adj[v]
        width = max(width, len(nb))
        for x in nb:
            adj[x].discard(v)
            adj[x].update(y for y in nb if y != x)
        adj[v] = set()
        alive.remove(v)
        sequence.append(v)
    return ContractionOrder(tuple(sequence), width, strategy)


def best_order(net: TensorNetwork, seed: int | None = 0) -> ContractionOrder:
    """The narrower of the two greedy orders."""
    orders = [find_order(net, s, seed) for s in STRATEGIES]
    return min(orders, key=lambda o: o.width)


def _einsum(operands: Sequence[tuple[tuple[int, ...], np.ndarray]], out: tuple[int, ...]) -> np.ndarray:
    letters: dict[int, str] = {}
    for ix, _ in operands:
        for i in ix:
            if i not in letters:
                letters[i] = _LETTERS[len(letters)]
    spec = ",".join("..." + "".join(letters[i] for i in ix) for ix, _ in operands)
    spec += "->..." + "".join(letters[i] for i in out)
    return np.einsum(spec, *(t for _, t in operands))


def _contract(
    net: TensorNetwork,
    order: ContractionOrder,
    memory_cap: int,
    trace: list[str] | None,
    stats: dict | None,
) -> np.ndarray:
    if sorted(order.sequence) != list(range(net.index_count)):
        raise DataError("contraction order must cover every index exactly once")
    pool: dict[int, tuple[tuple[int, ...], np.ndarray]] = dict(enumerate(net.tensors))
    holders: dict[int, set[int]] = {i: set() for i in range(net.index_count)}
    for tid, (ix, _) in pool.items():
        for i in ix:
            holders[i].add(tid)
    next_id = len(pool)
    max_rank = max((len(ix) for ix, _ in net.tensors), default=0)
    scalars: list[np.ndarray] = []

    for step, idx in enumerate(order.sequence):
        tids = sorted(holders.pop(idx))
        if not tids:
            raise ConsistencyError(f"index {idx} has no tensors left at step {step}")
        bucket = [pool.pop(t) for t in tids]
        union: list[int] = []
        for ix, _ in bucket:
            for i in ix:
                if i != idx and i not in union:
                    union.append(i)
        rank = len(union)
        if 2**rank * (net.batch or 1) > memory_cap:
            raise CapacityError(
                f"eliminating index {idx} needs a rank-{rank} tensor (2^{rank} entries, cap {memory_cap})"
            )
        out = tuple(sorted(union))
        result = _einsum(bucket, out)
        max_rank = max(max_rank, rank)
        if trace is not None:
            trace.append(f"step {step} index {idx} bucket {len(bucket)} rank {rank}")
        for i in out:
            holders[i].difference_update(tids)
        if out:
            pool[next_id] = (out, result)
            for i in out:
                holders[i].add(next_id)
            next_id += 1
        else:
            scalars.append(result)
    for ix, t in pool.values():
        if ix:
            raise ConsistencyError(f"tensor over {ix} left uncontracted")
        scalars.append(t)
    if stats is not None:
        stats["max_rank"] = max_rank
    value = np.ones(() if net.batch is None else (net.batch,), dtype=np.complex128)
    for t in scalars:
        value = value * t
    worst = float(np.max(np.abs(value.imag))) if value.size else 0.0
    if worst > IMAG_TOL:
        raise ConsistencyError(f"expectation has imaginary part {worst:.3e}")
    return value.real


def contract(
    net: TensorNetwork,
    order: ContractionOrder,
    memory_cap: int = MEMORY_CAP,
    trace: list[str] | None = None,
    stats: dict | None = None,
) -> float:
    """Bucket elimination along ``order.sequence``; returns the real scalar.

    Each step multiplies every live tensor carrying the index and sums the
    index out. ``stats['max_rank']`` receives the largest rank
    materialised; ``trace`` receives one line per step.
    """
    if net.batch is not None:
        raise DataError("batched network: use contract_batch")
    return float(_contract(net, order, memory_cap, trace, stats))


def contract_batch(
    net: TensorNetwork,
    order: ContractionOrder,
    memory_cap: int = MEMORY_CAP,
    stats: dict | None = None,
) -> np.ndarray:
    """Like :func:`contract` for a batched network; one value per batch row."""
    if net.batch is None:
        raise DataError("unbatched network: use contract")
    return _contract(net, order, memory_cap, None, stats)


class OrderCache:
    """Contraction orders keyed by network structure, shared across angle values."""

    def __init__(self, strategy: str | None = None, seed: int | None = 0):
        self.strategy = strategy
        self.seed = seed
        self._orders: dict[tuple, ContractionOrder] = {}

    def __len__(self) -> int:
        return len(self._orders)

    def get(self, net: TensorNetwork) -> ContractionOrder:
        key = net.structure()
        order = self._orders.get(key)
        if order is None:
            if self.strategy is None:
                order = best_order(net, self.seed)
            else:
                order = find_order(net, self.strategy, self.seed)
            self._orders[key] = order
        return order


_default_cache = OrderCache()


def edge_zz_tn(
    sub: EdgeSubgraph,
    angles: QaoaAngles,
    cache: OrderCache | None = None,
    width_cap: int = WIDTH_CAP,
    memory_cap: int = MEMORY_CAP,
) -> float:
    net = build_edge_network(sub, angles)
    order = (_default_cache if cache is None else cache).get(net)
    if order.width > width_cap:
        raise CapacityError(f"contraction width {order.width} exceeds cap {width_cap}")
    return contract(net, order, memory_cap=memory_cap)


def edge_expectation_tn(
    sub: EdgeSubgraph,
    angles: QaoaAngles,
    cache: OrderCache | None = None,
    width_cap: int = WIDTH_CAP,
    memory_cap: int = MEMORY_CAP,
) -> float:
    """Cut probability ``(1 - <ZZ>) / 2`` of the central edge."""
    zz = edge_zz_tn(sub, angles, cache, width_cap, memory_cap)
    f = (1.0 - zz) / 2.0
    if not -IMAG_TOL <= f <= 1.0 + IMAG_TOL:
        raise ConsistencyError(f"edge expectation {f!r} outside [0, 1]")
    return min(1.0, max(0.0, f))


def edge_expectation_tn_batch(
    sub: EdgeSubgraph,
    points: np.ndarray,
    cache: OrderCache | None = None,
    width_cap: int = WIDTH_CAP,
    memory_cap: int = MEMORY_CAP,
) -> np.ndarray:
    """Central-edge cut probability at each row of a ``(B, 2p)`` angle array."""
    net = build_edge_network(sub, points)
    order = (_default_cache if cache is None else cache).get(net)
    if order.width > width_cap:
        raise CapacityError(f"contraction width {order.width} exceeds cap {width_cap}")
    zz = contract_batch(net, order, memory_cap=memory_cap)
    return np.clip((1.0 - zz) / 2.0, 0.0, 1.0)


def dump_trace(net: TensorNetwork, order: ContractionOrder) -> str:
    """Text trace of tensor ranks per elimination step, for regression tracking."""
    lines = [
        f"tensors {len(net.tensors)} indices {net.index_count} width {order.width} strategy {order.strategy}",
    ]
    trace: list[str] = []
    zero = TensorNetwork([(ix, np.ones(t.shape, dtype=np.complex128)) for ix, t in net.tensors], net.index_count)
    contract(zero, order, trace=trace)
    lines.extend(trace)
    return "\n".join(lines) + "\n"
