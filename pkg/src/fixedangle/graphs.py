"""Graph model, graph6 I/O, regular graph generation and lightcone subgraphs."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    CapacityError,
    DataError,
    Graph6Error,
    NotFoundError,
    ParityError,
    RetryExhaustedError,
)

Edge = tuple[int, int]

GRAPH6_MAX_N = 62
TREE_VERTEX_CAP = 10**6
REGULAR_RETRY_BUDGET = 1000


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph with a canonical (sorted, i < j) edge list.

    The MaxCut objective of a graph is the number of edges cut by a
    bipartition, so the edge list is all the structure we need.
    """

    num_vertices: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        n = int(self.num_vertices)
        if n < 1:
            raise DataError(f"num_vertices must be positive, got {n}")
        canon = []
        for e in self.edges:
            i, j = int(e[0]), int(e[1])
            if i == j:
                raise DataError(f"self-loop at vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise DataError(f"edge ({i}, {j}) out of range for {n} vertices")
            canon.append((i, j) if i < j else (j, i))
        canon.sort()
        for a, b in zip(canon, canon[1:]):
            if a == b:
                raise DataError(f"duplicate edge {a}")
        object.__setattr__(self, "num_vertices", n)
        object.__setattr__(self, "edges", tuple(canon))

    @classmethod
    def from_edges(cls, edges: Iterable[Sequence[int]], num_vertices: int | None = None) -> "Graph":
        edges = [tuple(e) for e in edges]
        if num_vertices is None:
            num_vertices = 1 + max((max(e) for e in edges), default=0)
        return cls(num_vertices, tuple(edges))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.num_vertices)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def edge_index(self) -> dict[Edge, int]:
        return {e: k for k, e in enumerate(self.edges)}

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edge_index

    def find_edge(self, edge: Sequence[int]) -> int:
        i, j = int(edge[0]), int(edge[1])
        try:
            return self.edge_index[(min(i, j), max(i, j))]
        except KeyError:
            raise NotFoundError(f"edge ({i}, {j}) not in graph") from None

    def edge_array(self) -> np.ndarray:
        return np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)

    def cut_size(self, mask: int) -> int:
        """Number of edges cut by the bipartition whose side-1 vertices are the set bits of ``mask``."""
        return sum(((mask >> i) ^ (mask >> j)) & 1 for i, j in self.edges)


@dataclass(frozen=True)
class EdgeSubgraph:
    """Lightcone of one edge, relabeled so the central edge is ``(0, 1)``.

    ``origin_map[k]`` is the vertex of the parent graph that became vertex
    ``k``.
    """

    graph: Graph
    central_edge: int
    origin_map: tuple[int, ...]
    depth: int | None = field(default=None, compare=False)

    @property
    def central_pair(self) -> Edge:
        return self.graph.edges[self.central_edge]


@dataclass(frozen=True)
class TreeSpec:
    degree: int
    depth: int

    def __post_init__(self):
        if self.degree < 3:
            raise DataError(f"tree degree must be >= 3, got {self.degree}")
        if self.depth < 1:
            raise DataError(f"tree depth must be >= 1, got {self.depth}")

    @property
    def vertex_count(self) -> int:
        d, p = self.degree, self.depth
        return 2 * ((d - 1) ** (p + 1) - 1) // (d - 2)


# graph6

def _g6_char_check(data: bytes, start: int = 0) -> None:
    for k, c in enumerate(data):
        if not 63 <= c <= 126:
            raise Graph6Error(f"invalid graph6 character {chr(c)!r}", offset=start + k)


def parse_graph6(line: str | bytes) -> Graph:
    """Decode one graph6 record (N <= 62, optional ``>>graph6<<`` prefix)."""
    data = line.encode("ascii", errors="replace") if isinstance(line, str) else bytes(line)
    data = data.rstrip(b"\r\n")
    base = 0
    if data.startswith(b">>graph6<<"):
        data = data[10:]
        base = 10
    if not data:
        raise Graph6Error("empty graph6 record", offset=base)
    _g6_char_check(data, base)
    n = data[0] - 63
    if n == 63:
        raise Graph6Error("extended graph6 size header not supported (N > 62)", offset=base)
    if n < 1:
        raise Graph6Error("graph6 record encodes zero vertices", offset=base)
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    body = data[1:]
    if len(body) != nbytes:
        raise Graph6Error(
            f"expected {nbytes} adjacency bytes for N={n}, found {len(body)}",
            offset=base + 1 + min(len(body), nbytes),
        )
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            byte = body[k // 6] - 63
            if (byte >> (5 - k % 6)) & 1:
                edges.append((i, j))
            k += 1
    if nbits % 6:
        last = body[-1] - 63
        if last & ((1 << (6 - nbits % 6)) - 1):
            raise Graph6Error("nonzero padding bits", offset=base + len(data) - 1)
    return Graph(n, tuple(edges))


def encode_graph6(g: Graph) -> str:
    n = g.num_vertices
    if n > GRAPH6_MAX_N:
        raise CapacityError(f"graph6 encoding supports N <= {GRAPH6_MAX_N}, got {n}")
    bits = []
    for j in range(1, n):
        for i in range(j):
            bits.append(1 if (i, j) in g.edge_index else 0)
    bits.extend([0] * (-len(bits) % 6))
    out = [chr(n + 63)]
    for k in range(0, len(bits), 6):
        v = 0
        for b in bits[k:k + 6]:
            v = (v << 1) | b
        out.append(chr(v + 63))
    return "".join(out)


def iter_graph6(lines: Iterable[str]) -> Iterator[tuple[int, Graph]]:
    """Yield ``(line_number, graph)`` for every record; ``>>`` comment lines are skipped."""
    for lineno, raw in enumerate(lines, start=1):
        text = raw.strip()
        if not text:
            continue
        if text.startswith(">>") and not text.startswith(">>graph6<<"):
            continue
        if text.startswith(">>graph6<<") and len(text) > 10 and text[10] == " ":
            continue  # header line carrying a free-text description
        try:
            yield lineno, parse_graph6(text)
        except Graph6Error as exc:
            raise Graph6Error(str(exc).rsplit(" (", 1)[0], offset=exc.offset, line=lineno) from None


def parse_edge_list(text: str) -> Graph:
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise DataError(f"line {lineno}: expected 'i j', got {raw!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise DataError(f"line {lineno}: non-integer vertex in {raw!r}") from None
    if not edges:
        raise DataError("edge list is empty")
    try:
        return Graph.from_edges(edges)
    except DataError as exc:
        raise DataError(f"edge list: {exc}") from None


def _looks_like_edge_list(text: str) -> bool:
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line and not line.startswith(">>"):
            return len(line.split()) == 2
    return False


def read_graphs(path: str | Path) -> list[tuple[str, Graph]]:
    """Load a graph6 file (many graphs) or an edge-list file (one graph).

    Graph ids are ``<stem>:<line>`` for graph6 records and ``<stem>`` for
    an edge list.
    """
    path = Path(path)
    text = path.read_text()
    if _looks_like_edge_list(text):
        return [(path.stem, parse_edge_list(text))]
    return [(f"{path.stem}:{ln}", g) for ln, g in iter_graph6(text.splitlines())]


def write_graph6(path: str | Path, graphs: Iterable[Graph]) -> None:
    Path(path).write_text("".join(encode_graph6(g) + "\n" for g in graphs))


def load_cubic_corpus(max_n: int = 14, min_n: int = 4) -> list[tuple[str, Graph]]:
    """The shipped catalogue of all connected cubic graphs with ``min_n <= N <= max_n``."""
    from importlib import resources

    out = []
    for n in range(min_n + min_n % 2, max_n + 1, 2):
        res = resources.files("fixedangle") / "data" / f"cubic_{n:02d}.g6"
        if not res.is_file():
            raise NotFoundError(f"no shipped corpus for n={n}")
        for ln, g in iter_graph6(res.read_text().splitlines()):
            out.append((f"cubic{n}:{ln}", g))
    return out


# generators and named graphs

def random_regular(n: int, d: int, seed: int, retries: int = REGULAR_RETRY_BUDGET) -> Graph:
    """Uniform-ish random ``d``-regular graph from the pairing model.

    Any pairing that produces a self-loop or a repeated edge is discarded
    and the whole pairing redrawn, up to ``retries`` times.
    """
    if (n * d) % 2:
        raise ParityError(f"n*d must be even, got n={n}, d={d}")
    if d < 0 or n <= d:
        raise DataError(f"need 0 <= d < n, got n={n}, d={d}")
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n), d)
    for _ in range(retries):
        perm = rng.permutation(stubs).reshape(-1, 2)
        a, b = perm.min(axis=1), perm.max(axis=1)
        if np.any(a == b):
            continue
        keys = a * n + b
        if len(np.unique(keys)) != len(keys):
            continue
        return Graph(n, tuple(zip(a.tolist(), b.tolist())))
    raise RetryExhaustedError(f"no simple {d}-regular graph on {n} vertices after {retries} pairings")


def cycle_graph(n: int) -> Graph:
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, tuple(outer + spokes + inner))


def heawood_graph() -> Graph:
    """The (3,6)-cage: 14-cycle with chords i -- i+5 from even vertices."""
    ring = [(i, (i + 1) % 14) for i in range(14)]
    chords = [(i, (i + 5) % 14) for i in range(0, 14, 2)]
    return Graph(14, tuple(ring + chords))


def tree_subgraph(spec: TreeSpec, vertex_cap: int = TREE_VERTEX_CAP) -> EdgeSubgraph:
    """The double tree around one edge of a ``d``-regular graph of large girth.

    Vertices 0 and 1 are the central edge; the rest are numbered breadth
    first, so the labeling agrees with :func:`edge_lightcone`.
    """
    d, p = spec.degree, spec.depth
    if d < 3 or p < 1:
        raise DataError(f"tree subgraph needs degree >= 3 and depth >= 1, got {spec}")
    count = spec.vertex_count
    if count > vertex_cap:
        raise CapacityError(f"tree subgraph {spec} has {count} vertices, cap is {vertex_cap}")
    edges = [(0, 1)]
    frontier = [0, 1]
    nxt = 2
    for _ in range(p):
        new = []
        for v in frontier:
            for _ in range(d - 1):
                edges.append((v, nxt))
                new.append(nxt)
                nxt += 1
        frontier = new
    g = Graph(nxt, tuple(edges))
    return EdgeSubgraph(g, 0, tuple(range(nxt)), depth=p)


# lightcones and predicates

def _edge_distances(g: Graph, u: int, v: int, limit: int) -> dict[int, int]:
    dist = {u: 0, v: 0}
    queue = deque([u, v])
    while queue:
        x = queue.popleft()
        if dist[x] >= limit:
            continue
        for y in g.adjacency[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def edge_lightcone(g: Graph, edge: Sequence[int], p: int, induced: bool = False) -> EdgeSubgraph:
    """Subgraph of ``g`` that determines the depth-``p`` QAOA value of ``edge``.

    The vertex set is everything within distance ``p`` of the central edge.
    By default only edges with an endpoint within distance ``p - 1`` are
    kept: an edge joining two distance-``p`` vertices lies outside the
    causal cone, its gate cancels, and dropping it keeps high-girth
    lightcones acyclic. ``induced=True`` keeps every edge between the
    vertices instead; the expectation value is the same either way.
    """
    if p < 1:
        raise DataError(f"depth must be >= 1, got {p}")
    g.find_edge(edge)
    u, v = sorted((int(edge[0]), int(edge[1])))
    dist = _edge_distances(g, u, v, p)

    order = [u, v]
    label = {u: 0, v: 1}
    queue = deque(order)
    while queue:
        x = queue.popleft()
        if dist[x] >= p:
            continue
        for y in g.adjacency[x]:
            if y not in label:
                label[y] = len(order)
                order.append(y)
                queue.append(y)

    kept = []
    for i, j in g.edges:
        if i in label and j in label and (induced or min(dist[i], dist[j]) <= p - 1):
            kept.append((label[i], label[j]))
    sub = Graph(len(order), tuple(kept))
    return EdgeSubgraph(sub, sub.find_edge((0, 1)), tuple(order), depth=p)


def girth(g: Graph) -> int | str:
    """Shortest cycle length, or ``"acyclic"`` for a forest."""
    best = None
    adj = g.adjacency
    for s in range(g.num_vertices):
        dist = {s: 0}
        parent = {s: -1}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            if best is not None and 2 * dist[x] + 1 >= best:
                break
            for y in adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    queue.append(y)
                elif parent[x] != y:
                    length = dist[x] + dist[y] + 1
                    if best is None or length < best:
                        best = length
    return "acyclic" if best is None else best


def is_bipartite(g: Graph) -> bool:
    color = [-1] * g.num_vertices
    for s in range(g.num_vertices):
        if color[s] >= 0:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in g.adjacency[x]:
                if color[y] < 0:
                    color[y] = 1 - color[x]
                    queue.append(y)
                elif color[y] == color[x]:
                    return False
    return True


def validate_regular(g: Graph, d: int) -> bool:
    return all(len(a) == d for a in g.adjacency)


def is_acyclic(g: Graph) -> bool:
    return girth(g) == "acyclic"
