"""Generate the connected cubic graph corpus shipped in ``fixedangle/data``.

Graphs are grown from K4 with three local moves: subdividing two distinct
edges and joining the new vertices (n+2), replacing a vertex by a triangle
(n+2), and replacing an edge by a diamond chain (n+4). Bridged graphs come
from joining subdivided edges of two smaller graphs. Isomorphs are discarded and
the per-n counts are checked against the known totals before anything is
written.

    python3 tools/make_cubic_corpus.py --max-n 16
"""

import argparse
import itertools
from collections import defaultdict
from pathlib import Path

import networkx as nx
import numpy as np

KNOWN_COUNTS = {4: 1, 6: 2, 8: 5, 10: 19, 12: 85, 14: 509, 16: 4060}


def _grow(g):
    """Yield (size, child) pairs."""
    n = g.number_of_nodes()
    edges = list(g.edges())
    for e1, e2 in itertools.combinations(edges, 2):
        h = g.copy()
        a, b = n, n + 1
        h.remove_edges_from([e1, e2])
        h.add_edges_from([(e1[0], a), (a, e1[1]), (e2[0], b), (b, e2[1]), (a, b)])
        yield n + 2, h
    for v in list(g.nodes()):
        h = g.copy()
        nbrs = list(h.neighbors(v))
        h.remove_node(v)
        tri = [v, n, n + 1]
        h.add_edges_from(zip(tri, nbrs))
        h.add_edges_from([(tri[0], tri[1]), (tri[1], tri[2]), (tri[0], tri[2])])
        yield n + 2, h
    for x, y in edges:
        h = g.copy()
        d1, d2, d3, d4 = range(n, n + 4)
        h.remove_edge(x, y)
        h.add_edges_from([(x, d1), (d4, y), (d1, d2), (d1, d3), (d2, d3), (d2, d4), (d3, d4)])
        yield n + 4, h


def _bridge(g1, g2):
    n1 = g1.number_of_nodes()
    h2 = nx.relabel_nodes(g2, {v: v + n1 for v in g2.nodes()})
    a, b = n1 + h2.number_of_nodes(), n1 + h2.number_of_nodes() + 1
    for e1 in g1.edges():
        for e2 in h2.edges():
            h = nx.union(g1, h2)
            h.remove_edges_from([e1, e2])
            h.add_edges_from([(e1[0], a), (a, e1[1]), (e2[0], b), (b, e2[1]), (a, b)])
            yield h


def _invariant(h):
    """Spectrum plus sorted per-vertex closed-walk counts.

    Colour refinement cannot separate regular graphs of equal order, so a
    WL hash would put a whole level in one bucket.
    """
    a = nx.to_numpy_array(h, nodelist=sorted(h.nodes()), dtype=np.int64)
    walks, m = [], a.copy()
    for _ in range(6):
        m = m @ a
        walks.append(np.diag(m))
    rows = sorted(map(tuple, np.array(walks).T.tolist()))
    spec = tuple(np.round(np.linalg.eigvalsh(a.astype(float)), 6) + 0.0)
    return (tuple(rows), spec)


class _IsoSet:
    def __init__(self):
        self.buckets = defaultdict(list)

    def add(self, h):
        bucket = self.buckets[_invariant(h)]
        if not any(nx.is_isomorphic(h, o) for o in bucket):
            bucket.append(h)

    def graphs(self):
        return [g for bucket in self.buckets.values() for g in bucket]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=16)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parents[1] / "src/fixedangle/data")
    args = ap.parse_args()

    found = defaultdict(_IsoSet)
    found[4].add(nx.complete_graph(4))
    done = {}
    for n in range(4, args.max_n + 1, 2):
        for n1 in range(4, n // 2, 2):
            if n - 2 - n1 in done and n1 <= n - 2 - n1:
                for g1 in done[n1]:
                    for g2 in done[n - 2 - n1]:
                        for h in _bridge(g1, g2):
                            found[n].add(h)
        level = found.pop(n).graphs()
        done[n] = level
        if len(level) != KNOWN_COUNTS[n]:
            raise SystemExit(f"n={n}: generated {len(level)} graphs, expected {KNOWN_COUNTS[n]}")
        lines = sorted(nx.to_graph6_bytes(g, header=False).decode().strip() for g in level)
        path = args.out / f"cubic_{n:02d}.g6"
        path.write_text(f">>graph6<< connected cubic graphs n={n} count={len(lines)}\n" + "\n".join(lines) + "\n")
        print(f"n={n}: {len(lines)} graphs -> {path}", flush=True)
        for g in level:
            for size, h in _grow(g):
                if size <= args.max_n:
                    found[size].add(h)


if __name__ == "__main__":
    main()
