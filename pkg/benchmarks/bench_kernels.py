"""Compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Prints best-of-N wall time per kernel and the speedup. Results of the two
implementations are compared before timing.
"""

import argparse
import time

import numpy as np

from fixedangle import _fallback
from fixedangle.graphs import random_regular

try:
    from fixedangle import _kernels
except ImportError:
    _kernels = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(n_state, n_cut):
    g = random_regular(n_state, 3, seed=0)
    edges = np.ascontiguousarray(g.edge_array(), dtype=np.int64)
    gc = random_regular(n_cut, 3, seed=1)
    cedges = np.ascontiguousarray(gc.edge_array(), dtype=np.int64)
    rng = np.random.default_rng(0)
    state = (rng.normal(size=1 << n_state) + 1j * rng.normal(size=1 << n_state)).astype(np.complex128)
    diag = _fallback.cut_diagonal(n_state, edges).astype(np.int32)
    table = np.exp(-0.3j * np.arange(len(edges) + 1)).astype(np.complex128)
    probs = np.abs(state) ** 2

    def phase(impl):
        s = state.copy()
        return lambda: impl.apply_phase(s, diag, table)

    def mixer(impl):
        s = state.copy()
        return lambda: impl.apply_mixer(s, n_state, 0.39)

    return {
        f"cut_diagonal n={n_state}": lambda impl: (lambda: impl.cut_diagonal(n_state, edges)),
        f"apply_phase n={n_state}": phase,
        f"apply_mixer n={n_state}": mixer,
        f"edge_zz n={n_state}": lambda impl: (lambda: impl.edge_zz(probs, edges)),
        f"maxcut_gray n={n_cut}": lambda impl: (lambda: impl.maxcut_gray(n_cut, cedges)),
    }


def check(n_state):
    g = random_regular(n_state, 3, seed=0)
    edges = np.ascontiguousarray(g.edge_array(), dtype=np.int64)
    a = np.asarray(_kernels.cut_diagonal(n_state, edges))
    assert np.array_equal(a, _fallback.cut_diagonal(n_state, edges))
    assert _kernels.maxcut_gray(n_state, edges)[0] == _fallback.maxcut_gray(n_state, edges)[0]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--state-qubits", type=int, default=20)
    ap.add_argument("--cut-vertices", type=int, default=22)
    args = ap.parse_args(argv)
    if _kernels is None:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation`")
    check(12)
    print(f"{'kernel':<24}{'compiled s':>12}{'numpy s':>12}{'speedup':>10}")
    for name, make in cases(args.state_qubits, args.cut_vertices).items():
        tc = best_of(make(_kernels), args.repeat)
        tp = best_of(make(_fallback), args.repeat)
        print(f"{name:<24}{tc:>12.4f}{tp:>12.4f}{tp / tc:>9.1f}x")


if __name__ == "__main__":
    main()
