"""The compiled kernels against the numpy fallback."""

import numpy as np
import pytest

from fixedangle import _fallback, kernels
from fixedangle.graphs import petersen_graph, random_regular

compiled = pytest.importorskip("fixedangle._kernels")


def _cases():
    yield petersen_graph()
    for seed in range(4):
        yield random_regular(12, 3, seed)


def test_backend_selected():
    assert kernels.BACKEND in ("compiled", "python")


def test_pure_python_env_forces_fallback():
    import subprocess
    import sys

    out = subprocess.run(
        [sys.executable, "-c", "import fixedangle.kernels as k; print(k.BACKEND)"],
        env={"FIXEDANGLE_PURE_PYTHON": "1", "PATH": ""},
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "python"


@pytest.mark.parametrize("g", list(_cases()))
def test_cut_diagonal(g):
    e = g.edge_array()
    a = np.asarray(compiled.cut_diagonal(g.num_vertices, e))
    b = np.asarray(_fallback.cut_diagonal(g.num_vertices, e))
    assert np.array_equal(a, b)
    assert a[5] == g.cut_size(5)


@pytest.mark.parametrize("g", list(_cases()))
def test_phase_mixer_and_zz(g):
    n = g.num_vertices
    rng = np.random.default_rng(1)
    state = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
    state /= np.linalg.norm(state)
    diag = np.asarray(_fallback.cut_diagonal(n, g.edge_array()), dtype=np.int32)
    table = np.exp(-0.3j * np.arange(g.num_edges + 1))
    s1, s2 = state.copy(), state.copy()
    compiled.apply_phase(s1, diag, table)
    _fallback.apply_phase(s2, diag, table)
    compiled.apply_mixer(s1, n, 0.7)
    _fallback.apply_mixer(s2, n, 0.7)
    assert np.allclose(s1, s2, atol=1e-13)
    probs = np.abs(s1) ** 2
    assert np.allclose(compiled.edge_zz(probs, g.edge_array()), _fallback.edge_zz(probs, g.edge_array()), atol=1e-13)


@pytest.mark.parametrize("g", list(_cases()))
def test_maxcut_gray(g):
    v1, m1 = compiled.maxcut_gray(g.num_vertices, g.edge_array())
    v2, m2 = _fallback.maxcut_gray(g.num_vertices, g.edge_array())
    assert v1 == v2
    assert g.cut_size(int(m1)) == v1 and g.cut_size(int(m2)) == v2
