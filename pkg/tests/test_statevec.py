import math

import numpy as np
import pytest

from fixedangle.angles import builtin_table
from fixedangle.errors import CapacityError, DataError, NotFoundError
from fixedangle.graphs import (
    Graph,
    TreeSpec,
    complete_graph,
    edge_lightcone,
    heawood_graph,
    random_regular,
    tree_subgraph,
)
from fixedangle.statevec import (
    QaoaAngles,
    edge_zz_expectation,
    expectation_batch,
    qaoa_state,
    simulate_expectation,
)

K2 = complete_graph(2)


def dense_reference(g: Graph, angles: QaoaAngles) -> np.ndarray:
    """Textbook construction with explicit Kronecker-product matrices."""
    n = g.num_vertices
    dim = 1 << n
    cut = np.array([g.cut_size(x) for x in range(dim)], dtype=float)
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    state = np.full(dim, dim ** -0.5, dtype=complex)
    for gamma, beta in zip(angles.gamma, angles.beta):
        state = np.exp(-1j * gamma * cut) * state
        rot = math.cos(beta) * np.eye(2) - 1j * math.sin(beta) * x
        full = np.array([[1.0 + 0j]])
        for _ in range(n):
            full = np.kron(rot, full)
        state = full @ state
    return state


def test_angles_validation():
    a = QaoaAngles((0.1, 0.2), (0.3, 0.4))
    assert a.p == 2
    assert QaoaAngles.from_vector(a.to_vector()) == a
    with pytest.raises(DataError):
        QaoaAngles((0.1,), (0.2, 0.3))
    with pytest.raises(DataError):
        QaoaAngles((), ())
    with pytest.raises(DataError):
        QaoaAngles((float("nan"),), (0.1,))


def test_matches_kronecker_reference():
    g = random_regular(8, 3, 2)
    a = QaoaAngles((0.3, -0.7), (0.9, 0.2))
    assert np.allclose(qaoa_state(g, a), dense_reference(g, a), atol=1e-12)


def test_zero_angles_give_half():
    for seed in range(3):
        g = random_regular(10, 3, seed)
        res = simulate_expectation(g, QaoaAngles.zeros(2))
        assert res.total == pytest.approx(g.num_edges / 2, abs=1e-12)


def test_k2_single_layer_closed_form():
    assert simulate_expectation(K2, QaoaAngles((math.pi / 2,), (math.pi / 8,))).total == pytest.approx(1.0, abs=1e-12)
    for gamma, beta in [(0.3, 0.2), (1.1, -0.4), (2.0, 0.7)]:
        f = edge_zz_expectation(K2, QaoaAngles((gamma,), (beta,)), (0, 1))
        assert f == pytest.approx((1 + math.sin(4 * beta) * math.sin(gamma)) / 2, abs=1e-12)


def test_tree_p2_table_value():
    sub = tree_subgraph(TreeSpec(3, 2))
    res = simulate_expectation(sub.graph, builtin_table(3, 2).angles)
    assert res.per_edge[sub.central_edge] == pytest.approx(0.7559, abs=1e-3)


def test_heawood_every_edge():
    a = builtin_table(3, 2).angles
    g = heawood_graph()
    for e in g.edges[:5]:
        assert edge_zz_expectation(g, a, e) == pytest.approx(0.7559, abs=1e-3)


def test_result_invariants_and_norm():
    g = random_regular(12, 3, 5)
    a = QaoaAngles((0.4, 0.8, 1.0), (0.6, 0.4, 0.2))
    qaoa_state(g, a, check_norm=True)
    res = simulate_expectation(g, a)
    assert abs(res.total - sum(res.per_edge)) < 1e-12
    assert all(0.0 <= f <= 1.0 for f in res.per_edge)
    for k, e in enumerate(g.edges):
        assert edge_zz_expectation(g, a, e) == pytest.approx(res.per_edge[k], abs=1e-12)


def test_k3_symmetric_edges():
    res = simulate_expectation(complete_graph(3), builtin_table(3, 1).angles)
    assert max(res.per_edge) - min(res.per_edge) < 1e-12


@pytest.mark.parametrize("seed", range(6))
def test_lightcone_property(seed):
    g = random_regular(14, 3, seed)
    rng = np.random.default_rng(seed)
    for p in (1, 2):
        a = QaoaAngles.from_vector(rng.uniform(-1, 1, 2 * p))
        full = simulate_expectation(g, a)
        for k in range(0, g.num_edges, 5):
            sub = edge_lightcone(g, g.edges[k], p)
            local = edge_zz_expectation(sub.graph, a, sub.central_pair)
            assert abs(local - full.per_edge[k]) < 1e-10


def test_sign_flip_symmetry():
    g = random_regular(10, 3, 1)
    a = QaoaAngles((0.3, 0.9), (0.5, -0.2))
    b = QaoaAngles(tuple(-x for x in a.gamma), tuple(-x for x in a.beta))
    assert np.allclose(simulate_expectation(g, a).per_edge, simulate_expectation(g, b).per_edge, atol=1e-12)


def test_batch_matches_single():
    g = random_regular(10, 3, 3)
    pts = np.random.default_rng(0).uniform(-1, 1, size=(7, 4))
    batch = expectation_batch(g, pts)
    single = [simulate_expectation(g, QaoaAngles.from_vector(x)).total for x in pts]
    assert np.allclose(batch, single, atol=1e-12)
    e = g.edges[3]
    one = expectation_batch(g, pts, edge=e, max_amplitudes=1 << 11)
    assert np.allclose(one, [edge_zz_expectation(g, QaoaAngles.from_vector(x), e) for x in pts], atol=1e-12)


def test_errors():
    with pytest.raises(CapacityError):
        simulate_expectation(random_regular(26, 3, 0), QaoaAngles.zeros(1))
    with pytest.raises(NotFoundError):
        edge_zz_expectation(complete_graph(3), QaoaAngles.zeros(1), (0, 5))
    with pytest.raises(DataError):
        expectation_batch(K2, np.zeros((2, 3)))
